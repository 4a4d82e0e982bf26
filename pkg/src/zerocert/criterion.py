"""Necessity-side probes.

margin_sweep integrates a family of origin spikes against both the
candidate zeros and the majorant's charge and watches the gap; a gap
that grows like a power of the cutoff rules out any admissible function
vanishing on the candidate set.  check_m0 probes the regularity of the
upper envelope by comparing it to its own circle means at profile radii.
lemma1_constants extracts the comparison constants of the disk-regime
necessity bound from a Green function and the majorant's charge.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotSummable
from .jensen import green_disk
from .majorants import eval_M
from .means import PlanePowerProfile, circle_mean
from .measures import Region
from .quadrature import TWO_PI, ToleranceFailure

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# margin sweep


@dataclass(frozen=True)
class MarginSample:
    tau: float
    lhs: float
    rhs: float
    margin: float
    rhs_budget: float
    note: str = ""


@dataclass(frozen=True)
class MarginCurve:
    samples: tuple
    verdict: str
    growth_exponent: float | None
    fit_r2: float | None
    budget: float
    details: dict


def margin_sweep(Z, M, family, *, tol=1e-9, threads=1):
    """Sweep the family, comparing zero mass against majorant charge.

    Each cutoff tau yields lhs = sum of mult * spike(z_j) and
    rhs = integral of the spike against the majorant charge; verdicts
    look at how lhs - rhs behaves as tau grows.
    """
    if not Z.enumerable:
        raise DomainError("margin sweep needs point data, not a radial rule")
    if Z.has_point_at_origin():
        raise DomainError("candidate zeros must avoid the origin")
    taus = family.taus()
    tests = [family.applied(t) for t in taus]
    reach = 1.05 * max(t.support_radius for t in tests)
    pts, ml = Z.points_up_to(reach)
    radii = np.abs(pts)
    charge = M.charge

    def one(test):
        lhs = float(np.sum(ml * np.asarray(
            test.radial_profile(radii), dtype=float))) if pts.size else 0.0
        try:
            rhs, err = charge.integrate_radial(
                test.radial_profile, center=0j, tol=tol,
                g_support=test.support_radius,
                singular_radii=test.kink_radii)
        except (NotSummable, ToleranceFailure) as exc:
            return MarginSample(tau=test.params["t"], lhs=lhs, rhs=math.nan,
                                margin=math.nan, rhs_budget=math.nan,
                                note=type(exc).__name__)
        return MarginSample(tau=test.params["t"], lhs=lhs, rhs=rhs,
                            margin=lhs - rhs, rhs_budget=err)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = list(pool.map(one, tests))
    else:
        samples = [one(t) for t in tests]

    kept = [s for s in samples if not s.note]
    dropped = len(samples) - len(kept)
    if not kept:
        return MarginCurve(samples=tuple(samples), verdict="inconclusive",
                           growth_exponent=None, fit_r2=None, budget=math.nan,
                           details={"dropped": dropped,
                                    "reason": "no summable samples"})
    budget = max(s.rhs_budget for s in kept)
    tau_max = max(s.tau for s in kept)
    top = [s for s in kept if s.tau >= tau_max / 10.0]
    threshold = 10.0 * max(budget, tol)

    exponent = None
    r2 = None
    pos = [(s.tau, s.margin) for s in top if s.margin > threshold]
    if len(pos) >= 3:
        lx = np.log([p[0] for p in pos])
        ly = np.log([p[1] for p in pos])
        A = np.vstack([lx, np.ones_like(lx)]).T
        coef, res, _, _ = np.linalg.lstsq(A, ly, rcond=None)
        exponent = float(coef[0])
        ss_tot = float(np.sum((ly - ly.mean()) ** 2))
        ss_res = float(res[0]) if res.size else float(
            np.sum((ly - A @ coef) ** 2))
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0

    margins = [s.margin for s in top]
    verdict = "inconclusive"
    if (exponent is not None and exponent >= 0.5
            and margins[-1] > threshold
            and all(m > 0 for m in margins)):
        verdict = "violated"
    elif (all(m <= threshold for m in margins)
          or (exponent is not None and exponent < 0.25)
          or all(b <= a + threshold for a, b in zip(margins, margins[1:]))):
        verdict = "consistent"
    details = {"dropped": dropped, "threshold": threshold,
               "tau_max": tau_max, "n_top": len(top),
               "family": getattr(family, "kind", "unknown")}
    return MarginCurve(samples=tuple(samples), verdict=verdict,
                       growth_exponent=exponent, fit_r2=r2,
                       budget=budget, details=details)


# ---------------------------------------------------------------------------
# upper-envelope regularity


@dataclass(frozen=True)
class M0Report:
    c_estimate: float
    bounded: bool
    samples: tuple
    flagged: tuple
    shell_sups: tuple
    power: float


def m0_dyadic_grid(r_max, per_shell=8):
    """Deterministic probe grid: per_shell golden-angle points in each
    dyadic shell of 1 + |z| up to r_max."""
    shells = int(math.ceil(math.log2(1.0 + float(r_max)))) + 1
    pts = []
    j = 0
    for k in range(shells):
        lo = 2.0 ** k - 1.0
        hi = min(2.0 ** (k + 1) - 1.0, float(r_max))
        if hi <= lo:
            continue
        for i in range(per_shell):
            frac = (i + 0.5) / per_shell
            r = lo + frac * (hi - lo)
            theta = TWO_PI * ((j * _GOLDEN) % 1.0)
            pts.append(r * complex(math.cos(theta), math.sin(theta)))
            j += 1
    return np.asarray(pts, dtype=complex)


def check_m0(M_up, P, points, *, tol=1e-8):
    """Deviation of the upper envelope from its own circle means.

    deviation(z) = mean of M_up on the circle of radius (1 + |z|)^-P
    about z, minus M_up(z); always nonnegative for subharmonic M_up,
    and its boundedness over the plane is the regularity being probed.
    The estimate is the running supremum over dyadic shells; bounded is
    declared when the supremum moves by at most 1% across the two
    outermost shells.
    """
    profile = PlanePowerProfile(P)
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size == 0:
        raise DomainError("need at least one probe point")
    samples = []
    for z in pts:
        z = complex(z)
        r = float(profile.radius(z))
        m, err = circle_mean(M_up, z, r, tol=tol)
        u0 = float(np.asarray(M_up(np.array([z])), dtype=float)[0])
        dev = m - u0
        shell = int(math.floor(math.log2(1.0 + abs(z))))
        samples.append({"z": z, "deviation": dev, "budget": err,
                        "shell": shell})
    shells = sorted({s["shell"] for s in samples})
    shell_sups = tuple(max(s["deviation"] for s in samples
                           if s["shell"] == k) for k in shells)
    running = []
    cur = -math.inf
    for v in shell_sups:
        cur = max(cur, v)
        running.append(cur)
    c_estimate = running[-1]
    if len(running) >= 2:
        prev = running[-2]
        bounded = (running[-1] - prev) <= 0.01 * (1.0 + abs(prev))
    else:
        bounded = True
    flagged = ()
    if not bounded:
        prev = running[-2]
        flagged = tuple((s["z"], s["deviation"]) for s in samples
                        if s["shell"] == shells[-1]
                        and s["deviation"] > prev * 1.01)
    return M0Report(c_estimate=c_estimate, bounded=bounded,
                    samples=tuple(samples), flagged=flagged,
                    shell_sups=shell_sups, power=float(P))


# ---------------------------------------------------------------------------
# disk-regime comparison constants


@dataclass(frozen=True)
class Lemma1Constants:
    c_test: float
    inf_green: float
    c_majorant: float
    parts: dict
    budget: float


def _min_green_on_circle(g, center, radius, grid=2048):
    theta = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    z = center + radius * np.exp(1j * theta)
    vals = np.asarray(g(z), dtype=float)
    i = int(np.argmin(vals))
    lo = theta[i] - TWO_PI / grid
    hi = theta[i] + TWO_PI / grid
    best = float(vals[i])
    for _ in range(6):
        t = np.linspace(lo, hi, 65)
        v = np.asarray(g(center + radius * np.exp(1j * t)), dtype=float)
        j = int(np.argmin(v))
        best = min(best, float(v[j]))
        step = (hi - lo) / 64.0
        lo, hi = t[j] - step, t[j] + step
    return best


def lemma1_constants(d_tilde, s_region, z0, b, M, *, tol=1e-9):
    """Comparison constants for the disk-regime necessity bound.

    c_test scales the capped test b against the Green function's floor
    on the inner boundary; c_majorant collects the Green integral of the
    majorant's charge, the negative charge outside the inner region, and
    the positive part of the majorant at the pole.
    """
    if not (isinstance(d_tilde, Region) and d_tilde.kind == "disk"):
        raise DomainError("ambient region must be a disk")
    if not (isinstance(s_region, Region) and s_region.kind == "disk"):
        raise DomainError("inner region must be a disk")
    z0 = complex(z0)
    b = float(b)
    if b <= 0:
        raise DomainError("cap b must be positive")
    gap = d_tilde.outer - (abs(s_region.center - d_tilde.center)
                           + s_region.outer)
    if gap <= 0:
        raise DomainError("inner region must sit strictly inside the ambient disk")
    if abs(z0 - s_region.center) >= s_region.outer:
        raise DomainError("pole must lie in the interior of the inner region")
    g = green_disk(d_tilde.outer, z0, d_tilde.center)
    inf_green = _min_green_on_circle(g, s_region.center, s_region.outer)
    if inf_green <= 0:
        raise DomainError("Green floor is not positive; geometry too tight")
    c_test = b / inf_green

    charge = M.charge
    v1, e1 = charge.integrate(g, tol=tol, f_singular_points=(z0,),
                              include=d_tilde, exclude_points=(z0,))
    neg = charge.negative_part()
    v2, e2 = neg.integrate(g, tol=tol, f_singular_points=(z0,),
                           include=d_tilde, exclude_interior=s_region)
    pole_value = float(eval_M(M, np.array([z0]))[0])
    v3 = max(0.0, pole_value)
    parts = {"charge-term": v1, "negative-term": v2, "pole-term": v3}
    return Lemma1Constants(c_test=c_test, inf_green=inf_green,
                           c_majorant=v1 + v2 + v3, parts=parts,
                           budget=e1 + e2)
