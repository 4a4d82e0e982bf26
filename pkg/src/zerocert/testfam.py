"""Test potentials for the necessity criterion.

Plane-regime members are subharmonic, vanish near the origin, and grow
at most logarithmically; inversion w -> 1/w pulls them back to radial
spikes at the origin that are integrated against zero distributions and
majorant charges.  Disk-regime members are capped Green potentials of
circles, zero on the boundary, optionally compactified so their support
stays strictly inside the disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidPotential
from .measures import RadialDensity, Ring, RieszCharge
from .quadrature import mean_on_circle

_SPOT_PAIRS = ((0.4 + 0.2j, 0.15), (1.1 - 0.6j, 0.3),
               (-2.0 + 0.1j, 0.5), (0.2 + 1.4j, 0.25))


def bump_cdf(x):
    """Antiderivative of the unit bump (35/32)(1 - x^2)^3, clamped to [0, 1]."""
    x = np.asarray(x, dtype=float)
    xc = np.clip(x, -1.0, 1.0)
    val = (35.0 / 32.0) * (xc - xc ** 3 + 0.6 * xc ** 5 - xc ** 7 / 7.0
                           + 16.0 / 35.0)
    return np.where(x <= -1.0, 0.0, np.where(x >= 1.0, 1.0, val))


def bump_cdf_integral(x):
    """Antiderivative of bump_cdf with value 0 at -1; equals x for x >= 1."""
    x = np.asarray(x, dtype=float)
    xc = np.clip(x, -1.0, 1.0)
    val = (35.0 / 32.0) * (xc ** 2 / 2.0 - xc ** 4 / 4.0 + xc ** 6 / 10.0
                           - xc ** 8 / 56.0 + (16.0 / 35.0) * xc) + 35.0 / 256.0
    return np.where(x <= -1.0, 0.0, np.where(x >= 1.0, x, val))


def _bump(x):
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) <= 1.0, (35.0 / 32.0) * (1.0 - x ** 2) ** 3, 0.0)


@dataclass(frozen=True, eq=False)
class TestPotential:
    """One catalogue member, evaluated on its own side of the inversion."""

    regime: str
    params: dict
    eval: Callable
    radial_profile: Callable
    charge: RieszCharge
    growth_coefficient: float = 0.0
    zero_radius: float = 0.0
    kink_radii: tuple = ()
    bound: float | None = None
    domain_R: float | None = None
    support_radius: float = math.inf

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        with np.errstate(all="ignore"):
            return np.asarray(self.eval(w), dtype=float)


@dataclass(frozen=True, eq=False)
class PulledBackTest:
    """Inversion pullback: a radial spike at the pole with finite support."""

    pole: complex
    params: dict
    radial_profile: Callable
    support_radius: float
    pole_coefficient: float
    kink_radii: tuple = ()
    source_regime: str = "plane"

    def __call__(self, z):
        d = np.abs(np.asarray(z, dtype=complex) - self.pole)
        return np.asarray(self.radial_profile(d), dtype=float)


# ---------------------------------------------------------------------------
# plane regime


def truncated_log_plane(t):
    """max(0, ln(t |w|)): kinked at |w| = 1/t, exactly ln(t|w|) outside."""
    t = float(t)
    if t <= 0:
        raise InvalidPotential("needs t > 0")

    def profile(s):
        s = np.asarray(s, dtype=float)
        return np.log(np.maximum(1.0, t * s))

    return TestPotential(
        regime="plane", params={"t": t},
        eval=lambda w: profile(np.abs(w)),
        radial_profile=profile,
        charge=RieszCharge(rings=(Ring(0j, 1.0 / t, 1.0),)),
        growth_coefficient=1.0,
        zero_radius=1.0 / t,
        kink_radii=(1.0 / t,))


def smooth_capped_log(t, eps=0.25):
    """Smoothed positive part of ln(t |w|): identical outside e^eps / t,
    identically zero inside e^-eps / t, convex polynomial blend between."""
    t = float(t)
    eps = float(eps)
    if t <= 0 or eps <= 0:
        raise InvalidPotential("needs t > 0 and eps > 0")

    def phi(x):
        x = np.asarray(x, dtype=float)
        return eps * bump_cdf_integral(x / eps)

    def profile(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            x = np.log(t * s)
        return np.where(s > 0, phi(np.where(s > 0, x, 0.0)), 0.0)

    lo = math.exp(-eps) / t
    hi = math.exp(eps) / t

    def density(s):
        s = np.asarray(s, dtype=float)
        return _bump(np.log(t * s) / eps) / (eps * s ** 2)

    def cumulative(r):
        return float(bump_cdf(math.log(t * r) / eps)) if r > 0 else 0.0

    charge = RieszCharge(radial=(RadialDensity(
        profile=density, support=(lo, hi), cumulative=cumulative),))
    return TestPotential(
        regime="plane", params={"t": t, "eps": eps},
        eval=lambda w: profile(np.abs(w)),
        radial_profile=profile,
        charge=charge,
        growth_coefficient=1.0,
        zero_radius=lo)


# ---------------------------------------------------------------------------
# disk regime


def annulus_harmonic_disk_test(R, s, b):
    """Capped Green potential of the circle |z| = s in the disk of radius R:
    equal to b inside, harmonic decay to 0 on the boundary."""
    R, s, b = float(R), float(s), float(b)
    if not (0 < s < R) or b <= 0:
        raise InvalidPotential("needs 0 < s < R and b > 0")
    c = b / math.log(R / s)

    def profile(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            decay = np.log(R / np.maximum(r, 1e-300))
        return np.clip(c * decay, 0.0, b)

    return TestPotential(
        regime="disk", params={"R": R, "s": s, "b": b},
        eval=lambda z: profile(np.abs(z)),
        radial_profile=profile,
        charge=RieszCharge(rings=(Ring(0j, s, -c), Ring(0j, R, c))),
        kink_radii=(s, R),
        bound=b, domain_R=R, support_radius=R)


def compactify_disk_test(v, shrink=0.1):
    """Shift and rescale a disk test so it vanishes at (1 - shrink) R.

    The output keeps the original cap b and stays piecewise harmonic;
    no extra mollification is applied.
    """
    if v.regime != "disk":
        raise InvalidPotential("only disk tests can be compactified")
    shrink = float(shrink)
    if not (0 < shrink < 1):
        raise InvalidPotential("needs 0 < shrink < 1")
    r_edge = (1.0 - shrink) * v.domain_R
    v_edge = float(np.asarray(v.radial_profile(np.array([r_edge])),
                              dtype=float)[0])
    b = v.bound
    if v_edge >= b - 1e-12:
        raise InvalidPotential("test already at its cap at the new edge")
    scale = b / (b - v_edge)
    base = v.radial_profile

    def profile(r):
        r = np.asarray(r, dtype=float)
        return scale * np.maximum(0.0, np.asarray(base(r), dtype=float)
                                  - v_edge)

    inner = [Ring(r.center, r.radius, scale * r.mass)
             for r in v.charge.rings if r.radius < r_edge * (1.0 - 1e-12)]
    balance = -sum(r.mass for r in inner)
    rings = tuple(inner) + (Ring(0j, r_edge, balance),)
    return TestPotential(
        regime="disk", params={**v.params, "shrink": shrink},
        eval=lambda z: profile(np.abs(z)),
        radial_profile=profile,
        charge=RieszCharge(rings=rings),
        kink_radii=tuple(k for k in v.kink_radii if k < r_edge) + (r_edge,),
        bound=b, domain_R=v.domain_R, support_radius=r_edge)


# ---------------------------------------------------------------------------
# inversion


def inversion_pullback(p):
    """Pull a plane test back through w -> 1/w.

    The result is radial about the origin, vanishes beyond
    1 / zero_radius, and blows up at the pole like
    growth_coefficient * ln(1/|z|).
    """
    if p.regime != "plane":
        raise InvalidPotential("only plane tests invert to origin spikes")
    if p.zero_radius <= 0:
        raise InvalidPotential("plane test must vanish near the origin")
    base = p.radial_profile

    def profile(d):
        d = np.asarray(d, dtype=float)
        safe = np.where(d > 0, d, 1.0)
        out = np.asarray(base(1.0 / safe), dtype=float)
        return np.where(d > 0, out, math.inf if p.growth_coefficient > 0
                        else float(base(np.array([math.inf]))))

    return PulledBackTest(
        pole=0j, params=dict(p.params),
        radial_profile=profile,
        support_radius=1.0 / p.zero_radius,
        pole_coefficient=p.growth_coefficient,
        kink_radii=tuple(1.0 / k for k in p.kink_radii),
        source_regime=p.regime)


# ---------------------------------------------------------------------------
# membership battery


@dataclass(frozen=True)
class MembershipReport:
    regime: str
    checks: tuple
    ok: bool


def membership_report(p, *, tol=1e-7):
    """Spot checks that a candidate satisfies its regime's conditions."""
    checks = []

    def add(name, ok, detail):
        checks.append((name, bool(ok), float(detail)))

    regime = getattr(p, "regime", None)
    if regime is None and getattr(p, "source_regime", None) is not None:
        # inversion pullback: radial about the pole, dead beyond its support
        sup = p.support_radius
        hi = sup if math.isfinite(sup) else 1e6
        radii = np.geomspace(1e-6, hi, 41)
        vals = np.asarray(p.radial_profile(radii), dtype=float)
        add("nonnegative", np.all(vals >= -tol), float(vals.min()))
        add("nonincreasing", np.all(np.diff(vals) <= tol),
            float(np.max(np.diff(vals))))
        if math.isfinite(sup):
            outer = np.asarray(p.radial_profile(
                sup * np.array([1.0, 1.5, 4.0])), dtype=float)
            add("vanishes-beyond-support", np.all(np.abs(outer) <= tol),
                float(np.max(np.abs(outer))))
        add("pole-coefficient-in-range",
            -tol <= p.pole_coefficient <= 1.0 + tol, p.pole_coefficient)
        return MembershipReport(regime="pullback", checks=tuple(checks),
                                ok=all(c[1] for c in checks))

    if p.regime == "plane":
        radii = np.geomspace(1e-3, 1e3, 25)
        vals = np.asarray(p.radial_profile(radii), dtype=float)
        add("nonnegative", np.all(vals >= -tol), float(vals.min()))
        if p.zero_radius > 0:
            inner = np.asarray(p.radial_profile(
                p.zero_radius * np.array([0.1, 0.5, 0.99])), dtype=float)
            add("vanishes-near-origin", np.all(np.abs(inner) <= tol),
                float(np.max(np.abs(inner))))
        g = p.growth_coefficient
        c1 = float(p.radial_profile(np.array([1e4]))[0]) - g * math.log(1e4)
        c2 = float(p.radial_profile(np.array([1e8]))[0]) - g * math.log(1e8)
        add("log-growth", abs(c2 - c1) <= 1e-6 * (1.0 + abs(c1)), c2 - c1)
        worst = -math.inf
        for z0, t in _SPOT_PAIRS:
            m, _ = mean_on_circle(p, z0, t, tol=1e-9)
            v0 = float(p(np.array([z0]))[0])
            worst = max(worst, v0 - m)
        add("sub-mean", worst <= tol, worst)
    elif p.regime == "disk":
        R = p.domain_R
        radii = np.linspace(0.0, R, 41)
        vals = np.asarray(p.radial_profile(radii), dtype=float)
        add("nonnegative", np.all(vals >= -tol), float(vals.min()))
        add("capped", np.all(vals <= p.bound + tol), float(vals.max()))
        edge = float(np.asarray(p.radial_profile(
            np.array([p.support_radius])), dtype=float)[0])
        add("zero-at-support-edge", abs(edge) <= tol, edge)
        # the profile is piecewise harmonic between its rings: the value
        # must match small circle means away from the kinks
        kinks = sorted(set(p.kink_radii) | {0.0, p.support_radius})
        worst = 0.0
        for a, bnd in zip(kinks[:-1], kinks[1:]):
            if bnd - a < 1e-9:
                continue
            mid = 0.5 * (a + bnd)
            t = 0.2 * (bnd - a)
            m, _ = mean_on_circle(p, complex(mid), t, tol=1e-10)
            v0 = float(p(np.array([complex(mid)]))[0])
            worst = max(worst, abs(v0 - m))
        add("harmonic-between-rings", worst <= max(tol, 1e-6), worst)
    else:
        raise InvalidPotential("unknown regime %r" % p.regime)
    return MembershipReport(regime=p.regime, checks=tuple(checks),
                            ok=all(c[1] for c in checks))


# ---------------------------------------------------------------------------
# sweep families


def _geometric_taus(t_min, t_max, ratio):
    if not (t_min > 0 and t_max >= t_min and ratio > 1):
        raise InvalidPotential("family grid needs t_min > 0, t_max >= t_min, "
                               "ratio > 1")
    taus = []
    t = t_min
    while t <= t_max * (1.0 + 1e-12):
        taus.append(min(t, t_max))
        t *= ratio
    if taus[-1] < t_max * (1.0 - 1e-12):
        taus.append(t_max)
    return tuple(taus)


@dataclass(frozen=True)
class TruncatedLogFamily:
    t_min: float = 0.5
    t_max: float = 200.0
    ratio: float = 2.0 ** 0.25

    kind = "truncated-log"

    def taus(self):
        return _geometric_taus(self.t_min, self.t_max, self.ratio)

    def applied(self, tau):
        return inversion_pullback(truncated_log_plane(tau))


@dataclass(frozen=True)
class SmoothCappedLogFamily:
    t_min: float = 0.5
    t_max: float = 200.0
    ratio: float = 2.0 ** 0.25
    eps: float = 0.25

    kind = "smooth-capped-log"

    def taus(self):
        return _geometric_taus(self.t_min, self.t_max, self.ratio)

    def applied(self, tau):
        return inversion_pullback(smooth_capped_log(tau, self.eps))
