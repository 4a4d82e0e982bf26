"""Construction side: canonical products and the sufficiency bound.

The genus is probed from dyadic block sums (or read off a generator's
density exponent), elementary factors are evaluated through a tail
series that stays accurate near u = 0, and the finite product carries a
certified bound for everything it discarded.  verify_sufficiency then
checks ln|f| against the enlarged-mean envelope pointwise, refusing to
certify anything whose margin sweep already rules it out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GenusOverflow, NotSummable
from .means import hat_radius
from .measures import _ExplicitBackend, _GaussianBackend, _RealMultiplesBackend

_SERIES_TERMS = 60


def genus(Z, *, max_genus=8, probe_radius=4096.0):
    """Smallest p making sum of mult * |z_j|^-(p+1) converge.

    Generators answer through their density exponent; explicit sets are
    probed through dyadic block sums, accepting p once the last three
    block ratios decay below 0.8.
    """
    b = Z._backend
    if Z.unbounded:
        d = Z.density_exponent
        if d is None:
            raise DomainError("unbounded distribution without a density exponent")
        p = int(math.floor(d))
        if p > max_genus:
            raise GenusOverflow("genus %d exceeds cap %d" % (p, max_genus))
        return p
    if not Z.enumerable:
        raise DomainError("genus probe needs point data")
    if isinstance(b, _ExplicitBackend):
        pts, ml = b.points, b.mults
    else:
        pts, ml = Z.points_up_to(min(b.max_radius, probe_radius))
    r = np.abs(pts)
    keep = r >= 1.0
    r = r[keep]
    ml = ml[keep]
    if r.size == 0:
        return 0
    kmax = int(math.floor(math.log2(float(r.max())))) + 1
    blocks = np.floor(np.log2(r)).astype(int)
    for p in range(max_genus + 1):
        sums = np.zeros(kmax + 1)
        np.add.at(sums, blocks, ml * r ** (-(p + 1.0)))
        nz = [s for s in sums if s > 0]
        if len(nz) <= 3:
            return p
        ratios = [b2 / b1 for b1, b2 in zip(nz[-4:], nz[-3:])]
        if all(q <= 0.8 for q in ratios):
            return p
    raise GenusOverflow("no genus up to %d shows summable block decay"
                        % max_genus)


# ---------------------------------------------------------------------------
# elementary factors


def _log_E_complex(u, p):
    """log E_p(u): a truncated Taylor tail below |u| = 1/2, the direct
    formula above it.  Horner over Taylor bins keeps the truncation under
    1e-19 while spending few terms on far-away factors."""
    u = np.asarray(u, dtype=complex)
    au = np.abs(u)
    out = np.empty(u.shape, dtype=complex)
    small = au <= 0.1
    mid = (au > 0.1) & (au <= 0.5)
    for mask, terms in ((small, 18), (mid, _SERIES_TERMS)):
        if mask.any():
            us = u[mask]
            acc = np.zeros(us.shape, dtype=complex)
            for k in range(p + terms, p, -1):
                acc = acc * us + 1.0 / k
            out[mask] = -(us ** (p + 1)) * acc
    big = au > 0.5
    if big.any():
        ub = u[big]
        with np.errstate(divide="ignore", invalid="ignore"):
            acc = np.log(1.0 - ub)
        term = np.ones(ub.shape, dtype=complex)
        for k in range(1, p + 1):
            term = term * ub
            acc = acc + term / k
        out[big] = acc
    return out


def _log_abs_E(u, p):
    return _log_E_complex(u, p).real


_BLOCK_ELEMS = 1 << 22


def _sum_log_E(zflat, points, mults, p):
    """Sum of mult * log E_p(z / a) over the retained zeros, blockwise."""
    n = zflat.size
    out = np.zeros(n, dtype=complex)
    K = points.size
    if K == 0 or n == 0:
        return out
    inv_a = 1.0 / points
    rows = max(1, _BLOCK_ELEMS // K)
    # rows hitting a zero exactly produce non-finite factors here; the
    # caller's guard mask overwrites them
    with np.errstate(all="ignore"):
        for i0 in range(0, n, rows):
            zb = zflat[i0:i0 + rows]
            u = zb[:, None] * inv_a[None, :]
            out[i0:i0 + rows] = _log_E_complex(u, p) @ mults
    return out


@dataclass(frozen=True, eq=False)
class ProductRepresentation:
    """Finite canonical product with a certified bound on its tail."""

    genus: int
    points: np.ndarray
    mults: np.ndarray
    origin_mult: int
    cutoff_radius: float
    tail_sum_bound: float
    guard: float = 1e-12

    @property
    def retained(self):
        return int(self.points.size)

    def _guard_mask(self, z):
        z = np.asarray(z, dtype=complex)
        near = np.zeros(z.shape, dtype=bool)
        K = self.points.size
        if K:
            flat = z.ravel()
            nf = near.ravel()
            rows = max(1, _BLOCK_ELEMS // K)
            for i0 in range(0, flat.size, rows):
                d = np.abs(flat[i0:i0 + rows, None] - self.points[None, :])
                nf[i0:i0 + rows] = d.min(axis=1) <= self.guard
            near = nf.reshape(z.shape)
        if self.origin_mult:
            near |= np.abs(z) <= self.guard
        return near

    def log_abs(self, z):
        """ln of the absolute value of the finite product, -inf in guard zones."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = _sum_log_E(flat, self.points, self.mults, self.genus).real
        if self.origin_mult:
            with np.errstate(divide="ignore"):
                out += self.origin_mult * np.log(np.abs(flat))
        near = self._guard_mask(flat)
        out[near] = -math.inf
        return out.reshape(z.shape)

    def log_value(self, z):
        """Complex logarithm of the finite product, branch per factor."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = _sum_log_E(flat, self.points, self.mults, self.genus)
        if self.origin_mult:
            out += self.origin_mult * np.log(flat.astype(complex))
        return out.reshape(z.shape)

    def tail_budget(self, z):
        """Bound on the discarded factors' effect on ln|f| at z.

        Valid when the cutoff dominates 2|z| so every discarded factor
        sits in the series regime; infinite otherwise.
        """
        z = np.asarray(z, dtype=complex)
        az = np.abs(z)
        p = self.genus
        with np.errstate(over="ignore"):
            bound = 2.0 * az ** (p + 1) / (p + 1) * self.tail_sum_bound
        return np.where(self.cutoff_radius >= 2.0 * az, bound, math.inf)


def build_product(Z, p=None, *, K=10000, guard=1e-12):
    """Retain about K zeros nearest the origin and bound the rest."""
    if not Z.enumerable:
        raise DomainError("product construction needs point data")
    if p is None:
        p = genus(Z)
    b = Z._backend
    if isinstance(b, _RealMultiplesBackend):
        cutoff = K * b.step
        if b.max_radius is not None:
            cutoff = min(cutoff, b.max_radius)
    elif isinstance(b, _GaussianBackend):
        cutoff = b.scale * math.sqrt(4.0 * K / math.pi)
        if b.max_radius is not None:
            cutoff = min(cutoff, b.max_radius)
    else:
        radii = np.abs(b.points)
        if radii.size > K:
            cutoff = float(np.sort(radii)[K - 1])
        else:
            cutoff = float(radii.max()) if radii.size else 1.0
    pts, ml = Z.points_up_to(cutoff)
    at_origin = np.abs(pts) <= guard
    origin_mult = int(ml[at_origin].sum()) if at_origin.any() else 0
    pts, ml = pts[~at_origin], ml[~at_origin]
    tail = Z.tail_power_sum_bound(p + 1, cutoff)
    if not math.isfinite(tail):
        raise NotSummable(
            "tail of order %d diverges beyond radius %.6g" % (p + 1, cutoff))
    return ProductRepresentation(
        genus=int(p), points=pts, mults=np.asarray(ml, dtype=float),
        origin_mult=origin_mult, cutoff_radius=float(cutoff),
        tail_sum_bound=float(tail), guard=guard)


def weierstrass_log_abs(Z, p, z, *, K=10000, guard=1e-12):
    prod = build_product(Z, p, K=K, guard=guard)
    return prod.log_abs(z), prod.tail_budget(z)


def winding_number(product, center, radius, *, samples=4096):
    """Winding of the finite product around a circle, from sampled phases."""
    theta = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    z = complex(center) + float(radius) * np.exp(1j * theta)
    phase = product.log_value(z).imag
    d = np.diff(np.concatenate((phase, phase[:1])))
    d = (d + math.pi) % (2.0 * math.pi) - math.pi
    return int(round(float(d.sum()) / (2.0 * math.pi)))


# ---------------------------------------------------------------------------
# the sufficiency bound


def remainder_R(profile, z, domain_kind=None, a=None):
    """Domain-dependent additive remainder of the envelope bound."""
    z = np.asarray(z, dtype=complex)
    kind = domain_kind or profile.domain_kind
    if kind == "plane":
        return np.zeros(z.shape, dtype=float)
    if kind in ("disk", "simply-connected"):
        r = np.asarray(profile.radius(z), dtype=float)
        with np.errstate(divide="ignore"):
            return -np.log(r)
    if kind == "general":
        if a is None:
            raise DomainError("general domains need the excess exponent a")
        r = np.asarray(profile.radius(z), dtype=float)
        with np.errstate(divide="ignore"):
            return -np.log(r) + (1.0 + float(a)) * np.log1p(np.abs(z))
    raise DomainError("unknown domain kind %r" % kind)


@dataclass(frozen=True)
class SufficiencyReport:
    certified: bool
    reason: str
    margin_verdict: str | None
    genus: int
    retained: int
    checked: int
    violations: int
    skipped_guard: int
    max_excess: float
    tail_budget_max: float
    balance_used: bool
    balance_coeffs: tuple
    rows: tuple


def _balance_matrix(z, p):
    z = np.asarray(z, dtype=complex)
    cols = [np.ones(z.shape, dtype=float)]
    for m in range(1, p + 1):
        zm = z ** m
        cols.append(zm.real)
        cols.append(-zm.imag)
    return np.vstack(cols).T


def verify_sufficiency(Z, M, profile, grid_points, *, K=10000, tol=1e-7,
                       family=None, margin_verdict=None, balance=True):
    """Check ln|f| <= enlarged-mean envelope on a grid of points.

    When a margin verdict (or a family to compute one) says the
    necessary criterion is violated, no construction is attempted.
    Otherwise the finite product plus its tail budget is compared with
    circle means of the upper part at the certified enlarged radius,
    minus the lower part, plus the domain remainder.  A polynomial
    balancing factor of degree up to the genus may be fitted when a few
    grid points stick out; it is kept only when it clears almost all of
    them.
    """
    if margin_verdict is None and family is not None:
        from .criterion import margin_sweep
        margin_verdict = margin_sweep(Z, M, family).verdict
    if margin_verdict == "violated":
        return SufficiencyReport(
            certified=False, reason="margin-violated",
            margin_verdict=margin_verdict, genus=-1, retained=0, checked=0,
            violations=0, skipped_guard=0, max_excess=math.nan,
            tail_budget_max=math.nan, balance_used=False, balance_coeffs=(),
            rows=())
    p = genus(Z)
    product = build_product(Z, p, K=K)
    grid = np.asarray(grid_points, dtype=complex).ravel()
    near = product._guard_mask(grid)
    skipped = int(near.sum())
    grid = grid[~near]

    log_abs = product.log_abs(grid)
    tails = product.tail_budget(grid)
    bounds = np.empty(grid.shape, dtype=float)
    budgets = np.empty(grid.shape, dtype=float)
    up, low = M.up, M.low
    from .means import _circle_mean_fast
    for i, z in enumerate(grid):
        hat = hat_radius(profile, complex(z))
        m_up, e = _circle_mean_fast(up, complex(z), hat.certified_upper,
                                    tol / 4.0)
        low_v = float(low(np.array([z]))[0])
        rem = float(remainder_R(profile, np.array([z]))[0])
        if math.isinf(low_v) and low_v < 0:
            bounds[i] = math.inf
        else:
            bounds[i] = m_up - low_v + rem
        budgets[i] = e

    def excesses(shift):
        return (log_abs + shift) + tails - bounds - budgets - tol

    exc = excesses(0.0)
    viol = exc > 0
    coeffs = ()
    used_balance = False
    if viol.any() and balance and grid.size:
        A_v = _balance_matrix(grid[viol], p)
        target = -exc[viol]
        sol, *_ = np.linalg.lstsq(A_v, target, rcond=None)
        shift = _balance_matrix(grid, p) @ sol
        exc2 = excesses(shift)
        if int((exc2 > 0).sum()) <= max(0, int(0.001 * grid.size)):
            exc = exc2
            viol = exc2 > 0
            coeffs = tuple(float(c) for c in sol)
            used_balance = True

    n_viol = int(viol.sum())
    certified = n_viol <= int(0.001 * grid.size)
    rows = tuple(
        {"z": complex(z), "log_abs": float(log_abs[i]),
         "tail": float(tails[i]), "bound": float(bounds[i]),
         "excess": float(exc[i]), "ok": not bool(viol[i])}
        for i, z in enumerate(grid))
    finite_tails = tails[np.isfinite(tails)]
    return SufficiencyReport(
        certified=certified,
        reason="ok" if certified else "excess-at-grid",
        margin_verdict=margin_verdict, genus=p, retained=product.retained,
        checked=int(grid.size), violations=n_viol, skipped_guard=skipped,
        max_excess=float(exc.max()) if grid.size else -math.inf,
        tail_budget_max=float(finite_tails.max()) if finite_tails.size else 0.0,
        balance_used=used_balance, balance_coeffs=coeffs, rows=rows)
