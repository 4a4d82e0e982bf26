"""Subharmonic models and differences of them.

A model packages a pointwise evaluator, its Riesz charge (1/(2 pi) times
the distributional Laplacian), the points where it takes the value -inf,
and, when one exists, a closed-form circle mean.  Every factory runs a
deterministic sub-mean spot check so a typo in a density is caught at
construction time instead of deep inside a sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import ellipe

from .errors import InvalidModel
from .measures import RadialDensity, RieszCharge
from .quadrature import mean_on_circle

_SPOT_CENTERS = np.array([
    0.3 + 0.1j, -1.2 + 0.4j, 2.1 - 1.3j, 0.05j,
    -0.7 - 0.7j, 1.5 + 0j, -2.2j, 3.1 + 0.2j])
_SPOT_RADII = np.array([0.3, 0.7, 0.4, 0.9, 0.25, 0.6, 0.45, 0.8])


@dataclass(frozen=True, eq=False)
class SubharmonicModel:
    """Subharmonic function with attached charge and optional exact means."""

    kind: str
    params: dict
    eval: Callable
    riesz: RieszCharge
    singular_points: tuple = ()
    exact_circle_mean: Callable | None = None

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            return np.asarray(self.eval(z), dtype=float)


def _validate_submean(model, two_sided=False):
    for z0, t in zip(_SPOT_CENTERS, _SPOT_RADII):
        u0 = float(model(np.array([z0]))[0])
        # the integrated mean is the arbiter; a closed form is only a claim
        m, _ = mean_on_circle(model, z0, t, tol=1e-9,
                              singular_points=model.singular_points)
        slack = 1e-7 * (1.0 + abs(m))
        if model.exact_circle_mean is not None:
            claimed = float(np.asarray(model.exact_circle_mean(
                np.array([z0]), t), dtype=float)[0])
            if math.isfinite(claimed) and abs(claimed - m) > slack:
                raise InvalidModel(
                    "closed-form circle mean disagrees with quadrature at %r "
                    "(claimed %.6g, integrated %.6g)" % (z0, claimed, m))
        if math.isfinite(u0) and u0 > m + slack:
            raise InvalidModel(
                "sub-mean inequality fails at %r (value %.6g, mean %.6g)"
                % (z0, u0, m))
        if two_sided and math.isfinite(u0) and m > u0 + slack:
            raise InvalidModel(
                "mean-value identity fails at %r (value %.6g, mean %.6g)"
                % (z0, u0, m))
    return model


# ---------------------------------------------------------------------------
# factories


def make_radial_power(sigma=1.0, rho=1.0):
    """sigma * |z| ** rho, with charge density sigma rho^2 s^(rho-2) dA/(2 pi)."""
    sigma = float(sigma)
    rho = float(rho)
    if sigma < 0 or rho <= 0:
        raise InvalidModel("needs sigma >= 0 and rho > 0")
    if sigma == 0:
        return make_zero_model()

    def ev(z):
        return sigma * np.abs(z) ** rho

    charge = RieszCharge(radial=(RadialDensity(
        profile=lambda s: sigma * rho * rho * np.asarray(s, dtype=float) ** (rho - 2.0),
        cumulative=lambda t: sigma * rho * t ** rho),))

    exact = None
    if rho == 2.0:
        def exact(z, t):
            return sigma * (np.abs(z) ** 2 + np.asarray(t, dtype=float) ** 2)
    elif rho == 1.0:
        def exact(z, t):
            a = np.abs(z)
            t = np.asarray(t, dtype=float)
            tot = a + t
            with np.errstate(invalid="ignore", divide="ignore"):
                m = np.where(tot > 0, 4.0 * a * t / np.where(tot > 0, tot, 1.0) ** 2, 0.0)
            return sigma * (2.0 / np.pi) * tot * ellipe(m)

    return _validate_submean(SubharmonicModel(
        kind="radial-power", params={"sigma": sigma, "rho": rho},
        eval=ev, riesz=charge, exact_circle_mean=exact))


def make_log_abs_poly(coeffs=None, roots=None, mults=None, lead=1.0):
    """ln |p(z)| for a polynomial given by coefficients or by its roots.

    Coefficient input is factored numerically; root clusters within 1e-5
    are merged into one root with integer multiplicity.
    """
    if coeffs is not None:
        if roots is not None:
            raise InvalidModel("give coefficients or roots, not both")
        c = np.asarray(coeffs, dtype=complex).ravel()
        c = np.trim_zeros(c, "f")
        if c.size == 0:
            raise InvalidModel("zero polynomial has no log modulus")
        lead = complex(c[0])
        raw = np.roots(c) if c.size > 1 else np.zeros(0, dtype=complex)
        roots, mults = _cluster_roots(raw, tol=1e-5)
    else:
        roots = np.asarray([] if roots is None else roots, dtype=complex).ravel()
        mults = (np.ones(roots.size, dtype=int) if mults is None
                 else np.asarray(mults, dtype=int).ravel())
        roots, mults = _cluster_roots(np.repeat(roots, mults), tol=0.0)
    lead_abs = abs(complex(lead))
    if lead_abs == 0:
        raise InvalidModel("leading coefficient must be nonzero")
    log_lead = math.log(lead_abs)
    rts = np.asarray(roots, dtype=complex)
    mls = np.asarray(mults, dtype=float)

    def ev(z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, log_lead, dtype=float)
        for r, m in zip(rts, mls):
            out += m * np.log(np.abs(z - r))
        return out

    def exact(z, t):
        z = np.asarray(z, dtype=complex)
        t = np.asarray(t, dtype=float)
        out = np.full(np.broadcast(z, t).shape, log_lead, dtype=float)
        for r, m in zip(rts, mls):
            out += m * np.log(np.maximum(np.abs(z - r), t))
        return out

    return _validate_submean(SubharmonicModel(
        kind="log-abs-poly",
        params={"roots": [complex(r) for r in rts],
                "mults": [int(m) for m in mls], "lead": complex(lead)},
        eval=ev,
        riesz=RieszCharge.from_atoms(rts, mls),
        singular_points=tuple(complex(r) for r in rts),
        exact_circle_mean=exact))


def _cluster_roots(raw, tol):
    roots = []
    mults = []
    for r in raw:
        for i, s in enumerate(roots):
            if abs(r - s) <= tol:
                roots[i] = (roots[i] * mults[i] + r) / (mults[i] + 1)
                mults[i] += 1
                break
        else:
            roots.append(complex(r))
            mults.append(1)
    return np.asarray(roots, dtype=complex), np.asarray(mults, dtype=int)


def make_log_poly_growth():
    """ln(1 + |z|^2): smooth, with charge density 4 / (1 + s^2)^2 dA/(2 pi)."""

    def ev(z):
        return np.log1p(np.abs(z) ** 2)

    charge = RieszCharge(radial=(RadialDensity(
        profile=lambda s: 4.0 / (1.0 + np.asarray(s, dtype=float) ** 2) ** 2,
        cumulative=lambda t: 2.0 * t * t / (1.0 + t * t)),))
    return _validate_submean(SubharmonicModel(
        kind="log-poly-growth", params={}, eval=ev, riesz=charge))


def make_harmonic(h, params=None, kind="harmonic"):
    """Wrap a harmonic evaluator; the mean-value identity is spot checked."""

    def ev(z):
        return np.asarray(h(np.asarray(z, dtype=complex)), dtype=float)

    def exact(z, t):
        del t
        return ev(z)

    return _validate_submean(SubharmonicModel(
        kind=kind, params=dict(params or {}), eval=ev,
        riesz=RieszCharge.empty(), exact_circle_mean=exact), two_sided=True)


def make_custom_radial(phi, dphi, params=None):
    """phi(ln |z|) with radial derivative dphi supplied by the caller.

    The disk mass function is t -> dphi(ln t); phi must be convex and
    dphi nonnegative and nondecreasing (spot checked).
    """
    xs = [-3.0, -1.0, 0.0, 1.0, 2.5]
    vals = [float(dphi(x)) for x in xs]
    if any(v < -1e-12 for v in vals) or any(
            b < a - 1e-12 for a, b in zip(vals, vals[1:])):
        raise InvalidModel("dphi must be nonnegative and nondecreasing")

    def ev(z):
        with np.errstate(divide="ignore"):
            x = np.log(np.abs(np.asarray(z, dtype=complex)))
        return np.asarray(phi(x), dtype=float)

    h = 1e-5

    def profile(s):
        s = np.asarray(s, dtype=float)
        x = np.log(s)
        second = (np.asarray(dphi(x + h), dtype=float)
                  - np.asarray(dphi(x - h), dtype=float)) / (2.0 * h)
        return second / s ** 2

    charge = RieszCharge(radial=(RadialDensity(
        profile=profile, cumulative=lambda t: float(dphi(math.log(t)))),))
    return _validate_submean(SubharmonicModel(
        kind="custom-radial", params=dict(params or {}), eval=ev, riesz=charge))


def make_zero_model():
    def ev(z):
        return np.zeros(np.asarray(z).shape, dtype=float)

    def exact(z, t):
        del t
        return np.zeros(np.asarray(z).shape, dtype=float)

    return SubharmonicModel(kind="zero", params={}, eval=ev,
                            riesz=RieszCharge.empty(), exact_circle_mean=exact)


def model_sum(*models):
    models = tuple(models)
    if not models:
        return make_zero_model()
    charge = RieszCharge.empty()
    for m in models:
        charge = charge + m.riesz
    singular = tuple(p for m in models for p in m.singular_points)

    def ev(z):
        out = models[0](z)
        for m in models[1:]:
            out = out + m(z)
        return out

    exact = None
    if all(m.exact_circle_mean is not None for m in models):
        def exact(z, t):
            out = np.asarray(models[0].exact_circle_mean(z, t), dtype=float)
            for m in models[1:]:
                out = out + np.asarray(m.exact_circle_mean(z, t), dtype=float)
            return out

    return SubharmonicModel(
        kind="sum", params={"terms": [m.kind for m in models]},
        eval=ev, riesz=charge, singular_points=singular,
        exact_circle_mean=exact)


# ---------------------------------------------------------------------------
# differences


@dataclass(frozen=True, eq=False)
class DSubharmonicMajorant:
    """M = up - low with the convention M := +inf wherever low = -inf."""

    up: SubharmonicModel
    low: SubharmonicModel = field(default_factory=make_zero_model)

    @property
    def charge(self):
        return self.up.riesz + (-self.low.riesz)

    def __call__(self, z):
        return eval_M(self, z)


def eval_M(M, z):
    z = np.asarray(z, dtype=complex)
    up = M.up(z)
    low = M.low(z)
    with np.errstate(invalid="ignore"):
        return np.where(np.isneginf(low), math.inf, up - low)
