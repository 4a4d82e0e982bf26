"""Adaptive Gauss-Legendre panel quadrature for vectorized integrands.

Integrands are evaluated on arrays (one call per panel), so callers supply
numpy-vectorized functions.  Integrable singularities are handled by
splitting panels at the singular abscissae: Gauss nodes are interior to
their panel, so a declared singularity is never evaluated.  Undeclared
non-finite points are healed by re-splitting at the offending node.
"""

import heapq
import math

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import EngineError

TWO_PI = 2.0 * math.pi


class ToleranceFailure(EngineError):
    """Adaptive refinement stalled above the requested tolerance.

    ``value`` holds the best estimate reached, ``residual`` the remaining
    error estimate, so callers may downgrade the failure to a flagged value.
    """

    slug = "tolerance-failure"

    def __init__(self, message, value=0.0, residual=math.inf):
        super().__init__(message)
        self.value = value
        self.residual = residual


_NODES = {}


def _nodes(order):
    got = _NODES.get(order)
    if got is None:
        got = _NODES[order] = leggauss(order)
    return got


def integrate(f, a, b, *, tol=1e-10, singularities=(), isolation=None,
              order=16, max_panels=4096, min_width=1e-14):
    """Return (value, error_estimate) for the integral of f over [a, b].

    f maps a float ndarray to one of the same shape.  The error estimate is
    the summed order-n vs order-2n Gauss discrepancy over accepted panels.
    ``singularities`` lists abscissae where f is singular but integrable;
    each gets a short isolating panel (width ``isolation``) so refinement
    concentrates there.  Raises ToleranceFailure when ``max_panels`` panels
    cannot push the estimate under ``tol``.
    """
    a = float(a)
    b = float(b)
    if b <= a:
        if b == a:
            return 0.0, 0.0
        raise ValueError("integration interval is reversed")
    x_lo, w_lo = _nodes(order)
    x_hi, w_hi = _nodes(2 * order)

    def estimates(lo, hi):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        pts = np.concatenate((mid + half * x_lo, mid + half * x_hi))
        with np.errstate(all="ignore"):
            y = np.asarray(f(pts), dtype=float)
        if y.shape != pts.shape:
            raise ValueError("integrand must return an array matching its input")
        finite = np.isfinite(y)
        if not finite.all():
            bad = pts[int(np.flatnonzero(~finite)[0])]
            return 0.0, 0.0, float(bad)
        v_lo = half * float(w_lo @ y[:order])
        v_hi = half * float(w_hi @ y[order:])
        return v_hi, abs(v_hi - v_lo), None

    iso = isolation if isolation is not None else 1e-4 * (b - a)
    cuts = sorted({float(s) for s in singularities if a < s < b})
    edges = [a]
    for s in cuts:
        for e in (s - iso, s, s + iso):
            if edges[-1] + min_width < e < b - min_width:
                edges.append(e)
    edges.append(b)

    total = 0.0
    err_sum = 0.0
    heap = []
    seq = 0
    panels = 0

    def push(lo, hi):
        nonlocal total, err_sum, seq, panels
        stack = [(lo, hi)]
        while stack:
            plo, phi = stack.pop()
            val, err, bad = estimates(plo, phi)
            panels += 1
            if bad is not None:
                if phi - plo <= min_width or panels >= max_panels:
                    raise ToleranceFailure(
                        "integrand not finite near x=%r" % bad,
                        value=total, residual=math.inf)
                # undeclared singular point: make it a panel edge, nudged off
                # the panel boundary so both children keep positive width
                c = min(max(bad, plo + 0.25 * (phi - plo)),
                        phi - 0.25 * (phi - plo))
                stack.append((plo, c))
                stack.append((c, phi))
                continue
            total += val
            err_sum += err
            heapq.heappush(heap, (-err, seq, plo, phi, val, err))
            seq += 1

    for i in range(len(edges) - 1):
        push(edges[i], edges[i + 1])

    while err_sum > tol and heap and panels < max_panels:
        _, _, lo, hi, val, err = heapq.heappop(heap)
        if hi - lo <= min_width:
            # cannot refine further; its error stays in the running total
            continue
        total -= val
        err_sum -= err
        mid = 0.5 * (lo + hi)
        push(lo, mid)
        push(mid, hi)

    if err_sum > tol:
        raise ToleranceFailure(
            "quadrature stalled at residual %.3g (target %.3g)" % (err_sum, tol),
            value=total, residual=err_sum)
    return total, err_sum


def mean_on_circle(f, center, radius, *, tol=1e-10, singular_points=(),
                   kink_circles=(), order=16, max_panels=4096):
    """Average of f over the circle |w - center| = radius.

    Returns (mean, error_estimate).  Angles of singular points lying on or
    near the circle are isolated within a 1e-3 arc so panels stay clear of
    them.  ``kink_circles`` lists (center, radius) pairs of circles across
    which f loses smoothness; crossing angles become panel edges, since a
    grazing intersection leaves a feature narrow enough to hide between
    the nodes of both Gauss rules.  radius == 0 degenerates to a point
    evaluation.
    """
    center = complex(center)
    radius = float(radius)
    if radius < 0:
        raise ValueError("circle radius must be nonnegative")
    if radius == 0.0:
        with np.errstate(all="ignore"):
            v = float(np.asarray(f(np.array([center])), dtype=float)[0])
        return v, 0.0
    angles = []
    for s in singular_points:
        w = complex(s) - center
        d = abs(w)
        if abs(d - radius) <= 0.05 * radius:
            angles.append(math.atan2(w.imag, w.real) % TWO_PI)
    for c2, r2 in kink_circles:
        w = complex(c2) - center
        d = abs(w)
        r2 = float(r2)
        if d <= 1e-300:
            continue
        x = (d * d + radius * radius - r2 * r2) / (2.0 * d * radius)
        beta = math.atan2(w.imag, w.real)
        if abs(x) <= 1.0:
            phi = math.acos(x)
            angles.append((beta + phi) % TWO_PI)
            angles.append((beta - phi) % TWO_PI)
        elif abs(x) <= 1.1:
            # grazing from outside: pin the nearest-approach angle anyway
            angles.append(beta % TWO_PI)
    def g(theta):
        return f(center + radius * np.exp(1j * theta))
    val, err = integrate(g, 0.0, TWO_PI, tol=tol * TWO_PI,
                         singularities=angles, isolation=1e-3,
                         order=order, max_panels=max_panels)
    return val / TWO_PI, err / TWO_PI
