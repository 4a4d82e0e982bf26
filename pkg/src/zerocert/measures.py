"""Zero distributions, signed Riesz charges, and counting primitives.

Charges follow the potential-theory normalization: the charge of a
subharmonic function is 1/(2 pi) times its distributional Laplacian, so
ln|z - a| carries a unit atom at a.  Regions are closed sets.  Counting
results are plain ints, except that the distinguished UNBOUNDED value is
returned when a generator proves a region holds infinitely many points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, EngineError, IndeterminateCount, NotSummable
from .quadrature import integrate, mean_on_circle


class _UnboundedCount:
    """Tagged +infinity for counting results, kept off the float types."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = _UnboundedCount()


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Region:
    """Closed disk, closed annulus, closed disk complement, or the plane.

    Membership is inner <= |z - center| <= outer; complements set
    outer = inf, disks set inner = 0.
    """

    kind: str
    center: complex = 0j
    inner: float = 0.0
    outer: float = math.inf

    @classmethod
    def disk(cls, center, radius):
        radius = float(radius)
        if radius <= 0:
            raise DomainError("disk radius must be positive")
        return cls("disk", complex(center), 0.0, radius)

    @classmethod
    def annulus(cls, center, inner, outer):
        inner = float(inner)
        outer = float(outer)
        if not (0 <= inner <= outer):
            raise DomainError("annulus needs 0 <= inner <= outer")
        return cls("annulus", complex(center), inner, outer)

    @classmethod
    def complement_of_disk(cls, center, radius):
        radius = float(radius)
        if radius <= 0:
            raise DomainError("disk radius must be positive")
        return cls("complement-of-disk", complex(center), radius, math.inf)

    @classmethod
    def whole_plane(cls):
        return cls("whole-plane", 0j, 0.0, math.inf)

    @property
    def bounded(self):
        return math.isfinite(self.outer)

    def contains(self, z):
        d = np.abs(np.asarray(z, dtype=complex) - self.center)
        return (d >= self.inner) & (d <= self.outer)

    def interior_contains(self, z):
        d = np.abs(np.asarray(z, dtype=complex) - self.center)
        ok = d < self.outer
        if self.inner > 0:
            ok &= d > self.inner
        return ok


# ---------------------------------------------------------------------------
# zero distribution backends


class _ExplicitBackend:
    tag = "explicit"
    enumerable = True
    unbounded = False
    density_exponent = None

    def __init__(self, points, mults):
        pts = np.asarray(points, dtype=complex).ravel()
        if mults is None:
            ml = np.ones(pts.size, dtype=float)
        else:
            ml = np.asarray(mults, dtype=float).ravel()
        if ml.shape != pts.shape:
            raise DomainError("points and multiplicities differ in length")
        if pts.size and not (np.all(np.isfinite(pts.real)) and np.all(np.isfinite(pts.imag))):
            raise DomainError("points must be finite")
        if np.any(ml < 1) or np.any(ml != np.round(ml)):
            raise DomainError("multiplicities must be positive integers")
        # merge duplicates so counting functions determine the object
        if pts.size:
            upts, inv = np.unique(pts, return_inverse=True)
            ums = np.zeros(upts.size, dtype=int)
            np.add.at(ums, inv, ml.astype(int))
            self.points, self.mults = upts, ums
        else:
            self.points = np.zeros(0, dtype=complex)
            self.mults = np.zeros(0, dtype=int)

    def params(self):
        return {"count": int(self.points.size)}

    def enumerate_up_to(self, radius):
        mask = np.abs(self.points) <= radius
        return self.points[mask], self.mults[mask]

    def tail_power_sum_bound(self, q, radius):
        mask = np.abs(self.points) > radius
        if not mask.any():
            return 0.0
        return float(np.sum(self.mults[mask] * np.abs(self.points[mask]) ** (-q)))


class _RealMultiplesBackend:
    """Points {k*step : k integer, k != 0}, optionally radius-truncated."""

    tag = "lattice:real-multiples"
    enumerable = True
    density_exponent = 1.0

    def __init__(self, step, max_radius=None):
        step = float(step)
        if step <= 0:
            raise DomainError("lattice step must be positive")
        self.step = step
        self.max_radius = None if max_radius is None else float(max_radius)

    @property
    def unbounded(self):
        return self.max_radius is None

    def params(self):
        return {"step": self.step, "max_radius": self.max_radius}

    def enumerate_up_to(self, radius):
        r = radius if self.max_radius is None else min(radius, self.max_radius)
        if not math.isfinite(r):
            raise DomainError("cannot enumerate an unbounded lattice without a radius")
        kmax = int(math.floor(r / self.step + 1e-12))
        k = np.arange(1, kmax + 1, dtype=float) * self.step
        pts = np.concatenate((k, -k)).astype(complex)
        return pts, np.ones(pts.size, dtype=int)

    def tail_power_sum_bound(self, q, radius):
        # sum over |k*step| > radius of (k*step)^(-q), both signs
        if self.max_radius is not None and radius >= self.max_radius:
            return 0.0
        if q <= 1:
            return math.inf
        k0 = max(1, int(math.floor(radius / self.step)))
        return 2.0 * self.step ** (-q) * k0 ** (1.0 - q) / (q - 1.0)


class _GaussianBackend:
    """Points {scale*(m + n i)} minus the origin, optionally truncated."""

    tag = "lattice:gaussian"
    enumerable = True
    density_exponent = 2.0

    def __init__(self, scale=1.0, max_radius=None):
        scale = float(scale)
        if scale <= 0:
            raise DomainError("lattice scale must be positive")
        self.scale = scale
        self.max_radius = None if max_radius is None else float(max_radius)

    @property
    def unbounded(self):
        return self.max_radius is None

    def params(self):
        return {"scale": self.scale, "max_radius": self.max_radius}

    def enumerate_up_to(self, radius):
        r = radius if self.max_radius is None else min(radius, self.max_radius)
        if not math.isfinite(r):
            raise DomainError("cannot enumerate an unbounded lattice without a radius")
        n = int(math.floor(r / self.scale)) + 1
        g = np.arange(-n, n + 1, dtype=float)
        re, im = np.meshgrid(g, g, indexing="ij")
        pts = (re + 1j * im).ravel() * self.scale
        keep = (np.abs(pts) <= r) & (pts != 0)
        pts = pts[keep]
        return pts, np.ones(pts.size, dtype=int)

    def tail_power_sum_bound(self, q, radius):
        # Each lattice point owns a cell of area scale^2 within 0.71*scale of
        # it, so the tail sum is at most (1/scale^2) * integral over
        # |w| > radius - 1.42*scale of (|w| - 0.71*scale)^(-q) dA.
        if self.max_radius is not None and radius >= self.max_radius:
            return 0.0
        if q <= 2:
            return math.inf
        s = self.scale
        x0 = radius - 1.42 * s
        if x0 <= 0:
            return math.inf
        return (2.0 * math.pi / s ** 2) * (
            x0 ** (2.0 - q) / (q - 2.0) + 0.71 * s * x0 ** (1.0 - q) / (q - 1.0))


class _RadialRuleBackend:
    """Distribution known only through t -> count of the closed disk(0, t)."""

    tag = "radial-rule"
    enumerable = False
    density_exponent = None

    def __init__(self, counting, unbounded=None):
        if not callable(counting):
            raise DomainError("radial rule must be callable")
        self.counting = counting
        self.unbounded = unbounded

    def params(self):
        return {"unbounded": self.unbounded}


class ZeroDistribution:
    """Candidate zero multiset, explicit or generator-backed."""

    def __init__(self, backend):
        self._backend = backend

    @classmethod
    def from_points(cls, points, mults=None):
        return cls(_ExplicitBackend(points, mults))

    @classmethod
    def empty(cls):
        return cls(_ExplicitBackend([], None))

    @classmethod
    def real_multiples(cls, step=math.pi, max_radius=None):
        return cls(_RealMultiplesBackend(step, max_radius))

    @classmethod
    def gaussian_integers(cls, scale=1.0, max_radius=None):
        return cls(_GaussianBackend(scale, max_radius))

    @classmethod
    def radial_rule(cls, counting, unbounded=None):
        return cls(_RadialRuleBackend(counting, unbounded))

    @property
    def generator_tag(self):
        return self._backend.tag

    @property
    def enumerable(self):
        return self._backend.enumerable

    @property
    def unbounded(self):
        return bool(self._backend.unbounded)

    @property
    def density_exponent(self):
        return self._backend.density_exponent

    def points_up_to(self, radius):
        """Points and multiplicities with |z| <= radius (enumerable only)."""
        if not self.enumerable:
            raise DomainError(
                "distribution is known only through its radial counting rule")
        return self._backend.enumerate_up_to(float(radius))

    def max_point_radius(self):
        b = self._backend
        if isinstance(b, _ExplicitBackend):
            return float(np.max(np.abs(b.points))) if b.points.size else 0.0
        return b.max_radius

    def has_point_at_origin(self, tol=1e-15):
        if not self.enumerable:
            try:
                return float(self._backend.counting(tol)) > 0
            except Exception:
                return False
        pts, _ = self._backend.enumerate_up_to(tol)
        return bool(pts.size)

    def tail_power_sum_bound(self, q, radius):
        """Upper bound on sum of mult * |z_j|^(-q) over |z_j| > radius."""
        fn = getattr(self._backend, "tail_power_sum_bound", None)
        if fn is None:
            raise DomainError("no tail bound available for this generator")
        return fn(float(q), float(radius))

    def counting_rule(self, t):
        if self.enumerable:
            raise DomainError("not a rule-backed distribution")
        return float(self._backend.counting(float(t)))

    def __eq__(self, other):
        if not isinstance(other, ZeroDistribution):
            return NotImplemented
        a, b = self._backend, other._backend
        if isinstance(a, _ExplicitBackend) and isinstance(b, _ExplicitBackend):
            return (a.points.shape == b.points.shape
                    and np.array_equal(a.points, b.points)
                    and np.array_equal(a.mults, b.mults))
        return type(a) is type(b) and a.params() == b.params()

    __hash__ = None

    def to_json(self):
        b = self._backend
        if isinstance(b, _ExplicitBackend):
            return {"points": [
                {"re": float(p.real), "im": float(p.imag), "mult": int(m)}
                for p, m in zip(b.points, b.mults)]}
        if isinstance(b, _RealMultiplesBackend):
            return {"generator": {"kind": "real-multiples", "step": b.step,
                                  "max_radius": b.max_radius}}
        if isinstance(b, _GaussianBackend):
            return {"generator": {"kind": "gaussian-integers", "scale": b.scale,
                                  "max_radius": b.max_radius}}
        raise DomainError("rule-backed distributions do not serialize")

    @classmethod
    def from_json(cls, obj):
        if "points" in obj and obj.get("points") is not None:
            pts = [complex(p["re"], p.get("im", 0.0)) for p in obj["points"]]
            mls = [int(p.get("mult", 1)) for p in obj["points"]]
            return cls.from_points(pts, mls)
        gen = obj.get("generator")
        if gen is None:
            raise DomainError("zero distribution needs points or a generator")
        kind = gen.get("kind")
        if kind == "real-multiples":
            return cls.real_multiples(gen.get("step", math.pi), gen.get("max_radius"))
        if kind == "gaussian-integers":
            return cls.gaussian_integers(gen.get("scale", 1.0), gen.get("max_radius"))
        raise DomainError("unknown generator kind %r" % kind)


# ---------------------------------------------------------------------------
# counting operations


def counting_measure(Z, region):
    """Total multiplicity of Z inside the closed region.

    Returns UNBOUNDED when an unbounded generator meets an unbounded region;
    raises IndeterminateCount when a rule-backed distribution cannot settle
    the question (off-center or unbounded regions).
    """
    if not isinstance(region, Region):
        raise DomainError("expected a Region")
    b = Z._backend
    if Z.enumerable:
        if region.bounded:
            pts, ml = b.enumerate_up_to(abs(region.center) + region.outer)
            return int(np.sum(ml[region.contains(pts)])) if pts.size else 0
        if not Z.unbounded:
            pts, ml = b.enumerate_up_to(math.inf if b.max_radius is None
                                        else b.max_radius) \
                if not isinstance(b, _ExplicitBackend) else (b.points, b.mults)
            return int(np.sum(ml[region.contains(pts)])) if pts.size else 0
        # an unbounded lattice leaves every disk, so every unbounded region
        # in our catalogue traps infinitely many of its points
        return UNBOUNDED
    if region.bounded and abs(region.center) <= 1e-12:
        n_out = float(b.counting(region.outer))
        n_in = float(b.counting(region.inner)) if region.inner > 0 else 0.0
        # rule-backed annuli are half-open on the inner edge
        return int(round(n_out - n_in))
    raise IndeterminateCount(
        "rule-backed distribution supports only bounded origin-centered regions")


def nevanlinna_N(Z, t):
    """Sum of mult * ln(t/|z_j|) over 0 < |z_j| <= t."""
    t = float(t)
    if not t > 0:
        raise DomainError("needs t > 0")
    if Z.enumerable:
        pts, ml = Z.points_up_to(t)
        if pts.size == 0:
            return 0.0
        r = np.abs(pts)
        if float(np.min(r)) <= 0.0:
            raise DomainError("distribution has a point at the origin")
        return float(np.sum(ml * np.log(t / r)))
    rule = Z._backend.counting
    if float(rule(min(t, 1.0) * 1e-9)) > 0:
        raise DomainError("distribution has mass at the origin")

    def f(svec):
        return np.array([float(rule(s)) / s for s in svec])

    val, _ = integrate(f, 0.0, t, tol=1e-10 * max(1.0, t))
    return val


# ---------------------------------------------------------------------------
# signed Riesz charges


@dataclass(frozen=True)
class Ring:
    """Uniform circle component: total (signed) mass on |z - center| = radius."""

    center: complex
    radius: float
    mass: float


@dataclass(frozen=True, eq=False)
class RadialDensity:
    """Rotation-invariant absolutely continuous piece around ``center``.

    ``profile(s) >= 0`` is the radial Laplacian density: the unsigned mass of
    the centered disk of radius t is the integral of s * profile(s) over
    [0, t], i.e. d(charge) = profile(|z - center|) dArea / (2 pi).
    ``cumulative``, when given, must equal that disk mass in closed form.
    """

    profile: Callable
    sign: int = 1
    center: complex = 0j
    support: tuple = (0.0, math.inf)
    cumulative: Callable | None = None

    def mass_in(self, t):
        lo, hi = self.support
        t = min(float(t), hi)
        if t <= lo:
            return 0.0
        if self.cumulative is not None:
            return float(self.cumulative(t))
        val, _ = integrate(
            lambda s: s * np.asarray(self.profile(s), dtype=float),
            lo, t, tol=1e-12 * max(1.0, t))
        return val


def _coerce_points(arr):
    return np.asarray(arr, dtype=complex).ravel()


@dataclass(frozen=True, eq=False)
class RieszCharge:
    """Signed charge: point atoms, uniform rings, and radial densities."""

    atom_points: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    atom_masses: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=float))
    rings: tuple = ()
    radial: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atom_points", _coerce_points(self.atom_points))
        object.__setattr__(self, "atom_masses",
                           np.asarray(self.atom_masses, dtype=float).ravel())
        if self.atom_points.shape != self.atom_masses.shape:
            raise DomainError("atom points and masses differ in length")
        object.__setattr__(self, "rings", tuple(self.rings))
        object.__setattr__(self, "radial", tuple(self.radial))

    @classmethod
    def empty(cls):
        return cls()

    @classmethod
    def from_atoms(cls, points, masses):
        return cls(atom_points=points, atom_masses=masses)

    @property
    def is_empty(self):
        return (self.atom_points.size == 0 and not self.rings and not self.radial)

    def __neg__(self):
        return RieszCharge(
            self.atom_points, -self.atom_masses,
            tuple(Ring(r.center, r.radius, -r.mass) for r in self.rings),
            tuple(RadialDensity(d.profile, -d.sign, d.center, d.support,
                                d.cumulative) for d in self.radial))

    def __add__(self, other):
        if not isinstance(other, RieszCharge):
            return NotImplemented
        return RieszCharge(
            np.concatenate((self.atom_points, other.atom_points)),
            np.concatenate((self.atom_masses, other.atom_masses)),
            self.rings + other.rings,
            self.radial + other.radial)

    def __sub__(self, other):
        return self + (-other)

    def positive_part(self):
        keep = self.atom_masses > 0
        return RieszCharge(
            self.atom_points[keep], self.atom_masses[keep],
            tuple(r for r in self.rings if r.mass > 0),
            tuple(d for d in self.radial if d.sign > 0))

    def negative_part(self):
        """The nonnegative measure carrying the negative mass."""
        keep = self.atom_masses < 0
        return RieszCharge(
            self.atom_points[keep], -self.atom_masses[keep],
            tuple(Ring(r.center, r.radius, -r.mass)
                  for r in self.rings if r.mass < 0),
            tuple(RadialDensity(d.profile, 1, d.center, d.support, d.cumulative)
                  for d in self.radial if d.sign < 0))

    # -- mass ---------------------------------------------------------------

    def total_mass_in(self, region):
        val = 0.0
        if self.atom_points.size:
            val += float(np.sum(self.atom_masses[region.contains(self.atom_points)]))
        for ring in self.rings:
            pos = _ring_position(ring, region)
            if pos == "partial":
                raise EngineError("ring crosses the region boundary")
            if pos == "inside":
                val += ring.mass
        for dens in self.radial:
            if abs(dens.center - region.center) > 1e-12:
                raise EngineError(
                    "radial density off the region center; use integrate()")
            hi = min(region.outer, dens.support[1])
            lo = max(region.inner, dens.support[0])
            if hi > lo:
                val += dens.sign * (dens.mass_in(hi) - dens.mass_in(lo))
        return val

    # -- integrals ----------------------------------------------------------

    def integrate_radial(self, g, *, center=0j, tol=1e-9, g_support=math.inf,
                         singular_radii=()):
        """Integral of g(|z - center|) against the charge.

        Rings and radial densities must be centered at ``center``; atoms may
        sit anywhere.  g_support truncates the radial integrals (g vanishes
        beyond it).  Returns (value, error_budget).
        """
        center = complex(center)
        val = 0.0
        err = 0.0
        if self.atom_points.size:
            r = np.abs(self.atom_points - center)
            with np.errstate(all="ignore"):
                gv = np.asarray(g(r), dtype=float)
            live = self.atom_masses != 0
            if not np.all(np.isfinite(gv[live])):
                raise NotSummable("test function unbounded at an atom")
            val += float(np.sum(self.atom_masses[live] * gv[live]))
        for ring in self.rings:
            if abs(ring.center - center) > 1e-12:
                raise EngineError("ring not concentric; use integrate()")
            gv = float(np.asarray(g(np.array([ring.radius])), dtype=float)[0])
            if not math.isfinite(gv) and ring.mass != 0:
                raise NotSummable("test function unbounded on a ring")
            val += ring.mass * gv
        for dens in self.radial:
            if abs(dens.center - center) > 1e-12:
                raise EngineError("radial density not concentric; use integrate()")
            lo = dens.support[0]
            hi = min(dens.support[1], float(g_support))
            if hi <= lo:
                continue
            if not math.isfinite(hi):
                raise DomainError("unbounded radial integral; pass g_support")

            def f(svec, _d=dens):
                return (np.asarray(g(svec), dtype=float)
                        * svec * np.asarray(_d.profile(svec), dtype=float))

            v, e = integrate(f, lo, hi, tol=tol,
                             singularities=[s for s in singular_radii if lo < s < hi])
            val += dens.sign * v
            err += e
        return val, err

    def integrate(self, f, *, tol=1e-9, f_singular_points=(),
                  f_kink_circles=(), include=None, exclude_interior=None,
                  exclude_points=()):
        """Integral of f against the charge, optionally restricted.

        ``include`` keeps only the closed region; ``exclude_interior``
        removes the open interior of another region; ``exclude_points``
        drops atoms sitting at the listed points.  ``f_kink_circles`` lists
        (center, radius) circles across which f loses smoothness, so the
        quadrature can break panels where charge circles cross them.
        Rings and radial parts must be compatible with the restriction
        geometry (concentric, or cleanly inside/outside).  Returns
        (value, error_budget).
        """
        val = 0.0
        err = 0.0
        if self.atom_points.size:
            keep = self.atom_masses != 0
            if include is not None:
                keep &= include.contains(self.atom_points)
            if exclude_interior is not None:
                keep &= ~exclude_interior.interior_contains(self.atom_points)
            for p in exclude_points:
                keep &= np.abs(self.atom_points - complex(p)) > 1e-14
            if keep.any():
                with np.errstate(all="ignore"):
                    fv = np.asarray(f(self.atom_points[keep]), dtype=float)
                if not np.all(np.isfinite(fv)):
                    raise NotSummable("integrand unbounded at an atom")
                val += float(np.sum(self.atom_masses[keep] * fv))
        for ring in self.rings:
            if not _ring_selected(ring, include, exclude_interior):
                continue
            m, e = mean_on_circle(f, ring.center, ring.radius, tol=tol,
                                  singular_points=f_singular_points,
                                  kink_circles=f_kink_circles)
            val += ring.mass * m
            err += abs(ring.mass) * e
        for dens in self.radial:
            lo, hi = dens.support
            if include is not None:
                if abs(dens.center - include.center) > 1e-12:
                    raise EngineError("radial density off the include center")
                lo = max(lo, include.inner)
                hi = min(hi, include.outer)
            if exclude_interior is not None:
                if abs(dens.center - exclude_interior.center) > 1e-12:
                    raise EngineError("radial density off the exclusion center")
                if exclude_interior.inner > 0:
                    raise EngineError("annular exclusions are not supported")
                lo = max(lo, exclude_interior.outer)
            if hi <= lo:
                continue
            if not math.isfinite(hi):
                raise DomainError("unbounded radial integral needs a bounded region")
            approx_mass = abs(dens.mass_in(hi) - dens.mass_in(lo))
            inner_tol = tol / (4.0 * (1.0 + approx_mass))
            inner_err = [0.0]

            def fmean(svec, _d=dens):
                out = np.empty(svec.shape, dtype=float)
                for i, s in enumerate(svec):
                    m, e = mean_on_circle(f, _d.center, s, tol=inner_tol,
                                          singular_points=f_singular_points,
                                          kink_circles=f_kink_circles)
                    inner_err[0] = max(inner_err[0], e)
                    out[i] = m
                return out * svec * np.asarray(_d.profile(svec), dtype=float)

            # radii where charge circles graze a singular point or a kink
            # circle of f are breakpoints of the radial integrand
            outer_sing = []
            for p in f_singular_points:
                outer_sing.append(abs(complex(p) - dens.center))
            for c2, r2 in f_kink_circles:
                dc = abs(complex(c2) - dens.center)
                outer_sing.extend((abs(dc - float(r2)), dc + float(r2)))
            v, e = integrate(fmean, lo, hi, tol=tol,
                             singularities=[s for s in outer_sing if lo < s < hi])
            val += dens.sign * v
            err += e + inner_err[0] * approx_mass
        return val, err


def _ring_position(ring, region):
    dc = abs(ring.center - region.center)
    dmin = abs(dc - ring.radius)
    dmax = dc + ring.radius
    if dmin >= region.inner and dmax <= region.outer:
        return "inside"
    if dmax < region.inner or dmin > region.outer:
        return "outside"
    return "partial"


def _ring_selected(ring, include, exclude_interior):
    if include is not None:
        pos = _ring_position(ring, include)
        if pos == "partial":
            raise EngineError("ring crosses the region boundary")
        if pos == "outside":
            return False
    if exclude_interior is not None:
        dc = abs(ring.center - exclude_interior.center)
        dmin = abs(dc - ring.radius)
        dmax = dc + ring.radius
        if dmax < exclude_interior.outer and dmin > exclude_interior.inner:
            return False  # ring inside the excluded interior
        if dmin < exclude_interior.outer and not (
                dmin >= exclude_interior.outer or dmax <= exclude_interior.inner):
            # grazing the excluded set: inner circles of the annulus case
            if not (dmin >= exclude_interior.outer):
                raise EngineError("ring crosses the exclusion boundary")
    return True


def charge_on_region(charge, region):
    """Signed mass of the charge on a closed bounded region."""
    if not region.bounded:
        raise DomainError("charge_on_region needs a bounded region")
    return charge.total_mass_in(region)
