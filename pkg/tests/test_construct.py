"""Canonical products, genus selection, and the sufficiency verifier."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zerocert import (
    DSubharmonicMajorant,
    GenusOverflow,
    NotSummable,
    PlanePowerProfile,
    TruncatedLogFamily,
    ZeroDistribution,
    build_product,
    genus,
    make_radial_power,
    remainder_R,
    verify_sufficiency,
    weierstrass_log_abs,
    winding_number,
)
from zerocert.construct import _log_E_complex

import oracles


# ---------------------------------------------------------------------------
# genus


def test_genus_catalogue():
    assert genus(ZeroDistribution.real_multiples(step=np.pi)) == 1
    assert genus(ZeroDistribution.gaussian_integers()) == 2
    assert genus(ZeroDistribution.from_points([1.0, 2.0, 3.0], [1, 1, 1])) == 0


def test_genus_overflow():
    with pytest.raises(GenusOverflow):
        genus(ZeroDistribution.real_multiples(step=np.pi), max_genus=0)


# ---------------------------------------------------------------------------
# primary factors


@settings(max_examples=60, deadline=None)
@given(
    re=st.floats(-0.5, 0.5),
    im=st.floats(-0.5, 0.5),
    p=st.integers(0, 4),
)
def test_log_E_tail_bound(re, im, p):
    u = complex(re, im)
    if abs(u) > 0.5:
        return
    v = complex(_log_E_complex(np.array([u]), p)[0])
    assert abs(v) <= 2.0 * abs(u) ** (p + 1) / (p + 1) + 1e-15


def test_log_E_matches_series_across_bins():
    # the evaluator switches series length at |u| = 0.1 and 0.5
    for p in (1, 2):
        for mag in (0.099, 0.101, 0.499, 0.501, 0.9):
            for ang in (0.3, 2.0, 4.0):
                u = mag * np.exp(1j * ang)
                got = complex(_log_E_complex(np.array([u]), p)[0])
                want = oracles.log_E_series(u, p, terms=3000)
                assert abs(got - want) <= 1e-13 * (1.0 + abs(want))


def test_log_E_direct_branch_identity():
    # for |u| > 1/2 the evaluator goes through ln(1 - u) directly
    u = 0.8 + 0.3j
    got = complex(_log_E_complex(np.array([u]), 1)[0])
    want = np.log(1.0 - u) + u
    assert abs(got - want) <= 1e-14


# ---------------------------------------------------------------------------
# products


def test_product_matches_sine_oracle():
    Z = ZeroDistribution.real_multiples(step=np.pi)
    prod = build_product(Z, 1, K=2000)
    zs = np.array([0.5 + 0.5j, 2.0 - 1j, 1.0j, 4.4 + 0.1j])
    got = np.asarray(prod.log_abs(zs), dtype=float)
    want = oracles.log_abs_sinc(zs)
    budget = np.asarray(prod.tail_budget(zs), dtype=float)
    assert np.all(np.isfinite(budget))
    assert np.max(np.abs(got - want) - budget) <= 1e-12


def test_weierstrass_log_abs_wrapper():
    Z = ZeroDistribution.real_multiples(step=np.pi)
    z = np.array([1.0 + 1j])
    vals, budgets = weierstrass_log_abs(Z, 1, z, K=2000)
    want = float(oracles.log_abs_sinc(z)[0])
    assert abs(float(vals[0]) - want) <= float(budgets[0])
    assert float(budgets[0]) <= 5e-4


def test_product_guard_blanks_lattice_points():
    Z = ZeroDistribution.real_multiples(step=np.pi)
    prod = build_product(Z, 1, K=100)
    vals = np.asarray(prod.log_abs(np.array([np.pi + 0j, np.pi + 1e-14j])), dtype=float)
    assert np.all(np.isneginf(vals))


def test_tail_budget_requires_cutoff_margin():
    Z = ZeroDistribution.real_multiples(step=np.pi)
    prod = build_product(Z, 1, K=100)
    # cutoff is 100 pi; points beyond half the cutoff get an infinite budget
    inside = float(prod.tail_budget(np.array([10.0 + 0j]))[0])
    outside = float(prod.tail_budget(np.array([200.0 + 0j]))[0])
    assert np.isfinite(inside)
    assert np.isposinf(outside)


def test_product_finite_zero_set_is_polynomial():
    Z = ZeroDistribution.from_points([1.0 + 0j, -2.0 + 0j], [2, 1])
    prod = build_product(Z, 0, K=10)
    z = np.array([0.5 + 0.5j])
    got = float(prod.log_abs(z)[0])
    # genus-0 factors are (1 - z/a); compare against the direct product
    want = float(
        np.log(np.abs((1 - z / 1.0) ** 2 * (1 + z / 2.0)))[0]
    )
    assert abs(got - want) <= 1e-12
    assert float(prod.tail_budget(z)[0]) == 0.0


def test_winding_numbers():
    Z = ZeroDistribution.from_points([1.0 + 0j, 2.0 + 0j], [1, 2])
    prod = build_product(Z, 0, K=10)
    assert winding_number(prod, 1.0 + 0j, 0.3) == 1
    assert winding_number(prod, 2.0 + 0j, 0.3) == 2
    assert winding_number(prod, -1.0 + 0j, 0.5) == 0
    assert winding_number(prod, 1.5 + 0j, 1.2) == 3


def test_not_summable_for_undersized_genus():
    Z = ZeroDistribution.gaussian_integers()
    with pytest.raises(NotSummable):
        build_product(Z, 0, K=100)


# ---------------------------------------------------------------------------
# remainder and sufficiency


def test_remainder_values():
    prof = PlanePowerProfile(1.0)
    assert remainder_R(prof, 1.0 + 1j) == 0.0
    from zerocert import DiskFractionProfile

    dprof = DiskFractionProfile(0.2, 0j, 2.0)
    z = 1.0 + 0j
    # simply connected: -ln r(z)
    got = remainder_R(dprof, z, domain_kind="simply-connected")
    assert abs(got + np.log(0.2 * 1.0)) <= 1e-12
    got = remainder_R(dprof, z, domain_kind="general", a=0.5)
    want = -np.log(0.2) + 1.5 * np.log(2.0)
    assert abs(got - want) <= 1e-12


def test_sufficiency_certifies_sine_zeros():
    Z = ZeroDistribution.real_multiples(step=np.pi)
    M = DSubharmonicMajorant(up=make_radial_power(1.0, 1.0))
    rng = np.random.default_rng(5)
    pts = rng.uniform(-4, 4, 30) + 1j * rng.uniform(-4, 4, 30)
    fam = TruncatedLogFamily(t_min=1.0, t_max=50.0, ratio=2.0**0.5)
    rep = verify_sufficiency(Z, M, PlanePowerProfile(1.0), pts, K=2000, family=fam)
    assert rep.certified
    assert rep.reason == "ok"
    assert rep.genus == 1
    assert rep.violations == 0
    assert rep.margin_verdict == "consistent"


def test_sufficiency_refuses_on_violated_margin():
    Z = ZeroDistribution.gaussian_integers(max_radius=120.0)
    M = DSubharmonicMajorant(up=make_radial_power(1.0, 1.0))
    pts = np.array([0.5 + 0.5j])
    fam = TruncatedLogFamily(t_min=1.0, t_max=40.0, ratio=2.0**0.5)
    rep = verify_sufficiency(Z, M, PlanePowerProfile(1.0), pts, K=500, family=fam)
    assert not rep.certified
    assert rep.reason == "margin-violated"
    assert rep.margin_verdict == "violated"


def test_sufficiency_fails_for_undersized_majorant():
    # half of |z| cannot dominate the sine-type product
    Z = ZeroDistribution.real_multiples(step=np.pi)
    M = DSubharmonicMajorant(up=make_radial_power(0.25, 1.0))
    rng = np.random.default_rng(11)
    pts = rng.uniform(-6, 6, 40) + 1j * rng.uniform(-6, 6, 40)
    rep = verify_sufficiency(
        Z, M, PlanePowerProfile(1.0), pts, K=2000, balance=False
    )
    assert not rep.certified
    assert rep.violations > 0
