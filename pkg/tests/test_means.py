"""Circle, disk, and mollified means; radius profiles and their enlargement."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zerocert import (
    SQRT_E,
    DiskFractionProfile,
    InvalidKernel,
    PlanePowerProfile,
    PreconditionViolation,
    check_mean_chain,
    circle_mean,
    default_kernel,
    disk_mean,
    hat_radius,
    make_harmonic,
    make_log_abs_poly,
    make_radial_power,
    model_sum,
    mollified_mean,
)

import oracles


def _usq(z):
    return np.abs(np.asarray(z, dtype=complex)) ** 2


def _ulog(z):
    return np.log(np.abs(np.asarray(z, dtype=complex)))


# ---------------------------------------------------------------------------
# means


def test_circle_mean_log_kernel():
    # enclosed pole: mean of ln|w - 1| over |w| = 2 is ln 2
    val, err = circle_mean(lambda z: np.log(np.abs(z - 1.0)), 0j, 2.0)
    assert abs(val - np.log(2.0)) <= 1e-8
    # pole outside: mean is ln of the center distance
    val, err = circle_mean(lambda z: np.log(np.abs(z - 5.0)), 0j, 2.0)
    assert abs(val - np.log(5.0)) <= 1e-8


def test_circle_mean_square():
    val, err = circle_mean(_usq, 1.0 + 0j, 1.0)
    assert abs(val - 2.0) <= 1e-9


def test_disk_mean_square():
    val, err = disk_mean(_usq, 0j, 1.0)
    assert abs(val - 0.5) <= 1e-9
    ref = oracles.disk_mean_grid(_usq, 0j, 1.0)
    assert abs(val - ref) <= 1e-5


def test_disk_mean_log():
    # 2 int_0^1 s ln s ds = -1/2
    val, err = disk_mean(_ulog, 0j, 1.0)
    assert abs(val + 0.5) <= 1e-7


def test_disk_mean_offcenter_matches_grid():
    val, err = disk_mean(_usq, 1.0 + 1j, 0.7)
    ref = oracles.disk_mean_grid(_usq, 1.0 + 1j, 0.7)
    assert abs(val - ref) <= 1e-5


def test_mollified_mean_square():
    # 8 int_0^1 s^3 (1 - s^2)^3 ds = 1/5
    val, err = mollified_mean(_usq, 0j, 1.0)
    assert abs(val - 0.2) <= 1e-9
    ref = oracles.mollified_mean_grid(_usq, 0j, 1.0)
    assert abs(val - ref) <= 1e-5


def test_mollified_mean_constant_is_unit_mass():
    val, err = mollified_mean(lambda z: np.ones_like(np.real(z)), 0.5j, 2.0)
    assert abs(val - 1.0) <= 1e-10


def test_kernel_validation():
    with pytest.raises(InvalidKernel):
        mollified_mean(_usq, 0j, 1.0, kernel=lambda s: -default_kernel(s))
    with pytest.raises(InvalidKernel):
        mollified_mean(_usq, 0j, 1.0, kernel=lambda s: 2.0 * default_kernel(s))


@settings(max_examples=20, deadline=None)
@given(t=st.floats(0.05, 3.0))
def test_sqrt_e_bridge_for_log_kernel(t):
    # disk mean at sqrt(e) t equals circle mean at t for ln|w| about 0
    dm, de = disk_mean(_ulog, 0j, SQRT_E * t)
    cm, ce = circle_mean(_ulog, 0j, t)
    assert abs(dm - cm) <= 1e-7


# ---------------------------------------------------------------------------
# radius profiles


def test_plane_profile_hat_origin():
    hat = hat_radius(PlanePowerProfile(1.0), 0j)
    # r(0) = 1 and the largest r on |w| = 1 is 1/2
    assert abs(hat.value - 1.5) <= 1e-9
    assert hat.certified_upper >= hat.value
    assert hat.certified_upper - hat.value <= 1e-3


def test_plane_profile_hat_offcenter():
    hat = hat_radius(PlanePowerProfile(1.0), 3.0 + 0j)
    # r(3) = 1/4; max over the circle sits at the inward point: 1/(1 + 2.75)
    want = 0.25 + 1.0 / 3.75
    assert abs(hat.value - want) <= 1e-9
    assert hat.certified_upper - hat.value <= 1e-6


def test_constant_profile_hat_exact():
    hat = hat_radius(PlanePowerProfile(0.0), 2.0 + 1j)
    assert hat.value == 2.0
    assert hat.certified_upper >= 2.0


@settings(max_examples=30, deadline=None)
@given(
    power=st.floats(0.0, 3.0),
    x=st.floats(-5, 5),
    y=st.floats(-5, 5),
)
def test_hat_dominates_pointwise_samples(power, x, y):
    prof = PlanePowerProfile(power)
    z = complex(x, y)
    hat = hat_radius(prof, z)
    r0 = prof.radius(z)
    th = np.linspace(0.0, 2 * np.pi, 64)
    probe = r0 + np.max(prof.radius(z + r0 * np.exp(1j * th)))
    assert hat.certified_upper >= probe - 1e-12
    assert hat.certified_upper >= hat.value


def test_disk_profile_hat_small_fraction():
    prof = DiskFractionProfile(0.3, 0j, 4.0)
    hat = hat_radius(prof, 1.0 + 0j)
    # alpha (2 + alpha) d with d = 3: closed form for points away from the center
    assert abs(hat.value - 0.3 * 2.3 * 3.0) <= 1e-9
    assert hat.certified_upper < 3.0


def test_disk_profile_enlargement_reaches_boundary():
    prof = DiskFractionProfile(0.5, 0j, 1.0)
    # alpha (2 + alpha) = 1.25 >= 1: the enlarged disk escapes
    with pytest.raises(PreconditionViolation):
        hat_radius(prof, 0.5 + 0j)


def test_profile_radius_values():
    assert PlanePowerProfile(1.0).radius(3.0 + 0j) == 0.25
    prof = DiskFractionProfile(0.5, 1.0 + 0j, 2.0)
    assert abs(prof.radius(1.0 + 0j) - 1.0) <= 1e-12
    assert abs(prof.radius(2.0 + 0j) - 0.5) <= 1e-12


# ---------------------------------------------------------------------------
# the chain


def test_mean_chain_log_abs_poly():
    m = make_log_abs_poly(roots=[1.0 + 0j, -0.3j], mults=[2, 1])
    pts = np.array([0j, 0.5 + 0.5j, 2.0 - 1j, -3.0 + 0.2j])
    rep = check_mean_chain(m, PlanePowerProfile(1.0), pts)
    assert rep.ok
    assert rep.max_violation <= rep.slack
    assert len(rep.rows) == pts.size


def test_mean_chain_mixed_model_disk_profile():
    m = model_sum(
        make_harmonic(lambda z: np.real(np.asarray(z, dtype=complex)), kind="re-z"),
        make_radial_power(0.5, 2.0),
    )
    pts = np.array([0j, 0.5 + 0.5j, -1.0 + 0.3j])
    rep = check_mean_chain(m, DiskFractionProfile(0.2, 0j, 4.0), pts)
    assert rep.ok


def test_mean_chain_rows_are_ordered():
    m = make_radial_power(1.0, 2.0)
    pts = np.array([1.0 + 0j])
    rep = check_mean_chain(m, PlanePowerProfile(1.0), pts)
    row = rep.rows[0]
    # u <= disk(r) <= circle(r) <= disk(sqrt e r), composite below circle at hat
    assert row["u"] <= row["disk_r"] + rep.slack
    assert row["disk_r"] <= row["circle_r"] + rep.slack
    assert row["circle_r"] <= row["disk_sqrt_e_r"] + rep.slack
    assert row["composite"] <= row["circle_hat"] + rep.slack
