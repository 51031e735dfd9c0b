import math

import numpy as np
import pytest

from flatcrane.trajectory import (
    SMOOTHSTEP2,
    SMOOTHSTEP7,
    FlatTrajectory,
    build_slew_flats,
    build_trolley_flat,
    eval_derivs,
)

DEG15_TAIL = (6435, -40040, 108108, -163800, 150150, -83160, 25740, -3432)


def test_trolley_coefficients_match_published_pattern():
    traj = build_trolley_flat(1.0, 2.0, 7.0)
    c = traj.coeffs
    assert c[0] == 1.0
    assert np.all(c[1:8] == 0.0)
    assert tuple(c[8:]) == pytest.approx(DEG15_TAIL)
    assert traj.degree == 15


def test_coefficient_patterns_sum_to_one():
    assert sum(SMOOTHSTEP7) == 1
    assert sum(SMOOTHSTEP2) == 1


def test_zero_delta_is_constant():
    traj = build_trolley_flat(1.0, 1.0, 5.0)
    t = np.linspace(0, 5.0, 57)
    stack = traj.eval_derivs(t, max_order=7)
    assert np.all(stack[0] == 1.0)
    assert np.all(stack[1:] == 0.0)


def test_midpoint_symmetry():
    traj = build_trolley_flat(1.0, 2.0, 7.0)
    assert traj.eval_derivs(3.5, 0)[0] == pytest.approx(1.5, abs=1e-12)


def test_quintic_midpoint():
    flats = build_slew_flats(math.radians(30), math.radians(60), 1.0, 6.51)
    ci, cf = math.cos(math.radians(30)), math.cos(math.radians(60))
    mid = flats.x_h.eval_derivs(6.51 / 2, 0)[0]
    assert mid == pytest.approx(ci + 0.5 * (cf - ci), abs=1e-12)


def test_slew_boundary_positions():
    flats = build_slew_flats(math.radians(30), math.radians(60), 1.0, 6.51)
    assert flats.x_l.eval_derivs(0.0, 0)[0] == pytest.approx(math.cos(math.radians(30)), abs=1e-12)
    assert flats.x_l.eval_derivs(6.51, 0)[0] == pytest.approx(0.5, abs=1e-12)
    assert flats.y_h.coeffs == pytest.approx(flats.y_l.coeffs)


def boundary_residuals(traj, orders):
    """Endpoint values of the given derivative orders."""
    lo = traj.eval_derivs(0.0, max_order=max(orders))
    hi = traj.eval_derivs(traj.t_op, max_order=max(orders))
    return [lo[n] for n in orders], [hi[n] for n in orders]


@pytest.mark.parametrize("seed", range(12))
def test_boundary_conditions_randomized(seed):
    rng = np.random.default_rng(seed)
    d_ti, d_tf = rng.uniform(0.2, 50.0, size=2)
    t_op = rng.uniform(0.5, 30.0)
    traj = build_trolley_flat(d_ti, d_tf, t_op)
    lo, hi = boundary_residuals(traj, range(1, 8))
    assert np.max(np.abs(lo)) <= 1e-10
    assert np.max(np.abs(hi)) <= 1e-10
    assert traj.eval_derivs(0.0, 0)[0] == pytest.approx(d_ti, abs=1e-10)
    assert traj.eval_derivs(t_op, 0)[0] == pytest.approx(d_tf, abs=1e-10)

    th = sorted(rng.uniform(math.radians(2), math.radians(178), size=2))
    flats = build_slew_flats(th[0], th[1], rng.uniform(0.5, 50.0), t_op)
    lo, hi = boundary_residuals(flats.x_l, range(1, 8))
    assert max(np.max(np.abs(lo)), np.max(np.abs(hi))) <= 1e-10
    for quintic in (flats.x_h, flats.y_h, flats.y_l):
        lo, hi = boundary_residuals(quintic, range(1, 3))
        assert max(np.max(np.abs(lo)), np.max(np.abs(hi))) <= 1e-10


def test_deg15_boundary_derivatives_exactly_zero():
    traj = build_trolley_flat(1.0, 2.0, 7.0)
    assert np.all(traj.eval_derivs(0.0, 7)[1:] == 0.0)
    assert np.all(traj.eval_derivs(7.0, 7)[1:] == 0.0)


def test_quintic_boundary_derivatives_exactly_zero():
    flats = build_slew_flats(math.radians(30), math.radians(60), 1.0, 6.51)
    assert np.all(flats.x_h.eval_derivs(6.51, 2)[1:] == 0.0)


def test_derivatives_match_finite_differences():
    traj = build_trolley_flat(1.0, 2.0, 7.0)
    rng = np.random.default_rng(7)
    h = 1e-5 * traj.t_op
    grid = traj.eval_derivs(np.linspace(0, 7.0, 400), max_order=4)
    scale = np.max(np.abs(grid), axis=1)
    for t in rng.uniform(0.2, 6.8, size=8):
        stack = traj.eval_derivs(t, max_order=4)
        for n in range(1, 5):
            below = traj.eval_derivs(t - h, n - 1)[n - 1]
            above = traj.eval_derivs(t + h, n - 1)[n - 1]
            fd = (above - below) / (2 * h)
            assert stack[n] == pytest.approx(fd, rel=1e-6, abs=1e-6 * scale[n])


def test_linearity_in_delta():
    base = build_trolley_flat(1.0, 2.0, 7.0)
    doubled = build_trolley_flat(1.0, 3.0, 7.0)
    t = np.linspace(0, 7.0, 23)
    assert doubled.eval_derivs(t, 0)[0] - 1.0 == pytest.approx(
        2.0 * (base.eval_derivs(t, 0)[0] - 1.0), abs=1e-12)


def test_time_reversal_symmetry():
    traj = build_trolley_flat(1.0, 2.0, 7.0)
    t = np.linspace(0, 7.0, 101)
    forward = traj.eval_derivs(t, 0)[0]
    backward = traj.eval_derivs(7.0 - t, 0)[0]
    assert np.max(np.abs(forward + backward - (2 * 1.0 + 1.0))) <= 1e-10


def test_derivative_scaling_with_operating_time():
    fast = build_trolley_flat(1.0, 2.0, 1.5)
    slow = build_trolley_flat(1.0, 2.0, 3.0)
    for tau in (0.25, 0.5, 0.8):
        sf = fast.eval_derivs(tau * 1.5, 7)
        ss = slow.eval_derivs(tau * 3.0, 7)
        for n in range(1, 8):
            if sf[n] != 0.0:
                assert ss[n] * 2.0**n == pytest.approx(sf[n], rel=1e-12)


def test_invalid_time_rejected():
    with pytest.raises(ValueError):
        build_trolley_flat(1.0, 2.0, 0.0)
    with pytest.raises(ValueError):
        build_trolley_flat(1.0, 2.0, -2.0)


def test_out_of_range_evaluation_rejected():
    traj = build_trolley_flat(1.0, 2.0, 7.0)
    with pytest.raises(ValueError):
        traj.eval_derivs(-0.01, 2)
    with pytest.raises(ValueError):
        traj.eval_derivs(7.01, 2)
    with pytest.raises(ValueError):
        traj.eval_derivs(1.0, 8)


def test_singular_slew_range_rejected():
    with pytest.raises(ValueError):
        build_slew_flats(math.radians(0.5), math.radians(60), 1.0, 6.0)
    with pytest.raises(ValueError):
        build_slew_flats(math.radians(30), math.radians(179.6), 1.0, 6.0)


def test_functional_alias():
    traj = build_trolley_flat(1.0, 2.0, 7.0)
    assert np.array_equal(eval_derivs(traj, 3.0, 4), traj.eval_derivs(3.0, 4))


def test_direct_construction_validates_pattern():
    with pytest.raises(ValueError):
        FlatTrajectory(start=0.0, delta=1.0, t_op=1.0, pattern=(1, 2, 3))
