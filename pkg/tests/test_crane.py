import math

import numpy as np
import pytest

from flatcrane.crane import (
    CraneParams,
    ProjectionRangeError,
    SlewSingularityError,
    slew_states_from_flat,
    trolley_projection,
    trolley_states_from_flat,
)
from flatcrane.trajectory import build_trolley_flat


def stack_of(*orders):
    return [np.asarray(v, dtype=float) for v in orders]


def test_static_equilibrium(params):
    state = trolley_states_from_flat(stack_of(3.2, 0, 0, 0, 0, 0, 0), params)
    assert state.d_t == 3.2
    for name in ("d_t_vel", "d_t_acc", "alpha_h", "alpha_l",
                 "alpha_h_vel", "alpha_l_vel", "alpha_h_acc", "alpha_l_acc"):
        assert getattr(state, name) == 0.0


def test_pure_acceleration_swing(params):
    state = trolley_states_from_flat(stack_of(0, 0, -0.098, 0, 0, 0, 0), params)
    assert state.alpha_l == pytest.approx(0.01, abs=1e-15)
    assert state.alpha_h == pytest.approx(0.01, abs=1e-15)


def test_payload_offset_identity(params):
    rng = np.random.default_rng(11)
    for _ in range(25):
        stack = stack_of(*rng.normal(0, 1, size=7))
        s = trolley_states_from_flat(stack, params)
        d_l = s.d_t + params.d_h * s.alpha_h + params.d_l * s.alpha_l
        assert d_l == pytest.approx(float(stack[0]), rel=1e-12, abs=1e-12)


def test_swing_dynamics_residuals(params):
    """The maps null the payload equation exactly; the hook equation keeps
    the residual implied by the published closed form."""
    rng = np.random.default_rng(3)
    for _ in range(25):
        stack = stack_of(*rng.normal(0, 1, size=7))
        s = trolley_states_from_flat(stack, params)
        res_payload = (s.d_t_acc + params.d_h * s.alpha_h_acc
                       + params.d_l * s.alpha_l_acc + params.g * s.alpha_l)
        assert abs(res_payload) <= 1e-9
        res_hook = (s.d_t_acc + params.d_h * s.alpha_h_acc
                    + params.m_l / params.m_hl * params.d_l * s.alpha_l_acc
                    + params.g * s.alpha_h)
        predicted = 2.0 * params.m_h * params.d_l / (params.m_hl * params.g) * stack[4]
        assert res_hook == pytest.approx(float(predicted), rel=1e-9, abs=1e-12)


def test_planned_trajectory_states_are_bounded_and_smooth(params):
    traj = build_trolley_flat(1.0, 2.0, 7.0)
    t = np.linspace(0, 7.0, 501)
    s = trolley_states_from_flat(traj.eval_derivs(t, 6), params)
    assert np.max(np.abs(s.alpha_h)) < math.radians(2.5)
    assert np.max(np.abs(s.alpha_l)) < math.radians(2.5)
    assert abs(s.alpha_h[0]) == 0.0 and abs(s.alpha_h[-1]) == 0.0
    assert abs(s.alpha_l_vel[-1]) == 0.0


def test_short_stack_rejected(params):
    with pytest.raises(ValueError):
        trolley_states_from_flat(stack_of(1, 0, 0, 0), params)


def test_non_finite_input_rejected(params):
    with pytest.raises(ValueError):
        trolley_states_from_flat(stack_of(1, 0, np.nan, 0, 0, 0, 0), params)


def zero2():
    return stack_of(0.0, 0.0, 0.0)


def static_slew_stacks(theta, d_t):
    x = d_t * math.cos(theta)
    y = d_t * math.sin(theta)
    xh = stack_of(x, 0, 0)
    yh = stack_of(y, 0, 0)
    xl = stack_of(x, 0, 0, 0, 0, 0, 0)
    yl = stack_of(y, 0, 0)
    return xh, yh, xl, yl


def test_static_slew_pose(params):
    theta = math.radians(30)
    xh, yh, xl, yl = static_slew_stacks(theta, 1.0)
    s = slew_states_from_flat(xh, yh, xl, yl, 1.0, params)
    assert s.theta_s == pytest.approx(theta, abs=1e-12)
    for name in ("theta_s_vel", "theta_s_acc", "alpha_h", "beta_h", "alpha_l", "beta_l"):
        assert abs(getattr(s, name)) <= 1e-12


def test_payload_offset_inversion(params):
    theta = math.radians(30)
    eps = 1e-4
    xh, yh, xl, yl = static_slew_stacks(theta, 1.0)
    xl[0] = xl[0] + params.d_l * eps * math.cos(theta)
    yl[0] = yl[0] + params.d_l * eps * math.sin(theta)
    s = slew_states_from_flat(xh, yh, xl, yl, 1.0, params)
    assert s.alpha_l == pytest.approx(eps, abs=1e-7)
    assert abs(s.beta_l) <= 1e-7


def test_projection_identity(params):
    rng = np.random.default_rng(5)
    d_t = 1.0
    for _ in range(20):
        theta = rng.uniform(math.radians(10), math.radians(170))
        xh, yh, xl, yl = static_slew_stacks(theta, d_t)
        xl = [v + 1e-3 * rng.normal() for v in xl]
        try:
            s = slew_states_from_flat(xh, yh, xl, yl, d_t, params)
        except (ProjectionRangeError, SlewSingularityError):
            continue
        assert d_t * np.cos(s.theta_s) == pytest.approx(float(s.x_t), rel=1e-12, abs=1e-12)
        assert s.x_t == pytest.approx(float(trolley_projection(xl, params)), abs=0.0)


def test_projection_clamp_tolerance(params):
    xh, yh, xl, yl = static_slew_stacks(math.radians(30), 1.0)
    xl[0] = np.asarray(1.0 + 5e-10)
    with pytest.raises(SlewSingularityError):
        # clamped onto the boundary, which then trips the singularity guard
        slew_states_from_flat(xh, yh, xl, yl, 1.0, params)
    xl[0] = np.asarray(1.0 + 1e-8)
    with pytest.raises(ProjectionRangeError):
        slew_states_from_flat(xh, yh, xl, yl, 1.0, params)


def test_singularity_guard(params):
    xh, yh, xl, yl = static_slew_stacks(math.radians(0.5), 1.0)
    with pytest.raises(SlewSingularityError):
        slew_states_from_flat(xh, yh, xl, yl, 1.0, params)


def test_invalid_trolley_distance(params):
    xh, yh, xl, yl = static_slew_stacks(math.radians(30), 1.0)
    with pytest.raises(ValueError):
        slew_states_from_flat(xh, yh, xl, yl, 0.0, params)


def test_params_validation():
    with pytest.raises(ValueError):
        CraneParams(m_h=0.0, m_l=1.0, d_h=3.0, d_l=1.5, g=9.8)
    with pytest.raises(ValueError):
        CraneParams(m_h=0.5, m_l=1.0, d_h=3.0, d_l=-1.5, g=9.8)


def test_derived_params(params):
    assert params.m_hl == params.m_h + params.m_l
    assert params.d_total == params.d_h + params.d_l
