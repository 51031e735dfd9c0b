"""Independent validation of planned trajectories.

Trolley plans are checked by forward integration of the linearized
double-pendulum swing dynamics

    d''_T + d_h*a''_h + (m_l/m_hl)*d_l*a''_l + g*a_h = 0
    d''_T + d_h*a''_h +            d_l*a''_l + g*a_l = 0

driven by the planned trolley acceleration, using a classical fourth-order
Runge-Kutta scheme.  Slew plans have no printed swing ODE, so they are
checked geometrically: the x projection must reproduce the jib-angle
cosine, and a diagnostic y-projection residual is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crane import CraneParams, slew_states_from_flat, trolley_projection
from .trajectory import SlewFlats


@dataclass(frozen=True)
class SimTrace:
    """Simulated swing response on a uniform time grid."""

    t: np.ndarray
    alpha_h: np.ndarray
    alpha_h_vel: np.ndarray
    alpha_l: np.ndarray
    alpha_l_vel: np.ndarray
    acc_input: np.ndarray


def swing_matrix(params: CraneParams) -> np.ndarray:
    """Acceleration map M with (a''_h, a''_l) = M (a_h, a_l) at zero input."""
    a = params.g * params.m_hl / (params.m_h * params.d_l)
    return np.array([
        [-(a * params.d_l) / params.d_h, (a * params.d_l - params.g) / params.d_h],
        [a, -a],
    ])


def natural_frequencies(params: CraneParams) -> tuple[float, float]:
    """The two pendulum mode frequencies (rad/s), slow first."""
    eig = np.linalg.eigvals(swing_matrix(params))
    omegas = np.sort(np.sqrt(-eig.real))
    return float(omegas[0]), float(omegas[1])


def swing_energy(alpha_h, alpha_h_vel, alpha_l, alpha_l_vel,
                 params: CraneParams) -> np.ndarray:
    """Quadratic energy of the swing system with the trolley at rest."""
    v_h = params.d_h * np.asarray(alpha_h_vel)
    v_l = v_h + params.d_l * np.asarray(alpha_l_vel)
    kinetic = 0.5 * (params.m_h * v_h**2 + params.m_l * v_l**2)
    potential = 0.5 * params.g * (params.m_hl * params.d_h * np.asarray(alpha_h)**2
                                  + params.m_l * params.d_l * np.asarray(alpha_l)**2)
    return kinetic + potential


def integrate_trolley_swings(acc_input: np.ndarray, params: CraneParams, dt: float,
                             initial_state: np.ndarray | None = None) -> SimTrace:
    """Integrate the swing dynamics under a sampled trolley acceleration.

    ``acc_input`` holds the acceleration at times 0, dt, 2*dt, ...; values
    between samples are interpolated linearly.  The step must resolve the
    fast pendulum mode (at most one twentieth of its period).
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    acc = np.asarray(acc_input, dtype=float)
    if acc.ndim != 1 or acc.size < 2:
        raise ValueError("need at least two acceleration samples")
    _, omega_fast = natural_frequencies(params)
    if dt > (2.0 * math.pi / omega_fast) / 20.0:
        raise ValueError(f"dt {dt} too coarse for the fast pendulum period "
                         f"{2.0 * math.pi / omega_fast:.3f} s")

    a_gain = params.g * params.m_hl / (params.m_h * params.d_l)
    d_h, d_l, g = params.d_h, params.d_l, params.g

    def deriv(y: np.ndarray, u: float) -> np.ndarray:
        ah, ahd, al, ald = y
        al_acc = a_gain * (ah - al)
        ah_acc = -(u + g * al + d_l * al_acc) / d_h
        return np.array([ahd, ah_acc, ald, al_acc])

    n = acc.size - 1
    y = np.zeros(4) if initial_state is None else np.asarray(initial_state, dtype=float).copy()
    out = np.empty((n + 1, 4))
    out[0] = y
    for k in range(n):
        u0, u1 = acc[k], acc[k + 1]
        um = 0.5 * (u0 + u1)
        k1 = deriv(y, u0)
        k2 = deriv(y + 0.5 * dt * k1, um)
        k3 = deriv(y + 0.5 * dt * k2, um)
        k4 = deriv(y + dt * k3, u1)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = y
    t = np.arange(n + 1) * dt
    return SimTrace(t=t, alpha_h=out[:, 0], alpha_h_vel=out[:, 1],
                    alpha_l=out[:, 2], alpha_l_vel=out[:, 3], acc_input=acc)


@dataclass(frozen=True)
class SlewConsistency:
    """Geometric consistency summary of a planned slew move."""

    x_residual: float
    y_residual: float
    max_alpha_h: float
    max_beta_h: float
    max_alpha_l: float
    max_beta_l: float


def slew_consistency_report(flats: SlewFlats, params: CraneParams, d_t: float,
                            n_samples: int = 2001) -> SlewConsistency:
    """Projection residuals and swing maxima along a planned slew move.

    The x residual is definitional (near zero by construction).  The y
    residual applies the same trolley-projection operator to the payload y
    coordinate and compares against d_t*sin(theta_S); the identical-quintic
    parameterization of the y outputs leaves it nonzero, so it is reported
    as a diagnostic rather than enforced.
    """
    t = np.linspace(0.0, flats.x_l.t_op, n_samples)
    xl = flats.x_l.eval_derivs(t, max_order=6)
    xh = flats.x_h.eval_derivs(t, max_order=2)
    yh = flats.y_h.eval_derivs(t, max_order=2)
    yl = flats.y_l.eval_derivs(t, max_order=4)
    state = slew_states_from_flat(xh, yh, xl, yl, d_t, params)
    y_t = trolley_projection(yl, params)
    return SlewConsistency(
        x_residual=float(np.max(np.abs(state.x_t - d_t * np.cos(state.theta_s)))),
        y_residual=float(np.max(np.abs(y_t - d_t * np.sin(state.theta_s)))),
        max_alpha_h=float(np.max(np.abs(state.alpha_h))),
        max_beta_h=float(np.max(np.abs(state.beta_h))),
        max_alpha_l=float(np.max(np.abs(state.alpha_l))),
        max_beta_l=float(np.max(np.abs(state.beta_l))),
    )
