"""Crane physical parameters and differential-flatness state maps.

The trolley map converts the payload position along the jib (the flat
output) and its time derivatives into the actuated trolley state and the
radial swing angles of hook and payload.  The slew map converts the planar
hook/payload coordinates into the jib angle, its rates, and the four swing
angles.  All functions broadcast over numpy arrays, so a whole sampled
trajectory can be mapped in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Tolerance for clamping the jib-angle cosine onto [-1, 1]: round-off at the
# endpoints of a valid plan must not abort it.
PROJECTION_TOL = 1e-9

# The jib-rate expressions divide by sin(theta_S); reject operation ranges
# closer than 1 degree to the singularities at 0 and pi.
SLEW_SIN_MIN = math.sin(math.radians(1.0))


class ProjectionRangeError(ValueError):
    """Raised when the trolley-projection cosine falls outside [-1, 1]."""


class SlewSingularityError(ValueError):
    """Raised when the jib angle comes too close to 0 or pi."""


@dataclass(frozen=True)
class CraneParams:
    """Masses, cable lengths and gravity shared by all dynamics math.

    Attributes:
        m_h: hook mass (kg).
        m_l: payload mass (kg).
        d_h: hoist-cable length, trolley to hook (m).
        d_l: rig-cable length, hook to payload (m).
        g: gravitational acceleration (m/s^2).
    """

    m_h: float
    m_l: float
    d_h: float
    d_l: float
    g: float = 9.8

    def __post_init__(self):
        for name in ("m_h", "m_l", "d_h", "d_l", "g"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def m_hl(self) -> float:
        """Combined hook + payload mass (kg)."""
        return self.m_h + self.m_l

    @property
    def d_total(self) -> float:
        """Effective hoist height d_h + d_l during trolley motion (m)."""
        return self.d_h + self.d_l

    @property
    def quad_gain(self) -> float:
        """Coefficient m_h*d_l / (m_hl*g^2) on the 4th flat derivative (s^4/m)."""
        return self.m_h * self.d_l / (self.m_hl * self.g**2)

    @property
    def quad_gain_dh(self) -> float:
        """Coefficient m_h*d_h*d_l / (m_hl*g^2) on the 4th flat derivative."""
        return self.d_h * self.quad_gain


@dataclass(frozen=True)
class TrolleyState:
    """Actuated trolley state plus radial swing angles and their rates."""

    d_t: np.ndarray
    d_t_vel: np.ndarray
    d_t_acc: np.ndarray
    alpha_h: np.ndarray
    alpha_l: np.ndarray
    alpha_h_vel: np.ndarray
    alpha_l_vel: np.ndarray
    alpha_h_acc: np.ndarray
    alpha_l_acc: np.ndarray


@dataclass(frozen=True)
class SlewState:
    """Jib angle, its rates, the four swing angles, and the projected trolley x."""

    theta_s: np.ndarray
    theta_s_vel: np.ndarray
    theta_s_acc: np.ndarray
    alpha_h: np.ndarray
    beta_h: np.ndarray
    alpha_l: np.ndarray
    beta_l: np.ndarray
    x_t: np.ndarray


def _check_finite(name: str, *values) -> None:
    for v in values:
        if not np.all(np.isfinite(v)):
            raise ValueError(f"non-finite values in {name}")


def trolley_states_from_flat(dl, params: CraneParams) -> TrolleyState:
    """Map the payload-position derivative stack to the trolley state.

    ``dl`` holds the flat output and its time derivatives of orders 0..6
    (leading axis = order).  The swing angles are

        alpha_l = -dl''/g
        alpha_h = -dl''/g + m_h*d_l/(m_hl*g^2) * dl''''

    and the trolley position/velocity/acceleration follow from the payload
    offset identity d_l = d_T + d_h*alpha_h + d_l*alpha_l.  Swing rates come
    from differentiating the angle expressions, shifting orders up by one
    and two.
    """
    dl = [np.asarray(v, dtype=float) for v in dl]
    if len(dl) < 7:
        raise ValueError(f"need derivative orders 0..6, got {len(dl)} entries")
    _check_finite("flat derivative stack", *dl[:7])
    g = params.g
    kq = params.quad_gain
    kqh = params.quad_gain_dh
    ratio = params.d_total / g
    alpha_l = -dl[2] / g
    alpha_h = -dl[2] / g + kq * dl[4]
    return TrolleyState(
        d_t=dl[0] + ratio * dl[2] - kqh * dl[4],
        d_t_vel=dl[1] + ratio * dl[3] - kqh * dl[5],
        d_t_acc=dl[2] + ratio * dl[4] - kqh * dl[6],
        alpha_h=alpha_h,
        alpha_l=alpha_l,
        alpha_h_vel=-dl[3] / g + kq * dl[5],
        alpha_l_vel=-dl[3] / g,
        alpha_h_acc=-dl[4] / g + kq * dl[6],
        alpha_l_acc=-dl[4] / g,
    )


def trolley_projection(stack, params: CraneParams) -> np.ndarray:
    """Trolley position implied by a payload-coordinate stack (orders 0, 2, 4).

    This is the operator behind the slew x projection; applying it to the
    payload y coordinate gives the diagnostic y-projection residual.
    """
    return (np.asarray(stack[0], dtype=float)
            + params.d_total / params.g * np.asarray(stack[2], dtype=float)
            - params.quad_gain_dh * np.asarray(stack[4], dtype=float))


def clamp_cosine(u: np.ndarray, tol: float = PROJECTION_TOL) -> np.ndarray:
    """Clamp a cosine onto [-1, 1], rejecting values beyond the tolerance."""
    u = np.asarray(u, dtype=float)
    if np.any(np.abs(u) > 1.0 + tol):
        worst = float(np.max(np.abs(u)))
        raise ProjectionRangeError(f"projection cosine magnitude {worst} exceeds 1")
    return np.clip(u, -1.0, 1.0)


def slew_states_from_flat(xh, yh, xl, yl, d_t: float, params: CraneParams) -> SlewState:
    """Map the planar flat-output stacks to the slew state.

    ``xl`` must carry derivative orders 0..6; ``xh``, ``yh`` and ``yl`` need
    orders 0..2.  The jib angle is arccos(x_T / D_T) with x_T the trolley
    projection of the payload x coordinate; its rates divide by sin(theta_S),
    so configurations near 0 or pi are rejected.
    """
    if d_t <= 0:
        raise ValueError("trolley distance d_t must be positive")
    xl = [np.asarray(v, dtype=float) for v in xl]
    if len(xl) < 7:
        raise ValueError(f"x_l stack needs orders 0..6, got {len(xl)} entries")
    xh0 = np.asarray(xh[0], dtype=float)
    yh0 = np.asarray(yh[0], dtype=float)
    yl0 = np.asarray(yl[0], dtype=float)
    _check_finite("slew flat stacks", xh0, yh0, yl0, *xl[:7])

    x_t = trolley_projection(xl, params)
    u = clamp_cosine(x_t / d_t)
    theta = np.arccos(u)
    sin_t = np.sin(theta)
    if np.any(np.abs(sin_t) < SLEW_SIN_MIN):
        raise SlewSingularityError("jib angle within 1 degree of the 0/pi singularity")

    ratio = params.d_total / params.g
    kqh = params.quad_gain_dh
    u_vel = (xl[1] + ratio * xl[3] - kqh * xl[5]) / d_t
    u_acc = (xl[2] + ratio * xl[4] - kqh * xl[6]) / d_t
    theta_vel = -u_vel / sin_t
    theta_acc = -(u / sin_t**3) * u_vel**2 - u_acc / sin_t

    return SlewState(
        theta_s=theta,
        theta_s_vel=theta_vel,
        theta_s_acc=theta_acc,
        alpha_h=(xh0 * u + yh0 * sin_t - d_t) / params.d_h,
        beta_h=(yh0 * u - xh0 * sin_t) / params.d_h,
        alpha_l=((xl[0] - xh0) * u + (yl0 - yh0) * sin_t) / params.d_l,
        beta_l=((yl0 - yh0) * u - (xl[0] - xh0) * sin_t) / params.d_l,
        x_t=x_t,
    )
