"""Polynomial flat-output trajectories with analytic derivatives.

Motion profiles are stored as fixed integer coefficient patterns in the
normalized time ``tau = t / t_op``, scaled by the move delta.  Two patterns
are used: a degree-15 polynomial whose first seven derivatives vanish at
both endpoints, and the classic quintic whose first two derivatives vanish
at both endpoints.  Keeping the integer pattern separate from the delta
lets boundary derivatives evaluate to exactly zero in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .crane import SLEW_SIN_MIN

# Degree-15 profile: value rises 0 -> 1 with derivative orders 1..7 zero at
# both ends.  Coefficients of tau^0 .. tau^15.
SMOOTHSTEP7 = (0, 0, 0, 0, 0, 0, 0, 0,
               6435, -40040, 108108, -163800, 150150, -83160, 25740, -3432)

# Quintic profile: derivative orders 1..2 zero at both ends.
SMOOTHSTEP2 = (0, 0, 0, 10, -15, 6)

MAX_DERIV_ORDER = 7


def _derivative_patterns(pattern: tuple[int, ...]) -> tuple[np.ndarray, ...]:
    """Exact monomial coefficient arrays for derivative orders 0..7.

    All entries stay integers well below 2**53, so evaluation at tau = 0
    and tau = 1 incurs no rounding at all.
    """
    out = []
    coeffs = np.array(pattern, dtype=float)
    for _ in range(MAX_DERIV_ORDER + 1):
        out.append(coeffs)
        coeffs = coeffs[1:] * np.arange(1, len(coeffs))
    return tuple(out)


_PATTERN_DERIVS = {
    SMOOTHSTEP7: _derivative_patterns(SMOOTHSTEP7),
    SMOOTHSTEP2: _derivative_patterns(SMOOTHSTEP2),
}


@dataclass(frozen=True)
class FlatTrajectory:
    """A flat-output profile ``p(t) = start + delta * S(t / t_op)``.

    ``S`` is one of the fixed unit patterns above, so ``p(0) = start`` and
    ``p(t_op) = start + delta`` with every profiled derivative zero at the
    boundaries.
    """

    start: float
    delta: float
    t_op: float
    pattern: tuple[int, ...] = SMOOTHSTEP7
    _derivs: tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.t_op > 0:
            raise ValueError(f"operating time must be positive, got {self.t_op}")
        if self.pattern not in _PATTERN_DERIVS:
            raise ValueError("unsupported coefficient pattern")
        object.__setattr__(self, "_derivs", _PATTERN_DERIVS[self.pattern])

    @property
    def degree(self) -> int:
        return len(self.pattern) - 1

    @property
    def coeffs(self) -> np.ndarray:
        """Monomial coefficients c_0..c_k in tau, c_0 holding the start value."""
        c = self.delta * np.array(self.pattern, dtype=float)
        c[0] += self.start
        return c

    def eval_derivs(self, t, max_order: int = MAX_DERIV_ORDER) -> np.ndarray:
        """Evaluate the profile and its time derivatives of orders 0..max_order.

        Returns a stack whose leading axis indexes the derivative order; the
        order-n entry carries units of the base quantity per second^n.  ``t``
        may be a scalar or an array but must lie within [0, t_op].
        """
        if not 0 <= max_order <= MAX_DERIV_ORDER:
            raise ValueError(f"max_order must be in 0..{MAX_DERIV_ORDER}")
        t = np.asarray(t, dtype=float)
        if np.any(t < 0.0) or np.any(t > self.t_op):
            raise ValueError(f"time outside [0, {self.t_op}]")
        tau = t / self.t_op
        rows = []
        scale = self.delta
        for n in range(max_order + 1):
            value = np.polynomial.polynomial.polyval(tau, self._derivs[n])
            rows.append(scale * value)
            scale /= self.t_op
        rows[0] = rows[0] + self.start
        return np.stack(rows)


def build_trolley_flat(d_ti: float, d_tf: float, t_t: float) -> FlatTrajectory:
    """Degree-15 payload-position profile for a trolley move.

    Boundary conditions: value equals the start/end trolley positions, and
    derivative orders 1..7 vanish at both ends, which zeroes the boundary
    velocities, accelerations, jerks and swing states.
    """
    return FlatTrajectory(start=d_ti, delta=d_tf - d_ti, t_op=t_t, pattern=SMOOTHSTEP7)


@dataclass(frozen=True)
class SlewFlats:
    """The four planar flat outputs of a slew move."""

    x_l: FlatTrajectory
    x_h: FlatTrajectory
    y_h: FlatTrajectory
    y_l: FlatTrajectory


def build_slew_flats(theta_si: float, theta_sf: float, d_t: float, t_s: float) -> SlewFlats:
    """Flat-output profiles for a slew move between two jib angles.

    The payload x coordinate follows the degree-15 pattern (seven vanishing
    boundary derivatives); the hook x and the shared hook/payload y
    coordinates follow quintics.  Angles must keep the whole move clear of
    the slew singularities at 0 and pi.
    """
    for theta in (theta_si, theta_sf):
        if not 0.0 < theta < math.pi:
            raise ValueError(f"slew angle {theta} outside (0, pi)")
        if min(math.sin(theta_si), math.sin(theta_sf)) < SLEW_SIN_MIN:
            raise ValueError("slew range too close to the 0/pi singularity")
    c_i, c_f = math.cos(theta_si), math.cos(theta_sf)
    s_i, s_f = math.sin(theta_si), math.sin(theta_sf)
    return SlewFlats(
        x_l=FlatTrajectory(d_t * c_i, d_t * (c_f - c_i), t_s, SMOOTHSTEP7),
        x_h=FlatTrajectory(d_t * c_i, d_t * (c_f - c_i), t_s, SMOOTHSTEP2),
        y_h=FlatTrajectory(d_t * s_i, d_t * (s_f - s_i), t_s, SMOOTHSTEP2),
        y_l=FlatTrajectory(d_t * s_i, d_t * (s_f - s_i), t_s, SMOOTHSTEP2),
    )


def eval_derivs(traj: FlatTrajectory, t, max_order: int = MAX_DERIV_ORDER) -> np.ndarray:
    """Functional alias for :meth:`FlatTrajectory.eval_derivs`."""
    return traj.eval_derivs(t, max_order)
