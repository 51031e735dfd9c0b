"""Time-vs-effort trajectory optimization problems over the operating time.

Each problem has a single decision variable, the operating time t_op.  The
first objective is t_op itself; the second is the time integral of the
squared actuator acceleration normalized by its limit.  Inequality limits
on velocities, accelerations and swing angles are aggregated into a scalar
violation, zero for feasible times.

Because the flat-output profiles are fixed shapes in tau = t / t_op, the
order-n derivative at a sample is the unit-time shape value divided by
t_op**n.  The problems precompute the shape arrays once on a uniform tau
grid and evaluate whole batches of candidate times with outer products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crane import (
    SLEW_SIN_MIN,
    CraneParams,
    trolley_states_from_flat,
    slew_states_from_flat,
)
from .metrics import ParetoFront, nondominated
from .trajectory import build_slew_flats, build_trolley_flat

# Lower bound of the decision interval; derivative magnitudes blow up as
# t_op -> 0, so the search never goes below this.
T_FLOOR = 0.1

DEFAULT_SAMPLES = 2001


class InfeasibleProblemError(RuntimeError):
    """No operating time within the bound satisfies all constraints."""


@dataclass(frozen=True)
class OperationSpec:
    """Boundary values, fixed geometry and time bound of one crane move.

    ``start``/``goal`` are trolley positions in metres for kind "trolley"
    and jib angles in radians for kind "slew".
    """

    kind: str
    start: float
    goal: float
    d_h: float
    t_max: float
    d_t: float | None = None

    def __post_init__(self):
        if self.kind not in ("trolley", "slew"):
            raise ValueError(f"unknown operation kind {self.kind!r}")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if not self.d_h > 0:
            raise ValueError("hoist-cable length must be positive")
        if self.kind == "slew":
            if self.d_t is None or self.d_t <= 0:
                raise ValueError("slew operations need a positive trolley distance d_t")
            for theta in (self.start, self.goal):
                if not 0.0 < theta < math.pi:
                    raise ValueError("slew angles must lie in (0, pi)")
                if math.sin(theta) < SLEW_SIN_MIN:
                    raise ValueError("slew range within 1 degree of the 0/pi singularity")


def trolley_operation(d_ti: float, d_tf: float, d_h: float, t_max: float) -> OperationSpec:
    return OperationSpec(kind="trolley", start=d_ti, goal=d_tf, d_h=d_h, t_max=t_max)


def slew_operation(theta_si: float, theta_sf: float, d_h: float, d_t: float,
                   t_max: float) -> OperationSpec:
    return OperationSpec(kind="slew", start=theta_si, goal=theta_sf, d_h=d_h,
                         t_max=t_max, d_t=d_t)


@dataclass(frozen=True)
class StateLimits:
    """Maximum allowed state magnitudes (SI, angles in radians)."""

    trolley_vel: float
    trolley_acc: float
    slew_vel: float
    slew_acc: float
    alpha_h: float
    beta_h: float
    alpha_l: float
    beta_l: float

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            if not getattr(self, name) > 0:
                raise ValueError(f"limit {name} must be strictly positive")
        cap = math.radians(5.0)
        for name in ("alpha_h", "beta_h", "alpha_l", "beta_l"):
            if getattr(self, name) >= cap:
                raise ValueError("swing limits must stay below 5 degrees "
                                 "(small-angle model)")


@dataclass(frozen=True)
class Objectives:
    """Objective pair plus aggregated constraint violation for one time."""

    f1: float
    f2: float
    violation: float


@dataclass(frozen=True)
class SamplingConfig:
    """Sample counts for objective integration and trajectory output."""

    n_samples: int = DEFAULT_SAMPLES
    dt: float = 1e-3

    def __post_init__(self):
        if self.n_samples < 3 or self.n_samples % 2 == 0:
            raise ValueError("n_samples must be an odd integer >= 3 (Simpson rule)")
        if not self.dt > 0:
            raise ValueError("dt must be positive")


def _simpson_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-2:2] = 2.0
    return w / 3.0


class TrolleyMotop:
    """Bi-objective trolley problem over the operating time."""

    decision_dim = 1

    def __init__(self, op: OperationSpec, limits: StateLimits, params: CraneParams,
                 sampling: SamplingConfig = SamplingConfig()):
        if op.kind != "trolley":
            raise ValueError("operation spec is not a trolley move")
        self.op = op
        self.limits = limits
        self.params = CraneParams(params.m_h, params.m_l, op.d_h, params.d_l, params.g)
        self.sampling = sampling
        # Unit-time profile: shape arrays on the tau grid, orders 0..6.
        unit = build_trolley_flat(op.start, op.goal, 1.0)
        self.tau = np.linspace(0.0, 1.0, sampling.n_samples)
        self._shape = unit.eval_derivs(self.tau, max_order=6)
        self._weights = _simpson_weights(sampling.n_samples) / (sampling.n_samples - 1)

    @property
    def bounds(self):
        from .moea import Bounds
        return Bounds(np.array([T_FLOOR]), np.array([self.op.t_max]))

    def _states(self, t_op: np.ndarray):
        """Trolley states on the tau grid for a column of operating times."""
        t = t_op[:, None]
        stack = [self._shape[n][None, :] / t**n for n in range(7)]
        return trolley_states_from_flat(stack, self.params)

    def evaluate_batch(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Objective matrix (n, 2) and violation vector for decision rows.

        Fused in-place computation of the peak state magnitudes and the
        effort integral; equivalent to mapping :func:`trolley_states_from_flat`
        over the sample grid (the slower route kept in :meth:`_states`).
        """
        t_op = np.atleast_2d(np.asarray(x, dtype=float))[:, 0].copy()
        if np.any(t_op <= 0):
            raise ValueError("operating times must be positive")
        p = self.params
        lim = self.limits
        ratio, kqh, kq, g = p.d_total / p.g, p.quad_gain_dh, p.quad_gain, p.g
        inv = 1.0 / t_op[:, None]
        r = [None] + [np.multiply(inv**n, self._shape[n][None, :]) for n in range(1, 7)]
        tmp = np.empty_like(r[1])

        peak_al = np.max(np.abs(r[2]), axis=1) / g
        # g*alpha_h = g*kq*r4 - r2
        np.multiply(r[4], g * kq, out=tmp)
        tmp -= r[2]
        peak_ah = np.max(np.abs(tmp), axis=1) / g
        # acceleration into r2, then squared into tmp for the effort integral
        np.multiply(r[4], ratio, out=tmp)
        r[2] += tmp
        np.multiply(r[6], kqh, out=tmp)
        r[2] -= tmp
        np.square(r[2], out=tmp)
        f2 = (tmp @ self._weights) * t_op / lim.trolley_acc**2
        peak_acc = np.sqrt(np.max(tmp, axis=1))
        # velocity into r1
        np.multiply(r[3], ratio, out=tmp)
        r[1] += tmp
        np.multiply(r[5], kqh, out=tmp)
        r[1] -= tmp
        peak_vel = np.max(np.abs(r[1]), axis=1)

        violation = (np.maximum(0.0, peak_vel - lim.trolley_vel) / lim.trolley_vel
                     + np.maximum(0.0, peak_acc - lim.trolley_acc) / lim.trolley_acc
                     + np.maximum(0.0, peak_ah - lim.alpha_h) / lim.alpha_h
                     + np.maximum(0.0, peak_al - lim.alpha_l) / lim.alpha_l
                     + np.maximum(0.0, t_op - self.op.t_max) / self.op.t_max)
        return np.column_stack([t_op, f2]), violation

    def constraint_ratios(self, t_op: float) -> dict[str, float]:
        """Peak |state| / limit per constraint at one operating time."""
        state = self._states(np.array([float(t_op)]))
        lim = self.limits
        return {
            "trolley_vel": float(np.max(np.abs(state.d_t_vel)) / lim.trolley_vel),
            "trolley_acc": float(np.max(np.abs(state.d_t_acc)) / lim.trolley_acc),
            "alpha_h": float(np.max(np.abs(state.alpha_h)) / lim.alpha_h),
            "alpha_l": float(np.max(np.abs(state.alpha_l)) / lim.alpha_l),
        }


class SlewMotop:
    """Bi-objective slew problem over the operating time."""

    decision_dim = 1

    def __init__(self, op: OperationSpec, limits: StateLimits, params: CraneParams,
                 sampling: SamplingConfig = SamplingConfig()):
        if op.kind != "slew":
            raise ValueError("operation spec is not a slew move")
        self.op = op
        self.limits = limits
        self.params = CraneParams(params.m_h, params.m_l, op.d_h, params.d_l, params.g)
        self.sampling = sampling
        flats = build_slew_flats(op.start, op.goal, op.d_t, 1.0)
        self.tau = np.linspace(0.0, 1.0, sampling.n_samples)
        self._xl = flats.x_l.eval_derivs(self.tau, max_order=6)
        self._xh = flats.x_h.eval_derivs(self.tau, max_order=2)
        self._yh = flats.y_h.eval_derivs(self.tau, max_order=2)
        self._yl = flats.y_l.eval_derivs(self.tau, max_order=2)
        self._weights = _simpson_weights(sampling.n_samples) / (sampling.n_samples - 1)
        # the hook/payload y profiles are identical quintics by construction
        assert np.array_equal(self._yh[0], self._yl[0])

    @property
    def bounds(self):
        from .moea import Bounds
        return Bounds(np.array([T_FLOOR]), np.array([self.op.t_max]))

    def _stacks(self, t_op: np.ndarray):
        t = t_op[:, None]
        xl = [self._xl[n][None, :] / t**n for n in range(7)]
        xh = [self._xh[n][None, :] / t**n for n in range(3)]
        yh = [self._yh[n][None, :] / t**n for n in range(3)]
        yl = [self._yl[n][None, :] / t**n for n in range(3)]
        return xh, yh, xl, yl

    def _states(self, t_op: np.ndarray):
        xh, yh, xl, yl = self._stacks(t_op)
        return slew_states_from_flat(xh, yh, xl, yl, self.op.d_t, self.params)

    def evaluate_batch(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Objective matrix (n, 2) and violation vector for decision rows.

        Rows whose trajectory leaves the arccos domain or grazes the slew
        singularity are marked with infinite violation instead of raising.
        Fused in-place computation, equivalent to mapping
        :func:`slew_states_from_flat` over the sample grid.
        """
        t_op = np.atleast_2d(np.asarray(x, dtype=float))[:, 0].copy()
        if np.any(t_op <= 0):
            raise ValueError("operating times must be positive")
        p = self.params
        lim = self.limits
        d_t = self.op.d_t
        ratio, kqh = p.d_total / p.g, p.quad_gain_dh
        inv = 1.0 / t_op[:, None]
        xl = self._xl
        r = [None] + [np.multiply(inv**n, xl[n][None, :]) for n in range(1, 7)]
        tmp = np.empty_like(r[1])

        # projection cosine u and its two time derivatives, all over d_t
        np.multiply(r[2], ratio, out=tmp)
        u = (xl[0][None, :] + tmp) / d_t
        np.multiply(r[4], kqh, out=tmp)
        u -= tmp / d_t
        np.multiply(r[3], ratio, out=tmp)
        ud = r[1] + tmp
        np.multiply(r[5], kqh, out=tmp)
        ud -= tmp
        ud /= d_t
        np.multiply(r[4], ratio, out=tmp)
        udd = r[2] + tmp
        np.multiply(r[6], kqh, out=tmp)
        udd -= tmp
        udd /= d_t

        cos_margin = math.cos(math.asin(SLEW_SIN_MIN))
        bad = np.max(np.abs(u), axis=1) > cos_margin
        np.clip(u, -1.0, 1.0, out=u)
        sin_t = np.sqrt(np.maximum(1.0 - u * u, SLEW_SIN_MIN**2))

        # theta rates (signs do not matter for the peak magnitudes)
        np.divide(ud, sin_t, out=ud)          # |theta_vel|
        peak_vel = np.max(np.abs(ud), axis=1)
        np.square(ud, out=ud)
        ud *= u / sin_t                       # (u/S^3) * udot^2 ... after dividing twice
        np.divide(udd, sin_t, out=udd)
        udd += ud                             # -theta_acc
        np.square(udd, out=tmp)
        f2 = (tmp @ self._weights) * t_op / lim.slew_acc**2
        peak_acc = np.sqrt(np.max(tmp, axis=1))

        # swing peaks from the position shapes and (u, sin)
        xh0 = self._xh[0][None, :]
        yh0 = self._yh[0][None, :]
        dx0 = (self._xl[0] - self._xh[0])[None, :]
        np.multiply(u, xh0, out=ud)
        np.multiply(sin_t, yh0, out=tmp)
        ud += tmp
        ud -= d_t
        peak_ah = np.max(np.abs(ud), axis=1) / p.d_h
        np.multiply(u, yh0, out=ud)
        np.multiply(sin_t, xh0, out=tmp)
        ud -= tmp
        peak_bh = np.max(np.abs(ud), axis=1) / p.d_h
        # y_l == y_h, so payload swings reduce to the x-offset terms
        np.multiply(u, dx0, out=ud)
        peak_al = np.max(np.abs(ud), axis=1) / p.d_l
        np.multiply(sin_t, dx0, out=ud)
        peak_bl = np.max(np.abs(ud), axis=1) / p.d_l

        violation = (np.maximum(0.0, peak_vel - lim.slew_vel) / lim.slew_vel
                     + np.maximum(0.0, peak_acc - lim.slew_acc) / lim.slew_acc
                     + np.maximum(0.0, peak_ah - lim.alpha_h) / lim.alpha_h
                     + np.maximum(0.0, peak_bh - lim.beta_h) / lim.beta_h
                     + np.maximum(0.0, peak_al - lim.alpha_l) / lim.alpha_l
                     + np.maximum(0.0, peak_bl - lim.beta_l) / lim.beta_l
                     + np.maximum(0.0, t_op - self.op.t_max) / self.op.t_max)
        f2[bad] = 0.0
        violation[bad] = np.inf
        return np.column_stack([t_op, f2]), violation

    def constraint_ratios(self, t_op: float) -> dict[str, float]:
        state = self._states(np.array([float(t_op)]))
        lim = self.limits
        return {
            "slew_vel": float(np.max(np.abs(state.theta_s_vel)) / lim.slew_vel),
            "slew_acc": float(np.max(np.abs(state.theta_s_acc)) / lim.slew_acc),
            "alpha_h": float(np.max(np.abs(state.alpha_h)) / lim.alpha_h),
            "beta_h": float(np.max(np.abs(state.beta_h)) / lim.beta_h),
            "alpha_l": float(np.max(np.abs(state.alpha_l)) / lim.alpha_l),
            "beta_l": float(np.max(np.abs(state.beta_l)) / lim.beta_l),
        }


def make_problem(op: OperationSpec, limits: StateLimits, params: CraneParams,
                 sampling: SamplingConfig = SamplingConfig()):
    if op.kind == "trolley":
        return TrolleyMotop(op, limits, params, sampling)
    return SlewMotop(op, limits, params, sampling)


def evaluate(op: OperationSpec, limits: StateLimits, params: CraneParams,
             t_op: float, sampling: SamplingConfig = SamplingConfig()) -> Objectives:
    """Evaluate one operating time: (f1, f2) and aggregated violation."""
    problem = make_problem(op, limits, params, sampling)
    return evaluate_with(problem, t_op)


def evaluate_with(problem, t_op: float) -> Objectives:
    """Evaluate one operating time against a prebuilt problem."""
    f, cv = problem.evaluate_batch(np.array([[float(t_op)]]))
    return Objectives(f1=float(f[0, 0]), f2=float(f[0, 1]), violation=float(cv[0]))


def feasibility_frontier(op: OperationSpec, limits: StateLimits, params: CraneParams,
                         sampling: SamplingConfig = SamplingConfig(),
                         resolution: float = 1e-3) -> float:
    """Smallest feasible operating time, by bisection to the given resolution."""
    problem = make_problem(op, limits, params, sampling)
    lo, hi = T_FLOOR, op.t_max
    _, cv = problem.evaluate_batch(np.array([[lo], [hi]]))
    if cv[1] > 0:
        raise InfeasibleProblemError(f"no feasible operating time up to {op.t_max} s")
    if cv[0] == 0:
        return lo
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        _, cv = problem.evaluate_batch(np.array([[mid]]))
        if cv[0] == 0:
            hi = mid
        else:
            lo = mid
    return hi


def sweep_grid(op: OperationSpec, limits: StateLimits, params: CraneParams,
               sampling: SamplingConfig = SamplingConfig(),
               resolution: float = 0.01) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Deterministic objective sweep over the whole decision interval.

    Returns (t grid, objective matrix, violation vector) for integer
    multiples of the resolution in [T_FLOOR, t_max].
    """
    problem = make_problem(op, limits, params, sampling)
    k_lo = int(math.ceil(T_FLOOR / resolution - 1e-9))
    k_hi = int(math.floor(op.t_max / resolution + 1e-9))
    t = np.arange(k_lo, k_hi + 1) * resolution
    f = np.empty((t.size, 2))
    cv = np.empty(t.size)
    chunk = 256
    for i in range(0, t.size, chunk):
        f[i:i + chunk], cv[i:i + chunk] = problem.evaluate_batch(t[i:i + chunk, None])
    return t, f, cv


def sweep_front(op: OperationSpec, limits: StateLimits, params: CraneParams,
                sampling: SamplingConfig = SamplingConfig(),
                resolution: float = 0.01) -> ParetoFront:
    """Dense oracle front: feasible sweep points, one per grid time."""
    _, f, cv = sweep_grid(op, limits, params, sampling, resolution)
    feasible = f[cv == 0.0]
    if feasible.size == 0:
        raise InfeasibleProblemError("sweep found no feasible operating time")
    return ParetoFront(nondominated(feasible))
