"""Constrained bi-objective differential evolution with collective opposition.

The optimizer is third-generation generalized differential evolution:
DE/rand/1/bin trial generation, constraint-domination selection that can
append mutually nondominated trials, and truncation back to the population
size by nondominated sorting plus crowding distance.

Population seeding supports plain uniform sampling and collective
opposition, which emits five opposition variants (plain, quasi-opposite,
quasi-reflected, extended, reflected-extended) of each random seed point.
No objective evaluations happen during seeding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .metrics import nondominated

OPPOSITION_KINDS = ("plain", "quasi_opposite", "quasi_reflected",
                    "extended", "reflected_extended")


@dataclass(frozen=True)
class Bounds:
    """Per-dimension box bounds of the decision space."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape or np.any(lower >= upper):
            raise ValueError("bounds must satisfy lower < upper in every dimension")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True)
class MoeaConfig:
    """Differential-evolution control parameters and the run seed."""

    cr: float = 0.9
    f: float = 0.5
    population: int = 100
    max_evaluations: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("crossover rate must lie in [0, 1]")
        if not self.f > 0:
            raise ValueError("scaling factor must be positive")
        if self.population < 5 or self.population % 5 != 0:
            raise ValueError("population size must be a positive multiple of 5")
        if self.max_evaluations < self.population:
            raise ValueError("evaluation budget must cover the initial population")


@dataclass
class Solution:
    """Decision vector with its objectives and aggregated violation."""

    x: np.ndarray
    f: np.ndarray | None = None
    violation: float = np.inf

    @property
    def evaluated(self) -> bool:
        return self.f is not None

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0


def _uniform_between(rng: np.random.Generator, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Uniform sample between two arrays regardless of their ordering."""
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return rng.uniform(lo, hi)


def opposite(x: np.ndarray, bounds: Bounds, kind: str,
             rng: np.random.Generator | None = None) -> np.ndarray:
    """One opposition variant of a point, applied per dimension.

    ``plain`` reflects about the domain center deterministically; the other
    four sample uniformly on the interval their definitions prescribe.  A
    point sitting exactly on the center maps to the center for every kind.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if kind not in OPPOSITION_KINDS:
        raise ValueError(f"unknown opposition kind {kind!r}")
    if not bounds.contains(x):
        raise ValueError("point lies outside the decision bounds")
    center = bounds.center
    mirror = bounds.lower + bounds.upper - x
    if kind == "plain":
        return mirror
    if rng is None:
        raise ValueError(f"opposition kind {kind!r} needs a random generator")
    if kind == "quasi_opposite":
        value = _uniform_between(rng, center, mirror)
    elif kind == "quasi_reflected":
        value = _uniform_between(rng, x, center)
    elif kind == "extended":
        near = np.where(mirror > center, bounds.upper, bounds.lower)
        value = _uniform_between(rng, mirror, near)
    else:  # reflected_extended
        near = np.where(x > center, bounds.upper, bounds.lower)
        value = _uniform_between(rng, x, near)
    return np.where(x == center, center, value)


def random_init(n: int, bounds: Bounds, rng: np.random.Generator) -> np.ndarray:
    """Uniform random population of n decision vectors."""
    return rng.uniform(bounds.lower, bounds.upper, size=(n, bounds.dim))


def collective_init(n: int, bounds: Bounds, rng: np.random.Generator) -> np.ndarray:
    """Population of the five opposition families of n/5 random seeds.

    The quasi-opposite and extended variants are derived from each seed's
    plain opposite; the quasi-reflected and reflected-extended variants from
    the seed itself.  The seeds themselves are not part of the output.
    """
    if n % 5 != 0:
        raise ValueError("collective opposition needs a population divisible by 5")
    m = n // 5
    seeds = random_init(m, bounds, rng)
    center = bounds.center
    mirror = bounds.lower + bounds.upper - seeds
    quasi_opp = np.where(seeds == center, center,
                         _uniform_between(rng, np.broadcast_to(center, mirror.shape), mirror))
    quasi_ref = np.where(seeds == center, center,
                         _uniform_between(rng, seeds, np.broadcast_to(center, seeds.shape)))
    near_mirror = np.where(mirror > center, bounds.upper, bounds.lower)
    ext_opp = np.where(seeds == center, center, _uniform_between(rng, mirror, near_mirror))
    near_seed = np.where(seeds > center, bounds.upper, bounds.lower)
    ref_ext = np.where(seeds == center, center, _uniform_between(rng, seeds, near_seed))
    return np.vstack([mirror, quasi_opp, quasi_ref, ext_opp, ref_ext])


@dataclass
class RunResult:
    """Final front plus per-generation convergence history.

    ``history`` holds (cumulative evaluations, feasible nondominated front
    found so far) snapshots, one per generation including initialization.
    """

    front_points: np.ndarray
    front_decisions: np.ndarray
    history: list[tuple[int, np.ndarray]] = field(default_factory=list)
    evaluations: int = 0
    pop_decisions: np.ndarray | None = None
    pop_objectives: np.ndarray | None = None
    pop_violations: np.ndarray | None = None


def _dominates(fa: np.ndarray, fb: np.ndarray) -> bool:
    return bool(np.all(fa <= fb) and np.any(fa < fb))


def _front_ranks(f: np.ndarray, cv: np.ndarray) -> np.ndarray:
    """Constraint-domination front index per solution (0 = best).

    Feasible solutions are ranked by Pareto fronts of their objectives;
    infeasible ones come after every feasible front, ordered by violation.
    """
    n = f.shape[0]
    ranks = np.full(n, -1)
    feas = np.flatnonzero(cv == 0.0)
    rank = 0
    remaining = list(feas)
    while remaining:
        sub = np.array(remaining)
        fs = f[sub]
        # a row is nondominated if no other row weakly dominates it strictly
        le = np.all(fs[:, None, :] <= fs[None, :, :], axis=2)
        lt = np.any(fs[:, None, :] < fs[None, :, :], axis=2)
        dominated = np.any(le & lt, axis=0)
        current = sub[~dominated]
        ranks[current] = rank
        remaining = [i for i in remaining if ranks[i] == -1]
        rank += 1
    infeas = np.flatnonzero(cv > 0.0)
    if infeas.size:
        order = infeas[np.argsort(cv[infeas], kind="stable")]
        for offset, idx in enumerate(order):
            ranks[idx] = rank + offset
    return ranks


def _crowding(f: np.ndarray) -> np.ndarray:
    """Crowding distance of each row of a single front."""
    n = f.shape[0]
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for j in range(f.shape[1]):
        order = np.argsort(f[:, j], kind="stable")
        span = f[order[-1], j] - f[order[0], j]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (f[order[2:], j] - f[order[:-2], j]) / span
    return dist


def _truncate(x: np.ndarray, f: np.ndarray, cv: np.ndarray, n: int) -> np.ndarray:
    """Indices of the n solutions kept after nondominated sorting + crowding."""
    ranks = _front_ranks(f, cv)
    keep: list[int] = []
    for rank in np.unique(ranks):
        members = np.flatnonzero(ranks == rank)
        if len(keep) + members.size <= n:
            keep.extend(members.tolist())
        else:
            crowd = _crowding(f[members])
            # most spread first; ties by decision value then insertion order
            order = sorted(range(members.size),
                           key=lambda i: (-crowd[i], tuple(x[members[i]]), members[i]))
            keep.extend(members[order[:n - len(keep)]].tolist())
        if len(keep) == n:
            break
    return np.array(keep)


def _feasible_front(f: np.ndarray, cv: np.ndarray,
                    x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nondominated feasible objective rows and matching decisions."""
    feas = np.flatnonzero(cv == 0.0)
    if feas.size == 0:
        return np.empty((0, 2)), np.empty((0, x.shape[1]))
    order = feas[np.lexsort((f[feas, 1], f[feas, 0]))]
    keep = []
    best_f2 = np.inf
    for idx in order:
        if f[idx, 1] < best_f2:
            keep.append(idx)
            best_f2 = f[idx, 1]
    return f[keep].copy(), x[keep].copy()


def _evaluate(problem, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Problem evaluation that turns failures into infeasible markers."""
    try:
        f, cv = problem.evaluate_batch(x)
        return np.asarray(f, dtype=float), np.asarray(cv, dtype=float)
    except Exception:
        f = np.full((x.shape[0], 2), np.inf)
        cv = np.full(x.shape[0], np.inf)
        for i in range(x.shape[0]):
            try:
                fi, cvi = problem.evaluate_batch(x[i:i + 1])
                f[i], cv[i] = fi[0], cvi[0]
            except Exception:
                pass
        return f, cv


def gde3_run(problem, config: MoeaConfig, init: str = "collective") -> RunResult:
    """Run the evolution until the evaluation budget is exhausted.

    ``init`` selects "random" uniform seeding or "collective" opposition
    seeding.  The initial population evaluation counts toward the budget;
    a generation only starts if a full population evaluation still fits.
    """
    if init not in ("random", "collective"):
        raise ValueError(f"unknown initialization mode {init!r}")
    bounds: Bounds = problem.bounds
    rng = np.random.default_rng(config.seed)
    n = config.population

    if init == "collective":
        x = collective_init(n, bounds, rng)
    else:
        x = random_init(n, bounds, rng)
    f, cv = _evaluate(problem, x)
    evaluations = n

    archive_pts = _feasible_front(f, cv, x)[0]
    history = [(evaluations, archive_pts.copy())]

    while evaluations + n <= config.max_evaluations:
        trials = np.empty_like(x)
        for i in range(n):
            while True:
                r1, r2, r3 = rng.integers(0, n, size=3)
                if len({int(r1), int(r2), int(r3), i}) == 4:
                    break
            mutant = x[r1] + config.f * (x[r2] - x[r3])
            cross = rng.random(bounds.dim) < config.cr
            cross[rng.integers(bounds.dim)] = True
            trials[i] = bounds.clip(np.where(cross, mutant, x[i]))
        ft, cvt = _evaluate(problem, trials)
        evaluations += n

        keep_x, keep_f, keep_cv = [], [], []
        for i in range(n):
            trial_wins, append_trial = _gde3_select(ft[i], cvt[i], f[i], cv[i])
            if trial_wins:
                keep_x.append(trials[i]); keep_f.append(ft[i]); keep_cv.append(cvt[i])
            else:
                keep_x.append(x[i]); keep_f.append(f[i]); keep_cv.append(cv[i])
                if append_trial:
                    keep_x.append(trials[i]); keep_f.append(ft[i]); keep_cv.append(cvt[i])
        x = np.array(keep_x)
        f = np.array(keep_f)
        cv = np.array(keep_cv)
        if x.shape[0] > n:
            kept = _truncate(x, f, cv, n)
            x, f, cv = x[kept], f[kept], cv[kept]

        feas_new = cvt == 0.0
        if np.any(feas_new):
            merged = np.vstack([archive_pts, ft[feas_new]]) if archive_pts.size else ft[feas_new]
            archive_pts = nondominated(merged)
        history.append((evaluations, archive_pts.copy()))

    front_pts, front_x = _feasible_front(f, cv, x)
    return RunResult(front_points=front_pts, front_decisions=front_x,
                     history=history, evaluations=evaluations,
                     pop_decisions=x, pop_objectives=f, pop_violations=cv)


def _gde3_select(f_trial, cv_trial, f_parent, cv_parent) -> tuple[bool, bool]:
    """(trial replaces parent, trial appended alongside parent)."""
    if cv_trial > 0.0 or cv_parent > 0.0:
        # at least one infeasible: feasibility first, then lower violation
        return (cv_trial < cv_parent, False)
    if np.all(f_trial <= f_parent):
        return (True, False)
    if _dominates(f_parent, f_trial):
        return (False, False)
    return (False, True)
