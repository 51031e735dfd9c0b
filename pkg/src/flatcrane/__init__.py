"""Anti-swing trajectory planning for double-pendulum tower cranes.

The package plans time-vs-effort optimal trolley and slew moves by
parameterizing the differentially flat outputs with fixed polynomial
profiles, solving the resulting constrained bi-objective problems with a
collective-opposition-seeded differential evolution, and validating the
planned swings against an independent forward simulation.
"""

from .afmf import AfmfResult, afmf_select
from .crane import (
    CraneParams,
    ProjectionRangeError,
    SlewSingularityError,
    SlewState,
    TrolleyState,
    slew_states_from_flat,
    trolley_states_from_flat,
)
from .metrics import (
    Normalization,
    ParetoFront,
    RunStats,
    aggregate_stats,
    fe_to_converge,
    hyperarea,
    spacing,
)
from .moea import Bounds, MoeaConfig, RunResult, Solution, collective_init, gde3_run, opposite
from .motop import (
    InfeasibleProblemError,
    Objectives,
    OperationSpec,
    SamplingConfig,
    StateLimits,
    evaluate,
    feasibility_frontier,
    make_problem,
    slew_operation,
    sweep_front,
    trolley_operation,
)
from .oracle import (
    SimTrace,
    SlewConsistency,
    integrate_trolley_swings,
    natural_frequencies,
    slew_consistency_report,
    swing_energy,
)
from .trajectory import (
    FlatTrajectory,
    SlewFlats,
    build_slew_flats,
    build_trolley_flat,
    eval_derivs,
)

__version__ = "0.1.0"
