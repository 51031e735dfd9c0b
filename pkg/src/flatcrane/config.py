"""JSON configuration loading for the planning and comparison commands.

All physical quantities are SI; angular keys may instead carry a ``_deg``
suffix and are converted to radians on load.  A seed is required so every
run is reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .crane import CraneParams
from .metrics import Normalization
from .moea import MoeaConfig
from .motop import OperationSpec, SamplingConfig, StateLimits


class ConfigError(ValueError):
    """Malformed or inconsistent configuration input."""


def _angle(section: dict, key: str, default: float | None = None) -> float:
    """Fetch an angle in radians, accepting either ``key`` or ``key_deg``."""
    if key in section and f"{key}_deg" in section:
        raise ConfigError(f"give either {key!r} or '{key}_deg', not both")
    if f"{key}_deg" in section:
        return math.radians(float(section[f"{key}_deg"]))
    if key in section:
        return float(section[key])
    if default is None:
        raise ConfigError(f"missing angle key {key!r} (or '{key}_deg')")
    return default


def _require(section: dict, key: str, context: str) -> float:
    if key not in section:
        raise ConfigError(f"missing {key!r} in {context!r} section")
    return section[key]


@dataclass(frozen=True)
class PlanConfig:
    """Validated bundle of everything one planning run needs."""

    params: CraneParams
    operation: OperationSpec
    limits: StateLimits
    moea: MoeaConfig
    sampling: SamplingConfig
    normalization: Normalization
    epsilon: float
    seed: int


def load_config(path: str | Path, seed_override: int | None = None) -> PlanConfig:
    """Parse and validate a configuration file."""
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    try:
        return _build(raw, seed_override)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc))


def _build(raw: dict, seed_override: int | None) -> PlanConfig:
    op_raw = raw.get("operation")
    if not op_raw:
        raise ConfigError("missing 'operation' section")
    kind = op_raw.get("kind")
    if kind == "trolley":
        operation = OperationSpec(
            kind="trolley",
            start=float(_require(op_raw, "d_Ti", "operation")),
            goal=float(_require(op_raw, "d_Tf", "operation")),
            d_h=float(_require(op_raw, "D_h", "operation")),
            t_max=float(_require(op_raw, "t_max", "operation")),
        )
    elif kind == "slew":
        operation = OperationSpec(
            kind="slew",
            start=_angle(op_raw, "theta_Si"),
            goal=_angle(op_raw, "theta_Sf"),
            d_h=float(_require(op_raw, "D_h", "operation")),
            t_max=float(_require(op_raw, "t_max", "operation")),
            d_t=float(_require(op_raw, "D_T", "operation")),
        )
    else:
        raise ConfigError("operation kind must be 'trolley' or 'slew'")

    crane = raw.get("crane", {})
    params = CraneParams(
        m_h=float(_require(crane, "m_h", "crane")),
        m_l=float(_require(crane, "m_l", "crane")),
        d_h=float(crane.get("D_h", operation.d_h)),
        d_l=float(_require(crane, "D_l", "crane")),
        g=float(crane.get("g", 9.8)),
    )

    lim = raw.get("limits", {})
    limits = StateLimits(
        trolley_vel=float(_require(lim, "trolley_vel", "limits")),
        trolley_acc=float(_require(lim, "trolley_acc", "limits")),
        slew_vel=_angle(lim, "slew_vel"),
        slew_acc=_angle(lim, "slew_acc"),
        alpha_h=_angle(lim, "alpha_h"),
        beta_h=_angle(lim, "beta_h"),
        alpha_l=_angle(lim, "alpha_l"),
        beta_l=_angle(lim, "beta_l"),
    )

    if seed_override is not None:
        seed = int(seed_override)
    elif "seed" in raw:
        seed = int(raw["seed"])
    else:
        raise ConfigError("a 'seed' is required for reproducible runs")

    moea_raw = raw.get("moea", {})
    moea = MoeaConfig(
        cr=float(moea_raw.get("cr", 0.9)),
        f=float(moea_raw.get("f", 0.5)),
        population=int(moea_raw.get("population", 100)),
        max_evaluations=int(moea_raw.get("max_evaluations", 1000)),
        seed=seed,
    )

    samp = raw.get("sampling", {})
    sampling = SamplingConfig(
        n_samples=int(samp.get("n_samples", 2001)),
        dt=float(samp.get("dt", 1e-3)),
    )

    metrics_raw = raw.get("metrics", {})
    normalization = Normalization(
        f1_scale=operation.t_max,
        f2_scale=float(metrics_raw.get("f2_cap", 2.0)),
    )
    epsilon = float(metrics_raw.get("epsilon", 0.01))

    return PlanConfig(params=params, operation=operation, limits=limits,
                      moea=moea, sampling=sampling, normalization=normalization,
                      epsilon=epsilon, seed=seed)
