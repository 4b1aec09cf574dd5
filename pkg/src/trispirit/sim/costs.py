"""Per-path cost models and deterministic cost sampling.

Latency and energy for each execution path are Gaussian with the defaults
below; sampled values are clamped at zero. Every task owns one fixed row of
the pre-sampled noise table: system paths read columns 0 and 1, the two
baselines read columns 2 and 3. A given (task, path) pair therefore always
costs the same no matter which variant or threshold configuration asks,
which is what makes threshold sweeps free of noise artefacts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from ..workload import ConfigurationError

__all__ = ["PathCost", "CostModel", "CostSample", "BASELINE_PATHS", "sample_cost"]


@dataclass(frozen=True)
class PathCost:
    """Cost distribution of one execution path."""

    latency_mean: float
    latency_sd: float
    energy_mean: float
    energy_sd: float
    model_calls: int
    requires_network: bool


def _default_paths(cloud_calls: int) -> dict[str, PathCost]:
    return {
        "reflex": PathCost(5.5, 1.4, 0.48, 0.10, 0, False),
        "agent": PathCost(155.0, 30.0, 10.2, 2.0, 1, False),
        "super": PathCost(1920.0, 280.0, 40.5, 7.0, 2, True),
        "habit": PathCost(2.1, 0.5, 0.09, 0.02, 0, False),
        # Baselines: the cloud baseline costs what the super tier costs, the
        # edge baseline what the agent tier costs; each makes one model call.
        "cloud-baseline": PathCost(1920.0, 280.0, 40.5, 7.0, cloud_calls, True),
        "edge-baseline": PathCost(155.0, 30.0, 10.2, 2.0, 1, False),
    }


#: Paths whose noise comes from the baseline columns of the noise table.
BASELINE_PATHS = frozenset({"cloud-baseline", "edge-baseline"})


@dataclass(frozen=True)
class CostModel:
    """Immutable path-cost table.

    ``cloud_calls`` switches the cloud baseline between single-call
    accounting (the default) and the alternative two-call accounting.
    ``overrides`` patches individual fields per path, e.g.
    ``{"agent": {"latency_mean": 120.0}}``.
    """

    paths: Mapping[str, PathCost] = None  # type: ignore[assignment]
    cloud_calls: int = 1

    def __post_init__(self) -> None:
        if self.cloud_calls not in (1, 2):
            raise ConfigurationError(f"cloud_calls must be 1 or 2, got {self.cloud_calls}")
        if self.paths is None:
            object.__setattr__(self, "paths", _default_paths(self.cloud_calls))
        else:
            object.__setattr__(self, "paths", dict(self.paths))

    def with_overrides(self, overrides: Mapping[str, Mapping[str, float]]) -> "CostModel":
        paths = dict(self.paths)
        for path, fields in overrides.items():
            if path not in paths:
                raise ConfigurationError(f"unknown cost path {path!r}")
            unknown = set(fields) - set(PathCost.__dataclass_fields__)
            if unknown:
                raise ConfigurationError(
                    f"unknown cost fields for {path!r}: {sorted(unknown)}"
                )
            paths[path] = replace(paths[path], **fields)
        return CostModel(paths=paths, cloud_calls=self.cloud_calls)


@dataclass(frozen=True)
class CostSample:
    latency_ms: float
    energy_mj: float
    model_calls: int
    requires_network: bool


def sample_cost(
    path: str,
    task_id: int,
    noise_table: np.ndarray,
    model: CostModel = CostModel(),
) -> CostSample:
    """Deterministic cost of running one task on one path.

    Uses the task's fixed noise row; negative draws are clamped to zero.
    """
    try:
        pc = model.paths[path]
    except KeyError:
        raise ConfigurationError(f"unknown execution path {path!r}") from None
    if not (0 <= task_id < len(noise_table)):
        raise ValueError(
            f"no noise row for task {task_id} (table has {len(noise_table)} rows)"
        )
    col = 2 if path in BASELINE_PATHS else 0
    z_lat = float(noise_table[task_id, col])
    z_en = float(noise_table[task_id, col + 1])
    return CostSample(
        latency_ms=max(0.0, pc.latency_mean + pc.latency_sd * z_lat),
        energy_mj=max(0.0, pc.energy_mean + pc.energy_sd * z_en),
        model_calls=pc.model_calls,
        requires_network=pc.requires_network,
    )
