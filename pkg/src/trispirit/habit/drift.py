"""Context-drift monitoring with a kernel two-sample statistic.

Recent context vectors are compared against the policy's compile-time
baseline using the unbiased squared maximum mean discrepancy under an RBF
kernel. The kernel bandwidth follows the median heuristic over the pooled
sample. When the estimate exceeds the threshold the policy is invalidated
and its task class reverts to model-mediated execution.
"""

from __future__ import annotations

import enum

import numpy as np

from .policy import HabitPolicy, PolicyStatus

__all__ = ["DriftVerdict", "rbf_bandwidth", "mmd2_unbiased", "drift_check"]

DEFAULT_DRIFT_THRESHOLD = 0.05
MIN_SAMPLE = 10


class DriftVerdict(enum.Enum):
    IN_DISTRIBUTION = "in-distribution"
    DRIFTED = "drifted"


def _pairwise_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aa = np.sum(a * a, axis=1)[:, None]
    bb = np.sum(b * b, axis=1)[None, :]
    sq = aa + bb - 2.0 * (a @ b.T)
    return np.maximum(sq, 0.0)


def rbf_bandwidth(x: np.ndarray, y: np.ndarray) -> float:
    """Median pairwise distance over the pooled sample; 1.0 when degenerate."""
    pooled = np.vstack([x, y])
    sq = _pairwise_sq_dists(pooled, pooled)
    iu = np.triu_indices(len(pooled), k=1)
    median = float(np.median(np.sqrt(sq[iu])))
    return median if median > 0 else 1.0


def mmd2_unbiased(
    x: np.ndarray, y: np.ndarray, bandwidth: float | None = None
) -> float:
    """Unbiased squared MMD estimate with an RBF kernel.

    Diagonal (self-similarity) terms are excluded from the within-sample
    averages, so the estimate is unbiased and may be slightly negative for
    identically distributed samples.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if x.shape[1] != y.shape[1]:
        raise ValueError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    m, n = len(x), len(y)
    if m < 2 or n < 2:
        raise ValueError("need at least 2 samples on each side")

    h = rbf_bandwidth(x, y) if bandwidth is None else bandwidth
    gamma = 1.0 / (2.0 * h * h)

    kxx = np.exp(-gamma * _pairwise_sq_dists(x, x))
    kyy = np.exp(-gamma * _pairwise_sq_dists(y, y))
    kxy = np.exp(-gamma * _pairwise_sq_dists(x, y))

    sum_xx = kxx.sum() - np.trace(kxx)
    sum_yy = kyy.sum() - np.trace(kyy)
    return float(
        sum_xx / (m * (m - 1)) + sum_yy / (n * (n - 1)) - 2.0 * kxy.mean()
    )


def drift_check(
    policy: HabitPolicy,
    recent: np.ndarray,
    threshold: float = DEFAULT_DRIFT_THRESHOLD,
) -> DriftVerdict:
    """Compare recent contexts against the policy baseline.

    Requires at least :data:`MIN_SAMPLE` vectors on each side. A DRIFTED
    verdict invalidates the policy as a side effect, after which
    :func:`~trispirit.habit.step_policy` refuses to run it.
    """
    recent = np.atleast_2d(np.asarray(recent, dtype=float))
    if len(recent) < MIN_SAMPLE:
        raise ValueError(f"need >= {MIN_SAMPLE} recent contexts, got {len(recent)}")
    if len(policy.baseline_contexts) < MIN_SAMPLE:
        raise ValueError(
            f"policy baseline has {len(policy.baseline_contexts)} contexts, "
            f"need >= {MIN_SAMPLE}"
        )
    estimate = mmd2_unbiased(policy.baseline_contexts, recent)
    if estimate > threshold:
        policy.status = PolicyStatus.INVALIDATED
        return DriftVerdict.DRIFTED
    return DriftVerdict.IN_DISTRIBUTION
