"""Similarity and uncertainty formulas.

Single-pair convenience wrappers around the batch kernels in `kernels`;
the retrieval layer calls the batch kernels directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, MemberCountMismatch, NonPositiveVariance
from .types import Descriptor, MlsConvention, ProbabilisticDescriptor


@dataclass(frozen=True)
class ScorePair:
    """Mean and population variance of a query-entry similarity (variance is
    0 for single-member comparisons)."""

    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < 0.0:
            raise ValueError("score variance must be non-negative")


def _vec(x) -> np.ndarray:
    if isinstance(x, Descriptor):
        return x.values
    return np.asarray(x, dtype=np.float64)


def cosine_similarity(query, entry) -> float:
    """Cosine similarity between two descriptors; raises ZeroVector on a
    zero-norm input."""
    q = _vec(query)
    d = _vec(entry)
    if q.shape != d.shape:
        raise DimensionMismatch(f"dimension mismatch: {q.shape} vs {d.shape}")
    return float(kernels.cosine_scores(q, d[np.newaxis, :])[0])


def standard_uncertainty(best_score: float) -> float:
    """Uncertainty of the standard baseline: negative best similarity."""
    return -best_score


def mls_score(
    query: ProbabilisticDescriptor,
    entry: ProbabilisticDescriptor,
    convention: MlsConvention = MlsConvention.DIFFERENCE,
) -> float:
    """Mutual likelihood score between two Gaussian embeddings.

    DIFFERENCE uses the squared difference of means (log-likelihood of the
    two descriptors describing the same place); PAPER_LITERAL uses the
    squared sum instead.
    """
    if query.dim != entry.dim:
        raise DimensionMismatch(f"dimension mismatch: {query.dim} vs {entry.dim}")
    if np.any(query.variance <= 0.0) or np.any(entry.variance <= 0.0):
        raise NonPositiveVariance("mls_score requires strictly positive variances")
    return float(
        kernels.mls_scores(
            query.mean,
            query.variance,
            entry.mean[np.newaxis, :],
            entry.variance[np.newaxis, :],
            literal=convention is MlsConvention.PAPER_LITERAL,
        )[0]
    )


def stun_uncertainty(query: ProbabilisticDescriptor) -> float:
    """Sum of the query's per-dimension variance.

    The mean (sum / L) differs only by a positive constant, so every
    rank-based metric downstream is identical under either convention.
    """
    return float(np.sum(query.variance))


def multi_member_scores(q_members, d_members) -> ScorePair:
    """Mean and population variance (divide by M) of the M per-member cosine
    scores between a query and one database entry."""
    qm = np.asarray(q_members, dtype=np.float64)
    dm = np.asarray(d_members, dtype=np.float64)
    if qm.ndim != 2 or dm.ndim != 2:
        raise DimensionMismatch("expected (M, L) member arrays")
    if qm.shape[0] != dm.shape[0]:
        raise MemberCountMismatch(
            f"member counts differ: {qm.shape[0]} vs {dm.shape[0]}"
        )
    if qm.shape[1] != dm.shape[1]:
        raise DimensionMismatch(f"dimension mismatch: {qm.shape[1]} vs {dm.shape[1]}")
    mean, var = kernels.member_score_stats(qm, dm[:, np.newaxis, :])
    return ScorePair(mean=float(mean[0]), variance=float(var[0]))
