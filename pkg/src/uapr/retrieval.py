"""Ranking a query against a visible database slice and building predictions."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptyVisibleSet, MethodDataMismatch
from .types import (
    DescriptorSet,
    ErrorType,
    Method,
    MethodConfig,
    Prediction,
    MlsConvention,
    SetKind,
    UncertaintySource,
)


@dataclass(frozen=True)
class QueryBundle:
    """One query in whatever form the method needs: M member vectors (M, L)
    plus an optional per-dimension variance (L,)."""

    members: np.ndarray
    variance: np.ndarray | None = None
    pose: np.ndarray | None = None
    timestamp: float = 0.0
    index: int = 0

    @classmethod
    def from_set(cls, dataset: DescriptorSet, i: int) -> "QueryBundle":
        var = None if dataset.variances is None else dataset.variances[i].astype(np.float64)
        return cls(
            members=dataset.members[:, i, :].astype(np.float64),
            variance=var,
            pose=dataset.poses[i],
            timestamp=float(dataset.timestamps[i]),
            index=i,
        )


@dataclass(frozen=True)
class RankedCandidates:
    """Top candidates, descending by the method's ranking score; ties broken
    by lower database index."""

    indices: np.ndarray         # (k,) database indices
    means: np.ndarray           # (k,) ranking scores
    variances: np.ndarray       # (k,) score variances (0 for M=1 methods)

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class GroundTruthContext:
    """What labeling needs: the query's true pose and the revisit radius."""

    query_pose: np.ndarray
    revisit_radius: float


class Decision(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"


def threshold_decision(uncertainty: float, lam: float) -> Decision:
    """Accept (classify correct) iff U <= lambda; the boundary is inclusive."""
    return Decision.ACCEPT if uncertainty <= lam else Decision.REJECT


def _check_method_data(query: QueryBundle, database: DescriptorSet, config: MethodConfig):
    method = config.method
    if method in (Method.PPE, Method.STUN):
        if database.kind is not SetKind.PROBABILISTIC or query.variance is None:
            raise MethodDataMismatch(f"{method.value} requires probabilistic sets")
    elif method in (Method.DROPOUT, Method.ENSEMBLE):
        if query.members.shape[0] != database.member_count:
            raise MethodDataMismatch(
                "query and database member counts differ: "
                f"{query.members.shape[0]} vs {database.member_count}"
            )
    if query.members.shape[1] != database.dim:
        raise MethodDataMismatch(
            f"descriptor dimension mismatch: {query.members.shape[1]} vs {database.dim}"
        )


def _ranking_scores(
    query: QueryBundle,
    database: DescriptorSet,
    visible: np.ndarray,
    config: MethodConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-visible-entry (ranking score, score variance)."""
    method = config.method
    if method in (Method.STANDARD, Method.STUN):
        # STUN ranks with plain cosine on the student mean; only U differs.
        db = database.members[0, visible, :].astype(np.float64)
        means = kernels.cosine_scores(query.members[0], db)
        return means, np.zeros_like(means)
    if method is Method.PPE:
        db_mean = database.members[0, visible, :].astype(np.float64)
        db_var = database.variances[visible, :].astype(np.float64)
        means = kernels.mls_scores(
            query.members[0],
            query.variance,
            db_mean,
            db_var,
            literal=config.mls_convention is MlsConvention.PAPER_LITERAL,
        )
        return means, np.zeros_like(means)
    # DROPOUT / ENSEMBLE
    db = database.members[:, visible, :].astype(np.float64)
    return kernels.member_score_stats(query.members, db)


def rank(
    query: QueryBundle,
    database: DescriptorSet,
    visible: np.ndarray,
    config: MethodConfig,
) -> RankedCandidates:
    """Ranks the visible database slice, returning the top min(K, |visible|)."""
    visible = np.asarray(visible, dtype=np.intp)
    if visible.size == 0:
        raise EmptyVisibleSet("no visible database entries for this query")
    _check_method_data(query, database, config)
    means, variances = _ranking_scores(query, database, visible, config)
    # lexsort: primary key last -> sort by -score, then by database index
    order = np.lexsort((visible, -means))
    top = order[: min(config.top_k, visible.size)]
    return RankedCandidates(
        indices=visible[top], means=means[top], variances=variances[top]
    )


def _uncertainty(query: QueryBundle, candidates: RankedCandidates, config: MethodConfig) -> float:
    method = config.method
    if method is Method.STUN:
        return float(np.sum(query.variance))
    if (
        method in (Method.DROPOUT, Method.ENSEMBLE)
        and config.uncertainty_source is UncertaintySource.SIMILARITY_VARIANCE
    ):
        return float(candidates.variances[0])
    # Standard / PPE / mean-similarity ensembles: negative best ranking score
    return -float(candidates.means[0])


def predict(
    query: QueryBundle,
    database: DescriptorSet,
    visible: np.ndarray,
    config: MethodConfig,
    context: GroundTruthContext,
) -> Prediction:
    """Top-1 prediction with uncertainty and correctness labels.

    has_match is decided against the visible slice only, so the same code
    serves both the batch and the online protocols.
    """
    visible = np.asarray(visible, dtype=np.intp)
    candidates = rank(query, database, visible, config)
    dists = np.linalg.norm(
        database.poses[visible] - context.query_pose[np.newaxis, :], axis=1
    )
    has_match = bool(np.any(dists <= context.revisit_radius))
    cand_dists = np.linalg.norm(
        database.poses[candidates.indices] - context.query_pose[np.newaxis, :], axis=1
    )
    hits = cand_dists <= context.revisit_radius
    correct = has_match and bool(hits[0])
    if correct:
        error_type = ErrorType.NONE
    elif has_match:
        error_type = ErrorType.INCORRECT_MATCH
    else:
        error_type = ErrorType.NO_MATCH
    return Prediction(
        query_index=query.index,
        predicted_index=int(candidates.indices[0]),
        score=float(candidates.means[0]),
        uncertainty=_uncertainty(query, candidates, config),
        correct=correct,
        error_type=error_type,
        has_match=has_match,
        candidate_indices=tuple(int(i) for i in candidates.indices),
        candidate_hits=tuple(bool(h) for h in hits),
    )
