"""Evaluation regimes: batch traversal pairs and in-session online runs."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import MissingTimestamps
from .retrieval import GroundTruthContext, QueryBundle, predict
from .types import DescriptorSet, ErrorType, MethodConfig, Prediction, validate_set

BATCH_REVISIT_RADIUS = 25.0
SESSION_REVISIT_RADIUS = 10.0
SESSION_EXCLUSION_WINDOW = 90.0


class Mode(enum.Enum):
    BATCH = "batch"
    SESSION = "session"


@dataclass(frozen=True)
class ProtocolConfig:
    mode: Mode
    revisit_radius: float
    exclusion_window: float = SESSION_EXCLUSION_WINDOW
    top_k: int = 1

    def __post_init__(self):
        if self.revisit_radius <= 0.0:
            raise ValueError("revisit_radius must be positive")
        if self.exclusion_window < 0.0:
            raise ValueError("exclusion_window must be non-negative")

    @classmethod
    def batch(cls, revisit_radius: float = BATCH_REVISIT_RADIUS, top_k: int = 1):
        return cls(mode=Mode.BATCH, revisit_radius=revisit_radius, top_k=top_k)

    @classmethod
    def session(
        cls,
        revisit_radius: float = SESSION_REVISIT_RADIUS,
        exclusion_window: float = SESSION_EXCLUSION_WINDOW,
        top_k: int = 1,
    ):
        return cls(
            mode=Mode.SESSION,
            revisit_radius=revisit_radius,
            exclusion_window=exclusion_window,
            top_k=top_k,
        )


@dataclass(frozen=True)
class RunCounts:
    total: int
    with_match: int
    correct: int
    incorrect_match: int
    no_match: int
    skipped_empty_visible: int


@dataclass(frozen=True)
class LabeledRun:
    predictions: tuple[Prediction, ...]
    counts: RunCounts

    def uncertainty_split(self) -> tuple[np.ndarray, np.ndarray]:
        """Uncertainties of correct vs incorrect predictions (U_C, U_I)."""
        u_c = np.array([p.uncertainty for p in self.predictions if p.correct])
        u_i = np.array([p.uncertainty for p in self.predictions if not p.correct])
        return u_c, u_i


def _counts(predictions: list[Prediction], skipped: int) -> RunCounts:
    return RunCounts(
        total=len(predictions) + skipped,
        with_match=sum(p.has_match for p in predictions),
        correct=sum(p.correct for p in predictions),
        incorrect_match=sum(
            p.error_type is ErrorType.INCORRECT_MATCH for p in predictions
        ),
        no_match=sum(p.error_type is ErrorType.NO_MATCH for p in predictions),
        skipped_empty_visible=skipped,
    )


def _predict_many(jobs, workers: int) -> list[Prediction]:
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda j: predict(*j), jobs))
    return [predict(*j) for j in jobs]


def run_batch(
    queries: DescriptorSet,
    database: DescriptorSet,
    config: ProtocolConfig,
    method: MethodConfig,
    workers: int = 1,
) -> LabeledRun:
    """Evaluates every query against the full database.

    Queries without any true positive in the database are labeled NO_MATCH
    and excluded from recall denominators downstream (has_match=False).
    """
    validate_set(queries)
    validate_set(database)
    method = replace(method, top_k=max(method.top_k, config.top_k))
    visible = np.arange(database.count, dtype=np.intp)
    jobs = [
        (
            QueryBundle.from_set(queries, i),
            database,
            visible,
            method,
            GroundTruthContext(queries.poses[i], config.revisit_radius),
        )
        for i in range(queries.count)
    ]
    predictions = _predict_many(jobs, workers)
    return LabeledRun(predictions=tuple(predictions), counts=_counts(predictions, 0))


def visible_at(timestamps: np.ndarray, t: float, exclusion_window: float) -> np.ndarray:
    """Indices visible to a query at time t: timestamp <= t - window, boundary
    inclusive."""
    return np.flatnonzero(timestamps <= t - exclusion_window).astype(np.intp)


def run_session(
    run: DescriptorSet,
    config: ProtocolConfig,
    method: MethodConfig,
    workers: int = 1,
) -> LabeledRun:
    """Online evaluation of a single traversal: every entry is queried against
    the entries recorded at least exclusion_window seconds before it.

    Queries with an empty visible set are skipped (counted, not scored).
    """
    if not run.has_timestamps:
        raise MissingTimestamps("session protocol requires timestamps")
    validate_set(run, session=True)
    method = replace(method, top_k=max(method.top_k, config.top_k))
    jobs = []
    skipped = 0
    for i in range(run.count):
        visible = visible_at(run.timestamps, float(run.timestamps[i]), config.exclusion_window)
        if visible.size == 0:
            skipped += 1
            continue
        jobs.append(
            (
                QueryBundle.from_set(run, i),
                run,
                visible,
                method,
                GroundTruthContext(run.poses[i], config.revisit_radius),
            )
        )
    predictions = _predict_many(jobs, workers)
    return LabeledRun(predictions=tuple(predictions), counts=_counts(predictions, skipped))


def split_by_error_type(run: LabeledRun) -> tuple[LabeledRun, LabeledRun]:
    """Two sub-runs for per-error-type analysis: each keeps every correct
    prediction plus only the named error class."""
    correct = [p for p in run.predictions if p.correct]
    im = [p for p in run.predictions if p.error_type is ErrorType.INCORRECT_MATCH]
    nm = [p for p in run.predictions if p.error_type is ErrorType.NO_MATCH]
    im_preds = tuple(sorted(correct + im, key=lambda p: p.query_index))
    nm_preds = tuple(sorted(correct + nm, key=lambda p: p.query_index))
    return (
        LabeledRun(predictions=im_preds, counts=_counts(list(im_preds), 0)),
        LabeledRun(predictions=nm_preds, counts=_counts(list(nm_preds), 0)),
    )
