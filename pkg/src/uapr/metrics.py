"""Recall@K, ROC/AuROC, error-vs-rejection/AuER, and precision-recall curves.

All metrics consume a LabeledRun (or the (U_C, U_I) uncertainty split) and
are pure functions.  Degenerate inputs raise DegenerateClass or
NoMatchableQueries; callers report those metrics as absent, never NaN.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateClass, NoMatchableQueries
from .protocol import LabeledRun


class CurveKind(enum.Enum):
    ROC = "roc"
    PAPER_ROC = "paper_roc"
    ERROR_REJECTION = "error_rejection"
    PRECISION_RECALL = "precision_recall"
    RECALL_AT_K = "recall_at_k"


class RocConvention(enum.Enum):
    STANDARD = "standard"
    PAPER_LITERAL = "paper_literal"


@dataclass(frozen=True)
class CurveSeries:
    points: tuple[tuple[float, float], ...]
    kind: CurveKind

    def __post_init__(self):
        xs = np.array([p[0] for p in self.points])
        if self.kind is not CurveKind.PAPER_ROC and np.any(np.diff(xs) < 0.0):
            raise ValueError(f"{self.kind.value} curve x-values must be non-decreasing")

    def xy(self) -> tuple[np.ndarray, np.ndarray]:
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 2)
        return pts[:, 0], pts[:, 1]


def recall_at_k(run: LabeledRun, k: int) -> float:
    """Percentage of matchable queries with a true positive in the top-k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    matchable = [p for p in run.predictions if p.has_match]
    if not matchable:
        raise NoMatchableQueries("no query has a true positive in the database")
    hits = sum(any(p.candidate_hits[:k]) for p in matchable)
    return 100.0 * hits / len(matchable)


def recall_at_k_curve(run: LabeledRun, max_k: int) -> CurveSeries:
    points = tuple((float(k), recall_at_k(run, k)) for k in range(1, max_k + 1))
    return CurveSeries(points=points, kind=CurveKind.RECALL_AT_K)


def _as_split(u_correct, u_incorrect) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.asarray(u_correct, dtype=np.float64),
        np.asarray(u_incorrect, dtype=np.float64),
    )


def roc_curve(
    u_correct,
    u_incorrect,
    convention: RocConvention = RocConvention.STANDARD,
) -> CurveSeries:
    """ROC staircase over all distinct uncertainty thresholds.

    STANDARD plots TPR vs FPR with FPR normalized by the incorrect count;
    PAPER_LITERAL normalizes by the accepted count of both classes instead
    (a false-discovery-rate-like ratio), for comparison.
    """
    u_c, u_i = _as_split(u_correct, u_incorrect)
    if u_c.size == 0 or u_i.size == 0:
        raise DegenerateClass("ROC needs at least one correct and one incorrect prediction")
    thresholds = np.unique(np.concatenate([u_c, u_i]))
    tp = np.searchsorted(np.sort(u_c), thresholds, side="right")
    fp = np.searchsorted(np.sort(u_i), thresholds, side="right")
    tpr = tp / u_c.size
    if convention is RocConvention.STANDARD:
        fpr = fp / u_i.size
        pts = [(0.0, 0.0)]  # lambda = -inf sentinel
        pts += list(zip(fpr, tpr))
        return CurveSeries(points=tuple(pts), kind=CurveKind.ROC)
    denom = tp + fp
    keep = denom > 0
    pts = list(zip(fp[keep] / denom[keep], tpr[keep]))
    return CurveSeries(points=tuple(pts), kind=CurveKind.PAPER_ROC)


def auroc(curve: CurveSeries) -> float:
    """Trapezoidal area under the ROC curve, in percent.

    For the STANDARD convention this equals the probability that an
    incorrect prediction carries greater uncertainty than a correct one,
    with ties counted half.
    """
    if curve.kind not in (CurveKind.ROC, CurveKind.PAPER_ROC):
        raise ValueError("auroc requires a ROC curve")
    x, y = curve.xy()
    return 100.0 * float(np.trapezoid(y, x))


def error_rejection_curve(u_correct, u_incorrect) -> CurveSeries:
    """Remaining error while progressively rejecting the most uncertain
    predictions; ends at (1.0, 0.0) when everything is rejected."""
    u_c, u_i = _as_split(u_correct, u_incorrect)
    n = u_c.size + u_i.size
    if n < 1:
        raise DegenerateClass("error-rejection curve needs at least one prediction")
    thresholds = np.unique(np.concatenate([u_c, u_i]))[::-1]  # descending sweep
    sc, si = np.sort(u_c), np.sort(u_i)
    points = []
    for lam in thresholds:
        acc_c = int(np.searchsorted(sc, lam, side="right"))
        acc_i = int(np.searchsorted(si, lam, side="right"))
        rejection = (n - acc_c - acc_i) / n
        error = acc_i / (acc_c + acc_i)
        points.append((rejection, error))
    points.append((1.0, 0.0))
    return CurveSeries(points=tuple(points), kind=CurveKind.ERROR_REJECTION)


def auer(curve: CurveSeries) -> float:
    """Trapezoidal area under the error-vs-rejection curve; 0 is perfect."""
    if curve.kind is not CurveKind.ERROR_REJECTION:
        raise ValueError("auer requires an error-rejection curve")
    x, y = curve.xy()
    return float(np.trapezoid(y, x))


def precision_rejection_inputs(run: LabeledRun) -> tuple[np.ndarray, np.ndarray, int]:
    u = np.array([p.uncertainty for p in run.predictions], dtype=np.float64)
    correct = np.array([p.correct for p in run.predictions], dtype=bool)
    matchable = sum(p.has_match for p in run.predictions)
    return u, correct, matchable


def precision_recall_curve(run: LabeledRun) -> CurveSeries:
    """Precision/recall over the uncertainty-acceptance sweep.

    declared(lambda) = predictions with U <= lambda; precision is the
    correct fraction of declared, recall the correct-declared fraction of
    matchable queries.
    """
    u, correct, matchable = precision_rejection_inputs(run)
    if matchable == 0:
        raise NoMatchableQueries("precision-recall needs at least one matchable query")
    points = []
    for lam in np.unique(u):
        declared = u <= lam
        n_declared = int(np.count_nonzero(declared))
        if n_declared == 0:
            continue
        n_correct = int(np.count_nonzero(declared & correct))
        points.append((n_correct / matchable, n_correct / n_declared))
    return CurveSeries(points=tuple(points), kind=CurveKind.PRECISION_RECALL)
