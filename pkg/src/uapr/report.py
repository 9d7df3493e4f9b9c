"""Evaluation report document: aggregation, serialization, reconstruction.

A report always carries the per-query records; every aggregate is
recomputable from them.  Undefined metrics (degenerate inputs) are stored
as null, never NaN.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import DegenerateClass, IoFailure, NoMatchableQueries
from .metrics import (
    CurveKind,
    CurveSeries,
    RocConvention,
    auer,
    auroc,
    error_rejection_curve,
    precision_recall_curve,
    recall_at_k,
    recall_at_k_curve,
    roc_curve,
)
from .protocol import LabeledRun, Mode, ProtocolConfig, RunCounts, split_by_error_type
from .types import ErrorType, Method, MethodConfig, MlsConvention, Prediction, UncertaintySource

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ReportDocument:
    method: dict
    protocol: dict
    counts: dict
    predictions: list[dict]
    metrics: dict
    curves: list[dict]
    timing_seconds: float


def _prediction_record(p: Prediction) -> dict:
    return {
        "query_index": p.query_index,
        "predicted_index": p.predicted_index,
        "score": p.score,
        "uncertainty": p.uncertainty,
        "correct": p.correct,
        "error_type": p.error_type.value,
        "has_match": p.has_match,
        "candidate_indices": list(p.candidate_indices),
        "candidate_hits": list(p.candidate_hits),
    }


def prediction_from_record(rec: dict) -> Prediction:
    return Prediction(
        query_index=int(rec["query_index"]),
        predicted_index=int(rec["predicted_index"]),
        score=float(rec["score"]),
        uncertainty=float(rec["uncertainty"]),
        correct=bool(rec["correct"]),
        error_type=ErrorType(rec["error_type"]),
        has_match=bool(rec["has_match"]),
        candidate_indices=tuple(int(i) for i in rec["candidate_indices"]),
        candidate_hits=tuple(bool(h) for h in rec["candidate_hits"]),
    )


def run_from_report(report: ReportDocument) -> LabeledRun:
    predictions = tuple(prediction_from_record(r) for r in report.predictions)
    return LabeledRun(predictions=predictions, counts=RunCounts(**report.counts))


def _curve_record(curve: CurveSeries) -> dict:
    return {"kind": curve.kind.value, "points": [list(p) for p in curve.points]}


def curve_from_record(rec: dict) -> CurveSeries:
    return CurveSeries(
        points=tuple((float(x), float(y)) for x, y in rec["points"]),
        kind=CurveKind(rec["kind"]),
    )


def method_config_record(config: MethodConfig) -> dict:
    return {
        "method": config.method.value,
        "top_k": config.top_k,
        "uncertainty_source": config.uncertainty_source.value,
        "mls_convention": config.mls_convention.value,
    }


def method_config_from_record(rec: dict) -> MethodConfig:
    return MethodConfig(
        method=Method(rec["method"]),
        top_k=int(rec["top_k"]),
        uncertainty_source=UncertaintySource(rec["uncertainty_source"]),
        mls_convention=MlsConvention(rec["mls_convention"]),
    )


def compute_aggregates(run: LabeledRun, max_k: int) -> tuple[dict, list[CurveSeries]]:
    """Every aggregate metric plus every curve computable from the run;
    degenerate metrics come back as None."""
    u_c, u_i = run.uncertainty_split()
    metrics: dict = {
        "recall_at_k": {},
        "auroc_standard": None,
        "auroc_paper_literal": None,
        "auer": None,
    }
    curves: list[CurveSeries] = []
    try:
        for k in range(1, max_k + 1):
            metrics["recall_at_k"][str(k)] = recall_at_k(run, k)
        curves.append(recall_at_k_curve(run, max_k))
    except NoMatchableQueries:
        metrics["recall_at_k"] = None
    try:
        roc = roc_curve(u_c, u_i, RocConvention.STANDARD)
        metrics["auroc_standard"] = auroc(roc)
        curves.append(roc)
        paper = roc_curve(u_c, u_i, RocConvention.PAPER_LITERAL)
        metrics["auroc_paper_literal"] = auroc(paper)
        curves.append(paper)
    except DegenerateClass:
        pass
    if len(run.predictions) > 0:
        er = error_rejection_curve(u_c, u_i)
        metrics["auer"] = auer(er)
        curves.append(er)
    try:
        curves.append(precision_recall_curve(run))
    except NoMatchableQueries:
        pass
    return metrics, curves


def build_report(
    run: LabeledRun,
    method: MethodConfig,
    protocol: ProtocolConfig,
    timing_seconds: float = 0.0,
) -> ReportDocument:
    max_k = max(method.top_k, protocol.top_k)
    metrics, curves = compute_aggregates(run, max_k)
    return ReportDocument(
        method=method_config_record(method),
        protocol={
            "mode": protocol.mode.value,
            "revisit_radius": protocol.revisit_radius,
            "exclusion_window": protocol.exclusion_window,
            "top_k": protocol.top_k,
        },
        counts=asdict(run.counts),
        predictions=[_prediction_record(p) for p in run.predictions],
        metrics=metrics,
        curves=[_curve_record(c) for c in curves],
        timing_seconds=timing_seconds,
    )


def write_report(report: ReportDocument, path, fmt: str = "structured") -> None:
    """structured: one self-contained JSON document.
    csv-curves: path is a directory; one x,y CSV per curve series."""
    try:
        if fmt == "structured":
            doc = {"schema_version": SCHEMA_VERSION, **asdict(report)}
            Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        elif fmt == "csv-curves":
            out = Path(path)
            out.mkdir(parents=True, exist_ok=True)
            for rec in report.curves:
                lines = ["x,y"]
                lines += [f"{float(x)!r},{float(y)!r}" for x, y in rec["points"]]
                (out / f"{rec['kind']}.csv").write_text("\n".join(lines) + "\n")
        else:
            raise ValueError(f"unknown report format: {fmt}")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def read_report(path) -> ReportDocument:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise IoFailure(f"cannot read report {path}: {exc}") from exc
    doc.pop("schema_version", None)
    return ReportDocument(**doc)


def split_reports(
    report: ReportDocument, timing_seconds: float = 0.0
) -> tuple[ReportDocument, ReportDocument]:
    """Per-error-type sub-reports (correct + incorrect-match, correct +
    no-match) rebuilt from a report's per-query records."""
    run = run_from_report(report)
    method = method_config_from_record(report.method)
    protocol = ProtocolConfig(
        mode=Mode(report.protocol["mode"]),
        revisit_radius=float(report.protocol["revisit_radius"]),
        exclusion_window=float(report.protocol["exclusion_window"]),
        top_k=int(report.protocol["top_k"]),
    )
    im_run, nm_run = split_by_error_type(run)
    return (
        build_report(im_run, method, protocol, timing_seconds),
        build_report(nm_run, method, protocol, timing_seconds),
    )
