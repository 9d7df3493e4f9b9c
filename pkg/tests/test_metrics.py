import numpy as np
import pytest

from uapr.errors import DegenerateClass, NoMatchableQueries
from uapr.metrics import (
    CurveKind,
    CurveSeries,
    RocConvention,
    auer,
    auroc,
    error_rejection_curve,
    precision_recall_curve,
    recall_at_k,
    roc_curve,
)
from uapr.protocol import LabeledRun, RunCounts
from uapr.synth import oracle_auroc
from uapr.types import ErrorType, Prediction


def _pred(i, uncertainty, correct, has_match=True, hits=(True,)):
    etype = ErrorType.NONE if correct else (
        ErrorType.INCORRECT_MATCH if has_match else ErrorType.NO_MATCH
    )
    return Prediction(
        query_index=i, predicted_index=0, score=-uncertainty, uncertainty=uncertainty,
        correct=correct, error_type=etype, has_match=has_match,
        candidate_indices=tuple(range(len(hits))), candidate_hits=tuple(hits),
    )


def _run(preds):
    return LabeledRun(
        predictions=tuple(preds),
        counts=RunCounts(
            total=len(preds),
            with_match=sum(p.has_match for p in preds),
            correct=sum(p.correct for p in preds),
            incorrect_match=sum(p.error_type is ErrorType.INCORRECT_MATCH for p in preds),
            no_match=sum(p.error_type is ErrorType.NO_MATCH for p in preds),
            skipped_empty_visible=0,
        ),
    )


class TestRecallAtK:
    def test_all_top1_correct(self):
        run = _run([_pred(i, 0.1, True) for i in range(4)])
        assert recall_at_k(run, 1) == 100.0

    def test_no_candidate_within_radius(self):
        run = _run([_pred(i, 0.5, False, hits=(False, False)) for i in range(4)])
        assert recall_at_k(run, 1) == 0.0
        assert recall_at_k(run, 2) == 0.0

    def test_hand_enumerated_toy(self):
        # 5 queries: 3 hit at K=1, one more at K=2
        preds = [
            _pred(0, 0.1, True, hits=(True, True)),
            _pred(1, 0.2, True, hits=(True, False)),
            _pred(2, 0.3, True, hits=(True, False)),
            _pred(3, 0.4, False, hits=(False, True)),
            _pred(4, 0.5, False, hits=(False, False)),
        ]
        run = _run(preds)
        assert recall_at_k(run, 1) == 60.0
        assert recall_at_k(run, 2) == 80.0

    def test_non_decreasing_in_k(self):
        rng = np.random.default_rng(0)
        preds = []
        for i in range(30):
            hits = tuple(rng.random(5) < 0.3)
            preds.append(_pred(i, float(rng.random()), bool(hits[0]), hits=hits))
        run = _run(preds)
        values = [recall_at_k(run, k) for k in range(1, 6)]
        assert values == sorted(values)

    def test_no_matchable_queries(self):
        run = _run([_pred(0, 0.1, False, has_match=False, hits=(False,))])
        with pytest.raises(NoMatchableQueries):
            recall_at_k(run, 1)


class TestRocAuroc:
    def test_perfect_separation(self):
        curve = roc_curve([0.1, 0.2], [0.8, 0.9])
        assert auroc(curve) == 100.0

    def test_indistinguishable_singletons(self):
        assert auroc(roc_curve([0.5], [0.5])) == 50.0

    def test_pairwise_oracle_four_pairs(self):
        # pairs (0.3>0.1), (0.3<0.4), (0.9>0.1), (0.9>0.4): 3/4
        assert auroc(roc_curve([0.1, 0.4], [0.3, 0.9])) == pytest.approx(75.0, abs=1e-12)

    def test_same_distribution_statistical(self):
        rng = np.random.default_rng(123)
        u_c = rng.normal(size=1000)
        u_i = rng.normal(size=1000)
        assert auroc(roc_curve(u_c, u_i)) == pytest.approx(50.0, abs=5.0)

    def test_matches_pairwise_oracle_with_ties(self):
        rng = np.random.default_rng(77)
        for _ in range(20):
            # quantized draws force plenty of ties
            u_c = np.round(rng.random(rng.integers(1, 300)), 2)
            u_i = np.round(rng.random(rng.integers(1, 300)), 2)
            assert auroc(roc_curve(u_c, u_i)) == pytest.approx(
                oracle_auroc(u_c, u_i), abs=1e-9
            )

    def test_degenerate_class(self):
        with pytest.raises(DegenerateClass):
            roc_curve([], [0.1])
        with pytest.raises(DegenerateClass):
            roc_curve([0.1], [])

    def test_paper_literal_convention(self):
        # FPR denominator mixes both classes: |U_I <= l| / (|U_C <= l| + |U_I <= l|)
        curve = roc_curve([0.1, 0.4], [0.3, 0.9], RocConvention.PAPER_LITERAL)
        assert curve.kind is CurveKind.PAPER_ROC
        pts = dict()
        for x, y in curve.points:
            pts[(round(x, 6), round(y, 6))] = True
        assert (0.0, 0.5) in pts              # lambda=0.1: 0/(1+0)
        assert (0.5, 0.5) in pts              # lambda=0.3: 1/(1+1)
        assert (round(1 / 3, 6), 1.0) in pts  # lambda=0.4: 1/(2+1)


class TestErrorRejection:
    def test_no_incorrect_predictions(self):
        curve = error_rejection_curve([0.1, 0.5, 0.9], [])
        assert all(y == 0.0 for _, y in curve.points)

    def test_all_incorrect(self):
        curve = error_rejection_curve([], [0.2, 0.7])
        xs, ys = curve.xy()
        assert ys[0] == 1.0 and ys[-2] == 1.0  # until full rejection
        assert (xs[-1], ys[-1]) == (1.0, 0.0)

    def test_five_point_toy_curve(self):
        curve = error_rejection_curve([0.1, 0.3], [0.2, 0.9])
        expected = [
            (0.0, 0.5),
            (0.25, 1.0 / 3.0),
            (0.5, 0.5),
            (0.75, 0.0),
            (1.0, 0.0),
        ]
        assert len(curve.points) == 5
        for (x, y), (ex, ey) in zip(curve.points, expected):
            assert x == pytest.approx(ex, abs=1e-12)
            assert y == pytest.approx(ey, abs=1e-12)

    def test_matches_exhaustive_threshold_oracle(self):
        rng = np.random.default_rng(31)
        u_c = rng.random(20)
        u_i = rng.random(12)
        curve = error_rejection_curve(u_c, u_i)
        n = 32
        by_rejection = {round(x, 12): y for x, y in curve.points[:-1]}
        for lam in np.concatenate([u_c, u_i]):
            acc_c = np.sum(u_c <= lam)
            acc_i = np.sum(u_i <= lam)
            rej = round((n - acc_c - acc_i) / n, 12)
            assert by_rejection[rej] == pytest.approx(acc_i / (acc_c + acc_i), abs=1e-12)


class TestAuer:
    def test_all_correct(self):
        curve = error_rejection_curve([0.1, 0.2, 0.3], [])
        assert auer(curve) == 0.0

    def test_all_wrong_uninformative(self):
        curve = error_rejection_curve([], np.linspace(0.1, 0.9, 50))
        assert auer(curve) == pytest.approx(1.0, abs=0.05)

    def test_matches_fine_grid_integration(self):
        curve = error_rejection_curve([0.1, 0.3], [0.2, 0.9])
        xs, ys = curve.xy()
        grid = np.linspace(0.0, 1.0, 2_000_001)
        oracle = np.trapezoid(np.interp(grid, xs, ys), grid)
        assert auer(curve) == pytest.approx(oracle, abs=1e-9)

    def test_bounds(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            curve = error_rejection_curve(rng.random(10), rng.random(10))
            assert 0.0 <= auer(curve) <= 1.0
            assert all(0.0 <= y <= 1.0 for _, y in curve.points)


class TestPrecisionRecall:
    def test_all_correct(self):
        run = _run([_pred(i, 0.1 * i, True) for i in range(4)])
        curve = precision_recall_curve(run)
        assert curve.points[-1] == (1.0, 1.0)
        assert all(y == 1.0 for _, y in curve.points)

    def test_toy_run_matches_brute_force_sweep(self):
        rng = np.random.default_rng(2)
        preds = [_pred(i, float(rng.random()), bool(rng.random() < 0.5)) for i in range(6)]
        run = _run(preds)
        curve = precision_recall_curve(run)
        u = np.array([p.uncertainty for p in preds])
        correct = np.array([p.correct for p in preds])
        matchable = sum(p.has_match for p in preds)
        expected = []
        for lam in np.unique(u):
            declared = u <= lam
            nc = int(np.sum(declared & correct))
            expected.append((nc / matchable, nc / int(np.sum(declared))))
        assert list(curve.points) == [
            (pytest.approx(x), pytest.approx(y)) for x, y in expected
        ]

    def test_error_at_full_acceptance_equals_one_minus_recall1(self):
        rng = np.random.default_rng(21)
        preds = []
        for i in range(40):
            hit = bool(rng.random() < 0.6)
            preds.append(_pred(i, float(rng.random()), hit, hits=(hit,)))
        run = _run(preds)
        curve = error_rejection_curve(*run.uncertainty_split())
        error_full_acceptance = curve.points[0][1]
        assert error_full_acceptance == pytest.approx(
            1.0 - recall_at_k(run, 1) / 100.0, abs=1e-12
        )


class TestRankInvariance:
    def test_auroc_auer_invariant_under_monotone_transforms(self):
        rng = np.random.default_rng(55)
        u_c = rng.normal(size=300)
        u_i = rng.normal(loc=0.5, size=200)
        base_roc = auroc(roc_curve(u_c, u_i))
        base_er = auer(error_rejection_curve(u_c, u_i))
        for f in (np.exp, lambda x: 3.0 * x + 7.0):
            assert abs(auroc(roc_curve(f(u_c), f(u_i))) - base_roc) < 1e-12
            assert abs(auer(error_rejection_curve(f(u_c), f(u_i))) - base_er) < 1e-12


def test_curve_series_rejects_decreasing_x():
    with pytest.raises(ValueError):
        CurveSeries(points=((0.5, 0.0), (0.1, 1.0)), kind=CurveKind.ROC)
