import numpy as np
import pytest

from uapr.errors import EmptyVisibleSet, MethodDataMismatch
from uapr.retrieval import (
    Decision,
    GroundTruthContext,
    QueryBundle,
    predict,
    rank,
    threshold_decision,
)
from uapr.types import (
    DescriptorSet,
    ErrorType,
    Method,
    MethodConfig,
    UncertaintySource,
)

from conftest import make_set


def _q(vec, variance=None, pose=(0.0, 0.0, 0.0), members=None):
    m = np.atleast_2d(vec) if members is None else np.asarray(members, dtype=float)
    return QueryBundle(
        members=m.astype(float),
        variance=None if variance is None else np.asarray(variance, dtype=float),
        pose=np.asarray(pose, dtype=float),
    )


class TestRank:
    def test_standard_dominant_alignment(self):
        db = make_set([[1.0, 0.0], [0.0, 1.0]])
        out = rank(_q([0.9, 0.1]), db, np.arange(2), MethodConfig(Method.STANDARD))
        assert out.indices[0] == 0

    def test_ensemble_tie_broken_by_lower_index(self):
        # both entries have member cosines {0.8, 1.0} -> equal means; the
        # scores are computed from identical arithmetic, so the tie is exact
        members = np.array(
            [
                [[0.8, 0.6], [1.0, 0.0]],   # member 0 of (d1, d2)
                [[1.0, 0.0], [0.8, 0.6]],   # member 1 of (d1, d2)
            ]
        )
        db = make_set(None, members=members)
        query = _q(None, members=[[1.0, 0.0], [1.0, 0.0]])
        out = rank(query, db, np.arange(2), MethodConfig(Method.ENSEMBLE, top_k=2))
        assert out.means[0] == out.means[1]
        assert out.indices[0] == 0

    def test_empty_visible_set(self):
        db = make_set([[1.0, 0.0]])
        with pytest.raises(EmptyVisibleSet):
            rank(_q([1.0, 0.0]), db, np.array([], dtype=int), MethodConfig(Method.STANDARD))

    def test_method_data_mismatch(self):
        db = make_set([[1.0, 0.0]])  # plain set, no variances
        with pytest.raises(MethodDataMismatch):
            rank(_q([1.0, 0.0]), db, np.arange(1), MethodConfig(Method.PPE))

    def test_scores_non_increasing_and_indices_unique(self):
        rng = np.random.default_rng(4)
        db = make_set(rng.standard_normal((20, 6)))
        out = rank(_q(rng.standard_normal(6)), db, np.arange(20), MethodConfig(Method.STANDARD, top_k=10))
        assert np.all(np.diff(out.means) <= 0.0)
        assert len(set(out.indices.tolist())) == len(out.indices)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(6)
        vecs = rng.standard_normal((15, 5))
        q = _q(rng.standard_normal(5))
        base = rank(q, make_set(vecs), np.arange(15), MethodConfig(Method.STANDARD, top_k=3))
        perm = rng.permutation(15)
        permuted = rank(q, make_set(vecs[perm]), np.arange(15), MethodConfig(Method.STANDARD, top_k=3))
        # map permuted-set positions back to original identities
        assert [perm[i] for i in permuted.indices] == list(base.indices)
        np.testing.assert_array_equal(permuted.means, base.means)


class TestPredict:
    def _ctx(self, radius=25.0, pose=(0.0, 0.0, 0.0)):
        return GroundTruthContext(query_pose=np.asarray(pose, dtype=float), revisit_radius=radius)

    def test_standard_uncertainty_is_negative_best(self):
        db = make_set([[1.0, 0.0], [0.0, 1.0]], poses=[[0, 0, 0], [100, 0, 0]])
        p = predict(_q([1.0, 0.0]), db, np.arange(2), MethodConfig(Method.STANDARD), self._ctx())
        assert p.uncertainty == -p.score
        assert p.correct and p.error_type is ErrorType.NONE

    def test_stun_uncertainty_is_query_only(self):
        db = make_set(
            [[1.0, 0.0], [0.0, 1.0]],
            poses=[[0, 0, 0], [100, 0, 0]],
            variances=np.full((2, 2), 0.5),
        )
        cfg = MethodConfig(Method.STUN)
        p1 = predict(_q([1.0, 0.0], variance=[0.2, 0.3]), db, np.arange(2), cfg, self._ctx())
        p2 = predict(_q([0.0, 1.0], variance=[0.2, 0.3]), db, np.arange(2), cfg,
                     self._ctx(pose=(100.0, 0.0, 0.0)))
        assert p1.uncertainty == pytest.approx(0.5)
        assert p2.uncertainty == pytest.approx(0.5)
        assert p1.predicted_index != p2.predicted_index

    def test_ensemble_similarity_variance_uncertainty(self):
        members = np.array([[[0.8, 0.6]], [[1.0, 0.0]]])  # top-1 member scores {0.8, 1.0}
        db = make_set(None, members=members)
        cfg = MethodConfig(Method.ENSEMBLE, uncertainty_source=UncertaintySource.SIMILARITY_VARIANCE)
        p = predict(_q(None, members=[[1.0, 0.0], [1.0, 0.0]]), db, np.arange(1), cfg, self._ctx())
        # descriptor payloads are float32, so the 0.8 member is quantized
        assert p.uncertainty == pytest.approx(0.01, abs=1e-7)

    def test_monotone_transform_preserves_uncertainty_order(self):
        rng = np.random.default_rng(8)
        db = make_set(rng.standard_normal((30, 4)), poses=rng.uniform(0, 500, (30, 3)))
        cfg = MethodConfig(Method.STANDARD)
        preds = [
            predict(_q(rng.standard_normal(4), pose=rng.uniform(0, 500, 3)), db,
                    np.arange(30), cfg, self._ctx())
            for _ in range(10)
        ]
        u = np.array([p.uncertainty for p in preds])
        for transform in (np.exp, lambda x: 3.0 * x + 7.0):
            t = transform(u)
            for i in range(len(u)):
                for j in range(len(u)):
                    assert np.sign(u[i] - u[j]) == np.sign(t[i] - t[j])


class TestThresholdDecision:
    def test_below(self):
        assert threshold_decision(0.4, 0.5) is Decision.ACCEPT

    def test_above(self):
        assert threshold_decision(0.6, 0.5) is Decision.REJECT

    def test_boundary_inclusive(self):
        assert threshold_decision(0.5, 0.5) is Decision.ACCEPT
