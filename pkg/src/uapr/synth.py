"""Synthetic descriptor worlds with known ground truth, plus brute-force
oracles used to cross-check the engine at desk scale.

The oracles deliberately avoid the engine's kernels: they re-implement
scoring, visibility, matching, and error typing with naive Python loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateClass, InvalidSpec
from .protocol import LabeledRun, Mode, ProtocolConfig, RunCounts
from .types import (
    DescriptorSet,
    ErrorType,
    Method,
    MethodConfig,
    MlsConvention,
    Prediction,
    UncertaintySource,
)

NOVEL_PLACE = -1


@dataclass(frozen=True)
class WorldSpec:
    """Recipe for a deterministic synthetic world.

    Latent places are unit vectors; every observation is the latent plus
    isotropic Gaussian noise, renormalized.  Distinct places are spaced
    place_spacing_factor revisit radii apart, same-place observations are
    jittered within the radius.
    """

    num_places: int
    dim: int
    num_queries: int
    noise_sigma: float = 0.0
    novel_fraction: float = 0.0
    member_count: int = 1
    with_variances: bool = False
    seed: int = 0
    revisit_radius: float = 25.0
    place_spacing_factor: float = 10.0
    session_dt: float = 30.0

    def __post_init__(self):
        if self.num_places < 2:
            raise InvalidSpec("need at least 2 places")
        if self.dim < 1 or self.num_queries < 1 or self.member_count < 1:
            raise InvalidSpec("dim, num_queries and member_count must be >= 1")
        if self.noise_sigma < 0.0:
            raise InvalidSpec("noise_sigma must be non-negative")
        if not 0.0 <= self.novel_fraction <= 1.0:
            raise InvalidSpec("novel_fraction must lie in [0, 1]")
        if self.with_variances and self.member_count > 1:
            raise InvalidSpec("probabilistic sets are single-member")
        if self.revisit_radius <= 0.0 or self.place_spacing_factor < 2.0:
            raise InvalidSpec("invalid geometry parameters")

    @property
    def spacing(self) -> float:
        return self.place_spacing_factor * self.revisit_radius

    def place_pose(self, place_id: int) -> np.ndarray:
        return np.array([(place_id + 1) * self.spacing, 0.0, 0.0])


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _observe(rng, latent: np.ndarray, sigma: float) -> np.ndarray:
    return _unit(latent + sigma * rng.standard_normal(latent.size))


def _jitter(rng, spec: WorldSpec) -> np.ndarray:
    off = rng.uniform(-1.0, 1.0, 3) * (0.3 * spec.revisit_radius / math.sqrt(3.0))
    return off


def _variances(rng, spec: WorldSpec, n: int) -> np.ndarray:
    base = 0.01 + spec.noise_sigma**2
    return base * (0.5 + rng.random((n, spec.dim)))


def generate(spec: WorldSpec) -> tuple[DescriptorSet, DescriptorSet, np.ndarray]:
    """Batch-mode world: (queries, database, truth).

    The database holds one entry per place; truth[i] is the queried place id
    or NOVEL_PLACE for queries without any true positive.
    """
    rng = np.random.default_rng(spec.seed)
    latents = np.stack([_unit(v) for v in rng.standard_normal((spec.num_places, spec.dim))])

    db_members = np.stack(
        [
            [_observe(rng, latents[p], spec.noise_sigma) for p in range(spec.num_places)]
            for _ in range(spec.member_count)
        ]
    )
    db_poses = np.stack([spec.place_pose(p) for p in range(spec.num_places)])
    db_ts = np.arange(spec.num_places, dtype=np.float64)

    truth = rng.integers(0, spec.num_places, spec.num_queries)
    n_novel = round(spec.novel_fraction * spec.num_queries)
    novel_at = rng.permutation(spec.num_queries)[:n_novel]
    truth[novel_at] = NOVEL_PLACE

    q_members = np.empty((spec.member_count, spec.num_queries, spec.dim))
    q_poses = np.empty((spec.num_queries, 3))
    novel_counter = 0
    for i, place in enumerate(truth):
        if place == NOVEL_PLACE:
            latent = _unit(rng.standard_normal(spec.dim))
            pose = spec.place_pose(spec.num_places + novel_counter)
            novel_counter += 1
        else:
            latent = latents[place]
            pose = spec.place_pose(int(place)) + _jitter(rng, spec)
        for m in range(spec.member_count):
            q_members[m, i] = _observe(rng, latent, spec.noise_sigma)
        q_poses[i] = pose
    q_ts = np.arange(spec.num_queries, dtype=np.float64)

    db_var = q_var = None
    if spec.with_variances:
        db_var = _variances(rng, spec, spec.num_places)
        q_var = _variances(rng, spec, spec.num_queries)

    database = DescriptorSet(
        members=db_members, poses=db_poses, timestamps=db_ts, variances=db_var,
        label="synth-database",
    )
    queries = DescriptorSet(
        members=q_members, poses=q_poses, timestamps=q_ts, variances=q_var,
        label="synth-queries",
    )
    return queries, database, truth


def generate_session(spec: WorldSpec) -> tuple[DescriptorSet, np.ndarray]:
    """Session-mode world: one timestamped run revisiting a pool of places.

    truth[i] is the place id of step i.  With the default session_dt of 30 s
    and a 90 s exclusion window, revisits at a 3-step gap land exactly on
    the inclusive visibility boundary.
    """
    rng = np.random.default_rng(spec.seed)
    latents = np.stack([_unit(v) for v in rng.standard_normal((spec.num_places, spec.dim))])
    truth = rng.integers(0, spec.num_places, spec.num_queries)

    members = np.empty((spec.member_count, spec.num_queries, spec.dim))
    poses = np.empty((spec.num_queries, 3))
    for i, place in enumerate(truth):
        for m in range(spec.member_count):
            members[m, i] = _observe(rng, latents[place], spec.noise_sigma)
        poses[i] = spec.place_pose(int(place)) + _jitter(rng, spec)
    timestamps = np.arange(spec.num_queries, dtype=np.float64) * spec.session_dt
    variances = _variances(rng, spec, spec.num_queries) if spec.with_variances else None

    run = DescriptorSet(
        members=members, poses=poses, timestamps=timestamps, variances=variances,
        label="synth-session",
    )
    return run, truth


# -- oracles ------------------------------------------------------------------


def oracle_auroc(u_correct, u_incorrect) -> float:
    """Exhaustive pairwise AuROC: P(U_incorrect > U_correct), ties half."""
    u_c = np.asarray(u_correct, dtype=np.float64)
    u_i = np.asarray(u_incorrect, dtype=np.float64)
    if u_c.size == 0 or u_i.size == 0:
        raise DegenerateClass("both uncertainty populations must be non-empty")
    greater = np.count_nonzero(u_i[:, np.newaxis] > u_c[np.newaxis, :])
    ties = np.count_nonzero(u_i[:, np.newaxis] == u_c[np.newaxis, :])
    return 100.0 * (greater + 0.5 * ties) / (u_c.size * u_i.size)


def _py_cos(a, b) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    return dot / (na * nb)


def _py_mls(qm, qv, dm, dv, literal: bool) -> float:
    acc = 0.0
    for mq, vq, mn, vn in zip(qm, qv, dm, dv):
        sv = vq + vn
        d = (mq + mn) if literal else (mq - mn)
        acc += d * d / sv + math.log(sv)
    return -0.5 * acc - 0.5 * len(qm) * math.log(2.0 * math.pi)


def _oracle_scores(qset, dbset, qi, visible, method: MethodConfig):
    """(ranking score, score variance) per visible entry, naive loops."""
    out = []
    for j in visible:
        if method.method in (Method.STANDARD, Method.STUN):
            s = _py_cos(qset.members[0, qi].tolist(), dbset.members[0, j].tolist())
            out.append((s, 0.0))
        elif method.method is Method.PPE:
            s = _py_mls(
                qset.members[0, qi].tolist(),
                qset.variances[qi].tolist(),
                dbset.members[0, j].tolist(),
                dbset.variances[j].tolist(),
                method.mls_convention is MlsConvention.PAPER_LITERAL,
            )
            out.append((s, 0.0))
        else:
            ss = [
                _py_cos(qset.members[m, qi].tolist(), dbset.members[m, j].tolist())
                for m in range(qset.member_count)
            ]
            mean = sum(ss) / len(ss)
            var = sum((s - mean) ** 2 for s in ss) / len(ss)
            out.append((mean, var))
    return out


def _oracle_predict(qset, dbset, qi, visible, method, radius) -> Prediction:
    scores = _oracle_scores(qset, dbset, qi, visible, method)
    ranked = sorted(zip(visible, scores), key=lambda t: (-t[1][0], t[0]))
    top = ranked[: method.top_k]
    best_j, (best_s, best_v) = top[0]
    dists = {
        j: math.dist(qset.poses[qi].tolist(), dbset.poses[j].tolist()) for j in visible
    }
    has_match = any(d <= radius for d in dists.values())
    hits = tuple(dists[j] <= radius for j, _ in top)
    correct = has_match and hits[0]
    if correct:
        etype = ErrorType.NONE
    elif has_match:
        etype = ErrorType.INCORRECT_MATCH
    else:
        etype = ErrorType.NO_MATCH
    if method.method is Method.STUN:
        unc = float(sum(qset.variances[qi].tolist()))
    elif (
        method.method in (Method.DROPOUT, Method.ENSEMBLE)
        and method.uncertainty_source is UncertaintySource.SIMILARITY_VARIANCE
    ):
        unc = best_v
    else:
        unc = -best_s
    return Prediction(
        query_index=qi,
        predicted_index=int(best_j),
        score=best_s,
        uncertainty=unc,
        correct=correct,
        error_type=etype,
        has_match=has_match,
        candidate_indices=tuple(int(j) for j, _ in top),
        candidate_hits=hits,
    )


def oracle_label(
    config: ProtocolConfig,
    method: MethodConfig,
    queries: DescriptorSet | None = None,
    database: DescriptorSet | None = None,
    run: DescriptorSet | None = None,
) -> LabeledRun:
    """Independent exhaustive labeler for toy-scale inputs (N <= 200).

    Batch mode takes queries+database; session mode takes run.  Used only
    to cross-check the protocol module.
    """
    method = replace(method, top_k=max(method.top_k, config.top_k))
    if config.mode is Mode.BATCH:
        assert queries is not None and database is not None
        jobs = [(i, list(range(database.count))) for i in range(queries.count)]
        qset, dbset = queries, database
    else:
        assert run is not None
        qset = dbset = run
        jobs = []
        for i in range(run.count):
            t = float(run.timestamps[i])
            vis = [
                j
                for j in range(run.count)
                if run.timestamps[j] <= t - config.exclusion_window
            ]
            jobs.append((i, vis))
    predictions = []
    skipped = 0
    for qi, visible in jobs:
        if not visible:
            skipped += 1
            continue
        predictions.append(
            _oracle_predict(qset, dbset, qi, visible, method, config.revisit_radius)
        )
    counts = RunCounts(
        total=len(predictions) + skipped,
        with_match=sum(p.has_match for p in predictions),
        correct=sum(p.correct for p in predictions),
        incorrect_match=sum(p.error_type is ErrorType.INCORRECT_MATCH for p in predictions),
        no_match=sum(p.error_type is ErrorType.NO_MATCH for p in predictions),
        skipped_empty_visible=skipped,
    )
    return LabeledRun(predictions=tuple(predictions), counts=counts)
