"""Shared domain types: descriptors, descriptor sets, predictions, configs.

All types are immutable after validation and safe to share across workers.
Descriptor payloads are stored as float32 (the on-disk precision); poses and
timestamps are float64.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DimensionMismatch,
    NonFiniteValue,
    NonPositiveVariance,
    TimestampOrderViolation,
)


@dataclass(frozen=True)
class Descriptor:
    """A single place embedding of dimension L."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 1:
            raise DimensionMismatch("descriptor must be a non-empty 1-D vector")
        if not np.all(np.isfinite(v)):
            raise NonFiniteValue("descriptor contains NaN or Inf")
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class ProbabilisticDescriptor:
    """Gaussian place embedding: per-dimension mean and variance (sigma^2)."""

    mean: np.ndarray
    variance: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mean, dtype=np.float64)
        v = np.asarray(self.variance, dtype=np.float64)
        if m.ndim != 1 or m.size < 1:
            raise DimensionMismatch("mean must be a non-empty 1-D vector")
        if v.shape != m.shape:
            raise DimensionMismatch(
                f"mean/variance length mismatch: {m.shape} vs {v.shape}"
            )
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(v))):
            raise NonFiniteValue("probabilistic descriptor contains NaN or Inf")
        if np.any(v <= 0.0):
            raise NonPositiveVariance("variance must be strictly positive")
        object.__setattr__(self, "mean", m)
        object.__setattr__(self, "variance", v)

    @property
    def dim(self) -> int:
        return self.mean.size


class SetKind(enum.Enum):
    PLAIN = "plain"
    PROBABILISTIC = "probabilistic"
    MULTI_MEMBER = "multi_member"


@dataclass(frozen=True)
class DescriptorSet:
    """N descriptors with poses/timestamps, optionally M member variants.

    members has shape (M, N, L).  Exactly one of three kinds:
    plain (M=1, no variances), probabilistic (M=1, variances present),
    multi-member (M>1, no variances).
    """

    members: np.ndarray                      # (M, N, L) float32
    poses: np.ndarray                        # (N, 3) float64, meters
    timestamps: np.ndarray                   # (N,) float64, seconds
    variances: np.ndarray | None = None      # (N, L) float32, sigma^2
    has_poses: bool = True
    has_timestamps: bool = True
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.members, dtype=np.float32)
        if m.ndim == 2:
            m = m[np.newaxis, :, :]
        object.__setattr__(self, "members", m)
        object.__setattr__(
            self, "poses", np.asarray(self.poses, dtype=np.float64)
        )
        object.__setattr__(
            self, "timestamps", np.asarray(self.timestamps, dtype=np.float64)
        )
        if self.variances is not None:
            object.__setattr__(
                self, "variances", np.asarray(self.variances, dtype=np.float32)
            )
        for arr in (self.members, self.poses, self.timestamps, self.variances):
            if arr is not None:
                arr.setflags(write=False)

    @classmethod
    def plain(cls, descriptors, poses=None, timestamps=None, label="") -> "DescriptorSet":
        """Builds an M=1 set from an (N, L) array; fills absent poses/timestamps
        with zeros and flags them absent."""
        d = np.asarray(descriptors, dtype=np.float32)
        n = d.shape[0]
        has_poses = poses is not None
        has_timestamps = timestamps is not None
        return cls(
            members=d[np.newaxis, :, :],
            poses=np.asarray(poses, dtype=np.float64) if has_poses else np.zeros((n, 3)),
            timestamps=np.asarray(timestamps, dtype=np.float64) if has_timestamps else np.zeros(n),
            has_poses=has_poses,
            has_timestamps=has_timestamps,
            label=label,
        )

    @property
    def member_count(self) -> int:
        return self.members.shape[0]

    @property
    def count(self) -> int:
        return self.members.shape[1]

    @property
    def dim(self) -> int:
        return self.members.shape[2]

    @property
    def kind(self) -> SetKind:
        if self.member_count > 1:
            return SetKind.MULTI_MEMBER
        return SetKind.PROBABILISTIC if self.variances is not None else SetKind.PLAIN

    def select_members(self, indices) -> "DescriptorSet":
        """Sub-set keeping only the given member variants (e.g. a single model
        out of an ensemble)."""
        idx = np.atleast_1d(np.asarray(indices, dtype=int))
        return replace(self, members=self.members[idx].copy())


def validate_set(dataset: DescriptorSet, session: bool = False) -> DescriptorSet:
    """Checks every type invariant; returns the set unchanged on success.

    With session=True also requires timestamps to be present and monotone
    non-decreasing.
    """
    m = dataset.members
    if m.ndim != 3:
        raise DimensionMismatch(f"members must be (M, N, L), got shape {m.shape}")
    M, N, L = m.shape
    if M < 1 or N < 1 or L < 1:
        raise DimensionMismatch(f"empty axis in members shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteValue("descriptor payload contains NaN or Inf")
    if dataset.poses.shape != (N, 3):
        raise DimensionMismatch(
            f"poses shape {dataset.poses.shape} does not match ({N}, 3)"
        )
    if not np.all(np.isfinite(dataset.poses)):
        raise NonFiniteValue("poses contain NaN or Inf")
    if dataset.timestamps.shape != (N,):
        raise DimensionMismatch(
            f"timestamps shape {dataset.timestamps.shape} does not match ({N},)"
        )
    if not np.all(np.isfinite(dataset.timestamps)):
        raise NonFiniteValue("timestamps contain NaN or Inf")
    if dataset.variances is not None:
        if M > 1:
            raise DimensionMismatch("variances are only valid on M=1 sets")
        if dataset.variances.shape != (N, L):
            raise DimensionMismatch(
                f"variances shape {dataset.variances.shape} does not match ({N}, {L})"
            )
        if not np.all(np.isfinite(dataset.variances)):
            raise NonFiniteValue("variances contain NaN or Inf")
        if np.any(dataset.variances <= 0.0):
            raise NonPositiveVariance("variances must be strictly positive")
    if session:
        if not dataset.has_timestamps:
            raise TimestampOrderViolation("session set lacks timestamps")
        if np.any(np.diff(dataset.timestamps) < 0.0):
            raise TimestampOrderViolation("timestamps must be monotone non-decreasing")
    return dataset


class ErrorType(enum.Enum):
    NONE = "none"
    INCORRECT_MATCH = "incorrect_match"
    NO_MATCH = "no_match"


@dataclass(frozen=True)
class Prediction:
    """One query's top match, uncertainty, and correctness labels.

    candidate_indices/candidate_hits keep the full top-K list so Recall@K
    stays recomputable after the fact.
    """

    query_index: int
    predicted_index: int
    score: float
    uncertainty: float
    correct: bool
    error_type: ErrorType
    has_match: bool
    candidate_indices: tuple[int, ...] = field(default_factory=tuple)
    candidate_hits: tuple[bool, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.correct != (self.error_type is ErrorType.NONE):
            raise ValueError("correct must hold exactly when error_type is NONE")
        if self.error_type is ErrorType.NO_MATCH and self.has_match:
            raise ValueError("NO_MATCH prediction cannot have has_match=True")
        if self.error_type is ErrorType.INCORRECT_MATCH and not self.has_match:
            raise ValueError("INCORRECT_MATCH prediction requires has_match=True")


class Method(enum.Enum):
    STANDARD = "standard"
    PPE = "ppe"
    STUN = "stun"
    DROPOUT = "dropout"
    ENSEMBLE = "ensemble"


class UncertaintySource(enum.Enum):
    NEGATIVE_MEAN_SIMILARITY = "negative_mean_similarity"
    SIMILARITY_VARIANCE = "similarity_variance"


class MlsConvention(enum.Enum):
    DIFFERENCE = "difference"
    PAPER_LITERAL = "paper_literal"


@dataclass(frozen=True)
class MethodConfig:
    method: Method
    top_k: int = 1
    uncertainty_source: UncertaintySource = UncertaintySource.NEGATIVE_MEAN_SIMILARITY
    mls_convention: MlsConvention = MlsConvention.DIFFERENCE

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be a positive integer")
