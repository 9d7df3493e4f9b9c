"""Exception hierarchy for the evaluation engine."""


class UaprError(Exception):
    """Base class for all engine errors."""


# -- descriptor set validation ------------------------------------------------

class DimensionMismatch(UaprError):
    pass


class NonFiniteValue(UaprError):
    pass


class NonPositiveVariance(UaprError):
    pass


class TimestampOrderViolation(UaprError):
    pass


# -- scoring ------------------------------------------------------------------

class ZeroVector(UaprError):
    pass


class MemberCountMismatch(UaprError):
    pass


# -- retrieval / protocol -----------------------------------------------------

class EmptyVisibleSet(UaprError):
    pass


class MethodDataMismatch(UaprError):
    pass


class MissingTimestamps(UaprError):
    pass


# -- metrics ------------------------------------------------------------------

class NoMatchableQueries(UaprError):
    pass


class DegenerateClass(UaprError):
    """One of the correct/incorrect uncertainty populations is empty; the
    metric is undefined and is reported as absent, never NaN."""


# -- synthetic worlds ---------------------------------------------------------

class InvalidSpec(UaprError):
    pass


# -- file container -----------------------------------------------------------

class BadMagic(UaprError):
    pass


class VersionUnsupported(UaprError):
    pass


class TruncatedPayload(UaprError):
    pass


class ManifestMismatch(UaprError):
    pass


class IoFailure(UaprError):
    pass
