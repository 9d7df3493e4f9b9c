"""Uncertainty-aware place recognition evaluation engine."""

from .kernels import BACKEND
from .types import (
    Descriptor,
    DescriptorSet,
    ErrorType,
    Method,
    MethodConfig,
    MlsConvention,
    Prediction,
    ProbabilisticDescriptor,
    SetKind,
    UncertaintySource,
    validate_set,
)
from .protocol import (
    LabeledRun,
    Mode,
    ProtocolConfig,
    run_batch,
    run_session,
    split_by_error_type,
)
from .container import read_descriptor_file, write_descriptor_file

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Descriptor",
    "DescriptorSet",
    "ErrorType",
    "LabeledRun",
    "Method",
    "MethodConfig",
    "MlsConvention",
    "Mode",
    "Prediction",
    "ProbabilisticDescriptor",
    "ProtocolConfig",
    "SetKind",
    "UncertaintySource",
    "read_descriptor_file",
    "run_batch",
    "run_session",
    "split_by_error_type",
    "validate_set",
    "write_descriptor_file",
    "__version__",
]
