"""
Core data structures.

Exports the fundamental types:
- GridDensity and BoundsSpec
- RunConfig: run configuration with presets
- Result records (SieveTrace, RiskSweepReport, ...)
- The error hierarchy

The fluent SieveBuilder lives in ``sievelab.core.builder`` and is
re-exported from ``sievelab``.
"""

from sievelab.core.config import RunConfig
from sievelab.core.errors import (
    ConfigurationError,
    ContractError,
    DimensionError,
    DomainError,
    GenerationError,
    InputError,
    NormalizationError,
    ResolutionError,
    SampleParseError,
    SievelabError,
)
from sievelab.core.models import (
    BoundsSpec,
    ConcentrationReport,
    EntropyEstimate,
    EntropyMode,
    GridDensity,
    LowerBound,
    PackingResult,
    PropertyResult,
    RiskRow,
    RiskSweepReport,
    SieveConstants,
    SieveLevel,
    SieveTrace,
    StopReason,
    VerificationReport,
    cell_counts,
)
from sievelab.core.registry import get_class_info

__all__ = [
    # Config
    "RunConfig",
    # Models
    "BoundsSpec",
    "GridDensity",
    "cell_counts",
    "PackingResult",
    "EntropyEstimate",
    "EntropyMode",
    "LowerBound",
    "SieveConstants",
    "SieveLevel",
    "SieveTrace",
    "StopReason",
    "RiskRow",
    "RiskSweepReport",
    "ConcentrationReport",
    "PropertyResult",
    "VerificationReport",
    # Registry
    "get_class_info",
    # Errors
    "SievelabError",
    "DimensionError",
    "DomainError",
    "NormalizationError",
    "ResolutionError",
    "GenerationError",
    "ContractError",
    "ConfigurationError",
    "InputError",
    "SampleParseError",
]
