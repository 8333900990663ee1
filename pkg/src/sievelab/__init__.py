"""
sievelab - multistage sieve MLE density estimation

Quick Start:
    >>> from sievelab import SieveBuilder, ConvMixSpec
    >>> estimator = (
    ...     SieveBuilder(ConvMixSpec.from_sine(3, 64))
    ...     .with_pool(size=200, seed=7)
    ...     .with_likelihood_constant(25.0)
    ...     .build()
    ... )
    >>> estimate, trace = estimator.estimate(samples)

From a bundled preset:
    >>> estimator = SieveBuilder.from_preset("convmix-default").build()
"""

__version__ = "0.1.0"

from sievelab import engines, harness, presentation
from sievelab.core.builder import SieveBuilder
from sievelab.core.config import RunConfig
from sievelab.core.errors import SievelabError
from sievelab.core.models import BoundsSpec, GridDensity, SieveTrace
from sievelab.core.registry import get_class_info
from sievelab.data import get_preset_registry
from sievelab.engines.classes import (
    AmbientSpec,
    BVSpec,
    ConvMixSpec,
    LipschitzSpec,
    QuadSpec,
)
from sievelab.presentation import ReportBuilder

__all__ = [
    # Version
    "__version__",
    # Modules
    "engines",
    "harness",
    "presentation",
    # Building
    "SieveBuilder",
    "RunConfig",
    "get_preset_registry",
    # Types
    "BoundsSpec",
    "GridDensity",
    "SieveTrace",
    "SievelabError",
    # Classes
    "AmbientSpec",
    "LipschitzSpec",
    "BVSpec",
    "QuadSpec",
    "ConvMixSpec",
    "get_class_info",
    # Reports
    "ReportBuilder",
]
