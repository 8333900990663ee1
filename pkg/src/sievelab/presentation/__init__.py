"""
Presentation layer for sievelab.

Terminal reports and result files.

Usage:
    from sievelab.presentation import ReportBuilder

    (
        ReportBuilder()
        .with_overview("sweep", "convmix", config.seed, config.config_hash())
        .with_risk_sweep(report)
        .render(format="rich_table")
    )
"""

from sievelab.core.protocols import ReportRenderer, ReportSection

from .builder import ReportBuilder
from .exporters import (
    SCHEMA_VERSION,
    atomic_write,
    write_concentration,
    write_csv,
    write_entropy,
    write_estimate,
    write_json,
    write_sweep,
    write_verification,
)
from .renderers import PlainTextRenderer, RichTableRenderer
from .sections import (
    ConcentrationSection,
    ConstantsSection,
    CriticalRadiusSection,
    EntropySection,
    RateFitSection,
    RiskSweepSection,
    RunOverviewSection,
    SieveTraceSection,
    VerificationSection,
)

__all__ = [
    # Main API
    "ReportBuilder",
    # Protocols (for custom extensions)
    "ReportSection",
    "ReportRenderer",
    # Built-in sections
    "RunOverviewSection",
    "ConstantsSection",
    "SieveTraceSection",
    "EntropySection",
    "CriticalRadiusSection",
    "RiskSweepSection",
    "RateFitSection",
    "ConcentrationSection",
    "VerificationSection",
    # Renderers
    "RichTableRenderer",
    "PlainTextRenderer",
    # File exporters
    "SCHEMA_VERSION",
    "atomic_write",
    "write_csv",
    "write_json",
    "write_entropy",
    "write_estimate",
    "write_sweep",
    "write_concentration",
    "write_verification",
]
