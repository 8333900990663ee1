"""
Report builder for experiment results.

Sections are added one at a time, then rendered in the chosen format.
"""

from collections.abc import Sequence
from typing import Any

from rich.console import Console

from sievelab.core.models import (
    LowerBound,
    RiskSweepReport,
    SieveConstants,
    SieveTrace,
    VerificationReport,
)
from sievelab.core.protocols import ReportRenderer, ReportSection
from sievelab.engines.packing import EntropyProfile
from sievelab.harness.concentration import ScenarioResult

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


class ReportBuilder:
    """
    Builder for experiment reports.

    Usage:
        (
            ReportBuilder()
            .with_overview("sweep", "convmix", seed, config.config_hash())
            .with_risk_sweep(report)
            .render(format="rich_table")
        )
    """

    def __init__(self) -> None:
        self._sections: list[ReportSection] = []

    # -------------------------------------------------------------------------
    # Section Adding Methods
    # -------------------------------------------------------------------------
    def with_overview(
        self,
        command: str,
        variant: str,
        seed: int,
        config_hash: str,
        extra: dict[str, Any] | None = None,
    ) -> "ReportBuilder":
        self._sections.append(RunOverviewSection(command, variant, seed, config_hash, extra))
        return self

    def with_constants(self, constants: SieveConstants) -> "ReportBuilder":
        self._sections.append(ConstantsSection(constants))
        return self

    def with_trace(self, trace: SieveTrace) -> "ReportBuilder":
        self._sections.append(SieveTraceSection(trace))
        return self

    def with_entropy(
        self,
        profile: EntropyProfile,
        critical: Sequence[tuple[int, float, LowerBound]] = (),
    ) -> "ReportBuilder":
        """Entropy table, plus the critical radii table when given."""
        self._sections.append(EntropySection(profile))
        if critical:
            self._sections.append(CriticalRadiusSection(critical))
        return self

    def with_risk_sweep(self, report: RiskSweepReport) -> "ReportBuilder":
        """Risk table and rate fit."""
        self._sections.append(RiskSweepSection(report))
        self._sections.append(RateFitSection(report))
        return self

    def with_concentration(self, results: Sequence[ScenarioResult]) -> "ReportBuilder":
        self._sections.append(ConcentrationSection(results))
        return self

    def with_verification(self, report: VerificationReport) -> "ReportBuilder":
        self._sections.append(VerificationSection(report))
        return self

    def with_section(self, section: ReportSection) -> "ReportBuilder":
        """
        Add a custom section.

        Args:
            section: Any object implementing the ReportSection protocol
        """
        self._sections.append(section)
        return self

    # -------------------------------------------------------------------------
    # Rendering Methods
    # -------------------------------------------------------------------------
    def section_data(self) -> list[tuple[str, dict[str, Any]]]:
        return [(s.section_name, s.generate_data()) for s in self._sections]

    def render(
        self,
        format: str = "rich_table",
        file: str | None = None,
        show: bool = True,
        console: Console | None = None,
    ) -> str:
        """
        Render the report.

        Args:
            format: "rich_table" or "plain_table"
            file: Optional filename to save the plain text to
            show: Whether to print to the terminal
            console: Rich console to print to (default: stdout)

        Returns:
            The report as plain text

        Raises:
            ValueError: If the format is unknown
        """
        data = self.section_data()
        renderer = self._get_renderer(format, console)
        text = renderer.render_report(data)
        if show:
            if isinstance(renderer, RichTableRenderer):
                renderer.print_report(data)
            else:
                (console or Console()).print(text, markup=False, highlight=False)
        if file:
            with open(file, "w", encoding="utf-8") as f:
                f.write(text)
        return text

    def _get_renderer(self, format: str, console: Console | None) -> ReportRenderer:
        if format == "rich_table":
            return RichTableRenderer(console)
        if format == "plain_table":
            return PlainTextRenderer()
        raise ValueError(f"Unknown format '{format}'. Available: rich_table, plain_table")
