"""
Report section implementations.

Each section holds one result and formats it into the standardized
structure that renderers consume.
"""

import math
from collections.abc import Sequence
from typing import Any

from sievelab.core.models import (
    EntropyMode,
    LowerBound,
    RiskSweepReport,
    SieveConstants,
    SieveTrace,
    VerificationReport,
)
from sievelab.core.registry import get_class_info
from sievelab.engines.packing import EntropyProfile
from sievelab.harness.concentration import ScenarioResult


def fmt(value: float, digits: int = 4) -> str:
    """Compact display form of a float (``nan`` and ``inf`` spelled out)."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


class RunOverviewSection:
    """
    Overview of a run.

    Shows:
    - Command and class
    - Master seed and config hash
    - Any extra labelled values the command supplies
    """

    def __init__(
        self,
        command: str,
        variant: str,
        seed: int,
        config_hash: str,
        extra: dict[str, Any] | None = None,
    ) -> None:
        self.command = command
        self.variant = variant
        self.seed = seed
        self.config_hash = config_hash
        self.extra = extra or {}

    @property
    def section_name(self) -> str:
        return "Run Overview"

    def generate_data(self) -> dict[str, Any]:
        info = get_class_info(self.variant)
        data: dict[str, Any] = {
            "Command": self.command,
            "Class": info.display_name if info else self.variant,
            "Seed": self.seed,
            "Config hash": self.config_hash,
        }
        data.update(self.extra)
        return {"type": "key_value", "data": data}


class ConstantsSection:
    """Sieve constants (c, C, c_ab, K_ab, L, d)."""

    def __init__(self, constants: SieveConstants) -> None:
        self.constants = constants

    @property
    def section_name(self) -> str:
        return "Sieve Constants"

    def generate_data(self) -> dict[str, Any]:
        k = self.constants
        data = {
            "Bounds": f"[{k.bounds.alpha:g}, {k.bounds.beta:g}]",
            "c": fmt(k.c),
            "C = c/2 - 1": fmt(k.C),
            "c(alpha, beta)": fmt(k.c_ab),
            "K(alpha, beta)": fmt(k.K_ab),
            "L (Bernstein)": fmt(k.L),
            "L (schedule)": fmt(k.L_schedule),
            "Diameter d": fmt(k.d),
        }
        return {"type": "key_value", "data": data}


class SieveTraceSection:
    """Table of descent steps of one sieve run."""

    def __init__(self, trace: SieveTrace) -> None:
        self.trace = trace

    @property
    def section_name(self) -> str:
        mode = "adaptive" if self.trace.adaptive else f"J_bar = {self.trace.J_bar}"
        return f"Sieve Trace ({mode}, stop: {self.trace.stop_reason.value})"

    def generate_data(self) -> dict[str, Any]:
        headers = ["Level", "Node", "Selected", "Packing", "Ties", "Radius", "Separation"]
        rows = [
            [
                lvl.level,
                lvl.node_index,
                lvl.selected_index,
                lvl.packing_size,
                lvl.ties,
                fmt(lvl.radius),
                fmt(lvl.separation),
            ]
            for lvl in self.trace.levels
        ]
        if not rows:
            return {
                "type": "text",
                "text": f"Stopped at the root (pool index {self.trace.final_index}).",
            }
        return {"type": "table", "headers": headers, "rows": rows}


class EntropySection:
    """Raw and monotone entropy estimates over the radius grid, per mode."""

    def __init__(self, profile: EntropyProfile) -> None:
        self.profile = profile

    @property
    def section_name(self) -> str:
        return "Metric Entropy"

    def generate_data(self) -> dict[str, Any]:
        headers = ["Mode", "Epsilon", "Raw log M", "Monotone log M"]
        rows = []
        for mode in EntropyMode:
            curve = self.profile.curves.get(mode)
            if curve is None:
                continue
            for eps, raw, fitted in curve.rows():
                rows.append([mode.value, fmt(eps), fmt(raw), fmt(fitted)])
        return {"type": "table", "headers": headers, "rows": rows}


class CriticalRadiusSection:
    """Critical radius eps* and the packing lower bound for each n."""

    def __init__(self, rows: Sequence[tuple[int, float, LowerBound]]) -> None:
        self.rows = list(rows)

    @property
    def section_name(self) -> str:
        return "Critical Radii"

    def generate_data(self) -> dict[str, Any]:
        headers = ["n", "eps*", "eps*^2", "Lower-bound eps", "Risk lower bound"]
        rows = [
            [n, fmt(eps), fmt(eps * eps), fmt(lower.epsilon), fmt(lower.risk_lower_bound)]
            for n, eps, lower in self.rows
        ]
        return {"type": "table", "headers": headers, "rows": rows}


class RiskSweepSection:
    """Risk per sample size."""

    def __init__(self, report: RiskSweepReport) -> None:
        self.report = report

    @property
    def section_name(self) -> str:
        return f"Risk Sweep ({self.report.variant})"

    def generate_data(self) -> dict[str, Any]:
        headers = ["n", "Replicates", "L2^2 risk", "Std. err.", "KL", "Hellinger^2", "Depth"]
        rows = [
            [
                row.n,
                row.replicates,
                fmt(row.mean),
                fmt(row.stderr, 2),
                fmt(row.kl_mean),
                fmt(row.hellinger_mean),
                f"{row.mean_depth:.2f}",
            ]
            for row in self.report.rows
        ]
        return {"type": "table", "headers": headers, "rows": rows}


class RateFitSection:
    """Fitted log-log slope against the class exponent."""

    def __init__(self, report: RiskSweepReport) -> None:
        self.report = report

    @property
    def section_name(self) -> str:
        return "Rate Fit"

    def generate_data(self) -> dict[str, Any]:
        r = self.report
        data = {
            "Slope": f"{fmt(r.slope)} +/- {fmt(r.half_width, 2)}",
            "Class exponent": fmt(r.theoretical_exponent),
            "Gap": fmt(r.slope_gap, 3),
            "Pool size": r.pool_size,
            "Pool resolution": fmt(r.pool_resolution),
            "Pool-limited": f"yes ({', '.join(r.limited_by)})" if r.pool_limited else "no",
        }
        return {"type": "key_value", "data": data}


class ConcentrationSection:
    """Empirical exceedance frequencies against their bounds."""

    def __init__(self, results: Sequence[ScenarioResult]) -> None:
        self.results = list(results)

    @property
    def section_name(self) -> str:
        return "Concentration"

    def generate_data(self) -> dict[str, Any]:
        headers = ["Scenario", "Kind", "n", "delta", "Frequency", "Bound", "Status"]
        rows = [
            [
                res.name,
                res.report.kind,
                res.report.n,
                fmt(res.report.delta),
                fmt(res.report.frequency),
                fmt(res.report.bound),
                "ok" if res.report.passed else "FAIL",
            ]
            for res in self.results
        ]
        return {"type": "table", "headers": headers, "rows": rows}


class VerificationSection:
    """Outcome of every property suite."""

    def __init__(self, report: VerificationReport) -> None:
        self.report = report

    @property
    def section_name(self) -> str:
        status = "passed" if self.report.passed else "FAILED"
        return f"Verification ({status})"

    def generate_data(self) -> dict[str, Any]:
        headers = ["Suite", "Checks", "Violations", "Worst slack", "Status"]
        rows = [
            [
                r.name,
                r.checked,
                r.violations,
                fmt(r.worst_slack, 3),
                "ok" if r.passed else "FAIL",
            ]
            for r in self.report.results
        ]
        return {"type": "table", "headers": headers, "rows": rows}
