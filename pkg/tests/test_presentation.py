"""
Tests for report sections, renderers, the report builder and exporters.
"""

import json
import math

import pytest
from rich.console import Console

from sievelab.core.models import (
    LowerBound,
    PropertyResult,
    RiskRow,
    RiskSweepReport,
    StopReason,
    VerificationReport,
)
from sievelab.engines.classes import AmbientSpec
from sievelab.engines.packing import entropy_profile
from sievelab.engines.sieve import run_sieve
from sievelab.harness.concentration import run_scenarios
from sievelab.presentation import ReportBuilder
from sievelab.presentation.exporters import (
    SWEEP_HEADER,
    atomic_write,
    sweep_rows,
    write_concentration,
    write_csv,
    write_entropy,
    write_estimate,
    write_json,
    write_sweep,
    write_verification,
)
from sievelab.presentation.renderers import PlainTextRenderer, RichTableRenderer
from sievelab.presentation.sections import (
    ConcentrationSection,
    ConstantsSection,
    CriticalRadiusSection,
    EntropySection,
    RateFitSection,
    RiskSweepSection,
    RunOverviewSection,
    SieveTraceSection,
    VerificationSection,
    fmt,
)

# ============================================================================
# FIXTURES
# ============================================================================


@pytest.fixture
def sweep_report() -> RiskSweepReport:
    rows = tuple(
        RiskRow(n=n, replicates=2, mean=1.0 / n, stderr=0.1 / n, kl_mean=0.5 / n,
                hellinger_mean=0.25 / n, mean_depth=2.5)
        for n in (100, 200, 400, 800)
    )
    losses = tuple((row.n, r, row.mean) for row in rows for r in range(2))
    return RiskSweepReport(
        variant="bv",
        rows=rows,
        slope=-1.0,
        intercept=0.0,
        slope_stderr=0.01,
        half_width=0.04,
        theoretical_exponent=-2.0 / 3.0,
        seed=7,
        pool_size=30,
        pool_resolution=0.05,
        limited_by=("resolution",),
        losses=losses,
    )


@pytest.fixture
def verification() -> VerificationReport:
    return VerificationReport(
        results=(
            PropertyResult("kl-l2-sandwich", checked=10, violations=0, worst_slack=0.01),
            PropertyResult("diameter-bound", checked=10, violations=2, worst_slack=-0.5, details="x"),
        )
    )


@pytest.fixture
def trace(line_pool, constants):
    return run_sieve([0.1, 0.4, 0.9], AmbientSpec(), constants, line_pool, J_bar=3)[1]


@pytest.fixture
def profile(line_pool):
    return entropy_profile(AmbientSpec(), [0.1, 0.3], 2.0, line_pool, centers=[0, 3])


# ============================================================================
# SECTIONS
# ============================================================================


def test_fmt():
    assert fmt(0.123456) == "0.1235"
    assert fmt(math.nan) == "nan"
    assert fmt(-math.inf) == "-inf"
    assert fmt(12345.0, 2) == "1.2e+04"


def test_overview_uses_display_name():
    section = RunOverviewSection("sweep", "bv", 7, "abc", {"Replicates": 3})
    data = section.generate_data()
    assert section.section_name == "Run Overview"
    assert data["type"] == "key_value"
    assert data["data"]["Class"] == "Bounded Variation"
    assert data["data"]["Replicates"] == 3

    unknown = RunOverviewSection("sweep", "custom", 7, "abc").generate_data()
    assert unknown["data"]["Class"] == "custom"


def test_constants_section(constants):
    data = ConstantsSection(constants).generate_data()["data"]
    assert data["Bounds"] == "[0.5, 2]"
    assert data["C = c/2 - 1"] == "6"
    assert data["L (schedule)"] == "25"


def test_trace_section(trace):
    section = SieveTraceSection(trace)
    assert "J_bar = 3" in section.section_name
    data = section.generate_data()
    assert data["type"] == "table"
    assert len(data["rows"]) == len(trace.levels)


def test_trace_section_at_the_root(bv_spec, bv_pool, bounds):
    from sievelab.engines.sieve import compute_constants, run_adaptive_sieve

    k = compute_constants(bounds, 14.0)
    _, root_trace = run_adaptive_sieve([0.5], bv_spec, k, bv_pool, None, J_cap=4)
    section = SieveTraceSection(root_trace)
    assert "adaptive" in section.section_name
    assert root_trace.stop_reason is StopReason.ADAPTIVE_CONDITION
    assert section.generate_data() == {"type": "text", "text": "Stopped at the root (pool index 0)."}


def test_entropy_sections(profile):
    data = EntropySection(profile).generate_data()
    assert data["headers"][0] == "Mode"
    assert len(data["rows"]) == 3 * 2

    critical = CriticalRadiusSection([(100, 0.2, LowerBound(100, 0.1, 4.0))]).generate_data()
    assert critical["rows"][0][0] == 100
    assert critical["rows"][0][2] == "0.04"


def test_sweep_sections(sweep_report):
    table = RiskSweepSection(sweep_report)
    assert table.section_name == "Risk Sweep (bv)"
    assert len(table.generate_data()["rows"]) == 4

    fit = RateFitSection(sweep_report).generate_data()["data"]
    assert fit["Slope"] == "-1 +/- 0.04"
    assert fit["Pool-limited"] == "yes (resolution)"


def test_concentration_section(bounds):
    results = run_scenarios(
        [{"name": "s", "f": "uniform", "g": {"sine": 1}, "g_prime": "uniform", "n": 10}],
        bounds, 14.0, 64, replicates=5, seed=1,
    )
    data = ConcentrationSection(results).generate_data()
    assert data["rows"][0][:3] == ["s", "bernstein", 10]
    assert data["rows"][0][-1] == "ok"


def test_verification_section(verification):
    section = VerificationSection(verification)
    assert section.section_name == "Verification (FAILED)"
    statuses = [row[-1] for row in section.generate_data()["rows"]]
    assert statuses == ["ok", "FAIL"]


# ============================================================================
# RENDERERS
# ============================================================================


class TestPlainTextRenderer:
    def test_table(self):
        text = PlainTextRenderer().render_section(
            "T", {"type": "table", "headers": ["a", "bb"], "rows": [[1, "long value"]]}
        )
        lines = text.splitlines()
        assert lines[0] == "| a | bb         |"
        assert lines[1] == "|---|------------|"
        assert lines[2] == "| 1 | long value |"

    def test_key_value_alignment(self):
        text = PlainTextRenderer().render_section(
            "K", {"type": "key_value", "data": {"a": 1, "long": 2}}
        )
        assert text.splitlines() == ["   a: 1", "long: 2"]

    def test_other_types(self):
        renderer = PlainTextRenderer()
        assert renderer.render_section("X", {"type": "text", "text": "hi"}) == "hi"
        assert "Unknown section type" in renderer.render_section("X", {"type": "plot"})
        assert renderer.render_section("K", {"type": "key_value", "data": {}}) == ""

    def test_report_underlines_titles(self):
        text = PlainTextRenderer().render_report([("Title", {"type": "text", "text": "x"})])
        assert "Title\n=====\nx" in text


class TestRichTableRenderer:
    def test_render_report_is_plain_text(self):
        text = RichTableRenderer().render_report(
            [("Results", {"type": "table", "headers": ["n", "risk"], "rows": [[100, "0.5"]]})]
        )
        assert "Results" in text
        assert "risk" in text
        assert "\x1b[" not in text

    def test_markup_is_not_interpreted(self):
        text = RichTableRenderer().render_report(
            [("K", {"type": "key_value", "data": {"Range": "[bold]x[/bold]"}})]
        )
        assert "[bold]x[/bold]" in text

    def test_print_report_goes_to_the_given_console(self):
        console = Console(record=True, width=100)
        RichTableRenderer(console).print_report([("Only", {"type": "text", "text": "once"})])
        assert console.export_text().count("once") == 1


# ============================================================================
# REPORT BUILDER
# ============================================================================


def test_report_builder_plain(sweep_report, verification, constants, tmp_path):
    target = tmp_path / "report.txt"
    text = (
        ReportBuilder()
        .with_overview("sweep", "bv", 7, "abc")
        .with_constants(constants)
        .with_risk_sweep(sweep_report)
        .with_verification(verification)
        .render(format="plain_table", file=str(target), show=False)
    )
    for title in ("Run Overview", "Sieve Constants", "Risk Sweep (bv)", "Rate Fit", "Verification (FAILED)"):
        assert title in text
    assert target.read_text() == text


def test_report_builder_sections(profile, trace):
    builder = ReportBuilder().with_entropy(profile).with_trace(trace)
    assert [name for name, _ in builder.section_data()][0] == "Metric Entropy"
    assert len(builder.section_data()) == 2


def test_report_builder_rejects_unknown_format():
    with pytest.raises(ValueError):
        ReportBuilder().render(format="html", show=False)


def test_report_builder_shows_once(verification):
    console = Console(record=True, width=120)
    ReportBuilder().with_verification(verification).render(console=console)
    assert console.export_text().count("Verification (FAILED)") == 1


# ============================================================================
# EXPORTERS
# ============================================================================


def test_atomic_write_leaves_no_temp_file(tmp_path):
    path = atomic_write(tmp_path / "a" / "b.txt", "hello\n")
    assert path.read_text() == "hello\n"
    assert list(path.parent.iterdir()) == [path]


def test_csv_header_line(tmp_path):
    path = write_csv(tmp_path / "x.csv", ["a", "b"], [[1, 0.1], [2, math.inf]], "deadbeef")
    lines = path.read_text().splitlines()
    assert lines[0] == "# config_hash=deadbeef schema=v1"
    assert lines[1] == "a,b"
    assert lines[2] == "1,0.1"
    assert lines[3] == "2,inf"


def test_json_spells_out_non_finite_values(tmp_path):
    path = write_json(tmp_path / "x.json", {"slope": math.nan, "rows": [math.inf, 1.0]}, "h")
    data = json.loads(path.read_text())
    assert data["schema"] == "v1"
    assert data["config_hash"] == "h"
    assert data["slope"] == "nan"
    assert data["rows"] == ["inf", 1.0]


def test_sweep_rows(sweep_report):
    rows = sweep_rows(sweep_report)
    assert len(rows) == 8 + 4
    assert all(len(row) == len(SWEEP_HEADER) for row in rows)
    assert rows[0][:3] == ["replicate", 100, 0]
    assert rows[-1][:2] == ["summary", 800]


def test_result_writers(tmp_path, sweep_report, verification, profile, trace, line_pool, bounds):
    names = {p.name for p in write_sweep(tmp_path, sweep_report, "h")}
    names |= {p.name for p in write_verification(tmp_path, verification, "h")}
    names |= {
        p.name
        for p in write_entropy(tmp_path, profile, [(100, 0.2, LowerBound(100, 0.1, 4.0))], "h")
    }
    names |= {p.name for p in write_estimate(tmp_path, line_pool[trace.final_index], trace, "h")}
    results = run_scenarios(
        [{"name": "s", "f": "uniform", "g": {"sine": 1}, "g_prime": "uniform", "n": 10}],
        bounds, 14.0, 64, replicates=5, seed=1,
    )
    names |= {p.name for p in write_concentration(tmp_path, results, "h")}
    assert names == {
        "sweep.csv",
        "sweep.json",
        "verify.json",
        "entropy.csv",
        "entropy_monotone.csv",
        "critical_radii.csv",
        "estimate.json",
        "trace.json",
        "trace.csv",
        "concentration.csv",
        "concentration.json",
    }
    assert not list(tmp_path.glob("*.tmp"))
    verify = json.loads((tmp_path / "verify.json").read_text())
    assert verify["passed"] is False
    sweep = json.loads((tmp_path / "sweep.json").read_text())
    assert sweep["pool_limited"] is True
    assert sweep["limited_by"] == ["resolution"]
    assert len(sweep["rows"]) == 4


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
