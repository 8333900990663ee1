"""
File exporters for experiment results.

CSV files open with a ``# config_hash=<hash> schema=v1`` comment line and a
header row; JSON documents carry ``schema`` and ``config_hash`` keys. Every
file is written to a sibling temp file and moved into place with
``os.replace``.
"""

import csv
import io
import json
import logging
import math
import os
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from sievelab.core.models import (
    SCHEMA_VERSION,
    GridDensity,
    LowerBound,
    RiskSweepReport,
    SieveTrace,
    VerificationReport,
)
from sievelab.engines.packing import EntropyProfile
from sievelab.harness.concentration import ScenarioResult

logger = logging.getLogger(__name__)

ENTROPY_HEADER = ["epsilon", "c", "mode", "log_count", "center_index"]
MONOTONE_HEADER = ["epsilon", "mode", "raw_log_count", "monotone_log_count"]
CRITICAL_HEADER = ["n", "epsilon_star", "lower_bound_epsilon", "risk_lower_bound"]
TRACE_HEADER = ["level", "selected_index", "packing_size", "ties", "radius", "separation"]
SWEEP_HEADER = ["row", "n", "replicate", "l2_squared", "stderr", "kl", "hellinger_squared", "depth"]
CONCENTRATION_HEADER = [
    "scenario",
    "kind",
    "n",
    "delta",
    "C",
    "L",
    "replicates",
    "frequency",
    "stderr",
    "bound",
    "passed",
]


def atomic_write(path: str | Path, text: str) -> Path:
    """Write text to path via a temp file and rename; parent dirs are created."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(target.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    os.replace(tmp, target)
    logger.debug("wrote %s", target)
    return target


def _json_safe(value: Any) -> Any:
    # JSON has no inf/nan; spell them as strings
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config_hash: str,
) -> Path:
    """CSV with the config hash comment line and a header row."""
    buffer = io.StringIO()
    buffer.write(f"# config_hash={config_hash} schema={SCHEMA_VERSION}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return atomic_write(path, buffer.getvalue())


def write_json(path: str | Path, payload: dict[str, Any], config_hash: str) -> Path:
    """JSON document with sorted keys and the schema and config hash fields."""
    document = {"schema": SCHEMA_VERSION, "config_hash": config_hash}
    document.update(_json_safe(payload))
    return atomic_write(path, json.dumps(document, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Result writers
# ---------------------------------------------------------------------------


def write_entropy(
    out_dir: str | Path,
    profile: EntropyProfile,
    critical: Sequence[tuple[int, float, LowerBound]],
    config_hash: str,
) -> list[Path]:
    """entropy.csv (raw rows), entropy_monotone.csv and critical_radii.csv."""
    out = Path(out_dir)
    monotone_rows = [
        [eps, mode.value, raw, fitted]
        for mode, curve in profile.curves.items()
        for eps, raw, fitted in curve.rows()
    ]
    critical_rows = [
        [n, eps, lower.epsilon, lower.risk_lower_bound] for n, eps, lower in critical
    ]
    return [
        write_csv(
            out / "entropy.csv",
            ENTROPY_HEADER,
            (e.to_row() for e in profile.estimates),
            config_hash,
        ),
        write_csv(out / "entropy_monotone.csv", MONOTONE_HEADER, monotone_rows, config_hash),
        write_csv(out / "critical_radii.csv", CRITICAL_HEADER, critical_rows, config_hash),
    ]


def write_estimate(
    out_dir: str | Path,
    estimate: GridDensity,
    trace: SieveTrace,
    config_hash: str,
    extra: dict[str, Any] | None = None,
) -> list[Path]:
    """estimate.json, trace.json and trace.csv."""
    out = Path(out_dir)
    payload = {"estimate": estimate.to_dict(), "pool_index": trace.final_index}
    payload.update(extra or {})
    return [
        write_json(out / "estimate.json", payload, config_hash),
        write_json(out / "trace.json", trace.to_dict(), config_hash),
        write_csv(out / "trace.csv", TRACE_HEADER, trace.to_rows(), config_hash),
    ]


def sweep_rows(report: RiskSweepReport) -> list[list[Any]]:
    """One ``replicate`` row per (n, replicate), then one ``summary`` row per n."""
    rows: list[list[Any]] = [
        ["replicate", n, r, loss, "", "", "", ""] for n, r, loss in report.losses
    ]
    rows.extend(
        [
            "summary",
            row.n,
            "",
            row.mean,
            row.stderr,
            row.kl_mean,
            row.hellinger_mean,
            row.mean_depth,
        ]
        for row in report.rows
    )
    return rows


def write_sweep(out_dir: str | Path, report: RiskSweepReport, config_hash: str) -> list[Path]:
    """sweep.csv and sweep.json."""
    out = Path(out_dir)
    payload = {
        "variant": report.variant,
        "seed": report.seed,
        "slope": report.slope,
        "intercept": report.intercept,
        "slope_stderr": report.slope_stderr,
        "half_width": report.half_width,
        "theoretical_exponent": report.theoretical_exponent,
        "pool_size": report.pool_size,
        "pool_resolution": report.pool_resolution,
        "pool_limited": report.pool_limited,
        "limited_by": list(report.limited_by),
        "rows": [
            {
                "n": row.n,
                "replicates": row.replicates,
                "l2_squared": row.mean,
                "stderr": row.stderr,
                "kl": row.kl_mean,
                "hellinger_squared": row.hellinger_mean,
                "mean_depth": row.mean_depth,
            }
            for row in report.rows
        ],
    }
    return [
        write_csv(out / "sweep.csv", SWEEP_HEADER, sweep_rows(report), config_hash),
        write_json(out / "sweep.json", payload, config_hash),
    ]


def write_concentration(
    out_dir: str | Path, results: Sequence[ScenarioResult], config_hash: str
) -> list[Path]:
    """concentration.csv and concentration.json."""
    out = Path(out_dir)
    rows = [
        [
            res.name,
            res.report.kind,
            res.report.n,
            res.report.delta,
            res.report.C,
            res.report.L,
            res.report.replicates,
            res.report.frequency,
            res.report.stderr,
            res.report.bound,
            res.report.passed,
        ]
        for res in results
    ]
    payload = {
        "passed": all(res.report.passed for res in results),
        "scenarios": [dict(zip(CONCENTRATION_HEADER, row, strict=True)) for row in rows],
    }
    return [
        write_csv(out / "concentration.csv", CONCENTRATION_HEADER, rows, config_hash),
        write_json(out / "concentration.json", payload, config_hash),
    ]


def write_verification(
    out_dir: str | Path, report: VerificationReport, config_hash: str
) -> list[Path]:
    """verify.json."""
    return [write_json(Path(out_dir) / "verify.json", report.to_dict(), config_hash)]
