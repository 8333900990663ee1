"""The ``verify`` command: every property suite, pass/fail report."""

import logging

import click

from sievelab.cli.common import (
    EXIT_PROPERTY_FAILURE,
    common_options,
    handle_errors,
    output_dir,
    report_written,
    resolve_config,
)
from sievelab.harness.verify import run_verification
from sievelab.presentation import ReportBuilder, write_verification

logger = logging.getLogger(__name__)


@click.command(name="verify")
@common_options
@click.pass_context
@handle_errors
def verify_cmd(ctx, config_path, preset, seed, out_dir, threads, verbose, quiet):
    """Run the property suites and write verify.json.

    Exits 0 when every suite passes and 1 otherwise.
    """
    config = resolve_config(
        config_path, preset, verbose, quiet, seed=seed, out_dir=out_dir, threads=threads
    )
    out = output_dir(config)
    report = run_verification(config, progress=lambda name: logger.info("suite: %s", name))
    paths = write_verification(out, report, config.config_hash())

    if not quiet:
        variant = config.class_spec.get("variant", "ambient")
        (
            ReportBuilder()
            .with_overview("verify", variant, config.seed, config.config_hash())
            .with_verification(report)
            .render()
        )
    report_written(paths, quiet)
    if not report.passed:
        ctx.exit(EXIT_PROPERTY_FAILURE)
