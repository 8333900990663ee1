"""The ``bernstein`` command: concentration scenarios."""

import click

from sievelab.cli.common import (
    EXIT_PROPERTY_FAILURE,
    common_options,
    handle_errors,
    output_dir,
    report_written,
    resolve_config,
)
from sievelab.harness.concentration import run_scenarios
from sievelab.presentation import ReportBuilder, write_concentration


@click.command(name="bernstein")
@common_options
@click.option("--replicates", type=click.IntRange(min=1), help="Replicates per scenario")
@click.pass_context
@handle_errors
def bernstein_cmd(ctx, config_path, preset, seed, out_dir, threads, verbose, quiet, replicates):
    """Compare exceedance frequencies with their exponential bounds.

    Runs every configured scenario at each of its sample sizes and writes
    concentration.csv and concentration.json. Exits 1 if a frequency
    exceeds its bound by more than three standard errors.
    """
    config = resolve_config(
        config_path,
        preset,
        verbose,
        quiet,
        seed=seed,
        out_dir=out_dir,
        threads=threads,
        bernstein_replicates=replicates,
    )
    out = output_dir(config)
    results = run_scenarios(
        config.scenarios,
        config.bounds,
        config.c,
        config.m,
        config.bernstein_replicates,
        config.seed,
    )
    paths = write_concentration(out, results, config.config_hash())

    if not quiet:
        (
            ReportBuilder()
            .with_overview(
                "bernstein",
                "ambient",
                config.seed,
                config.config_hash(),
                {"Replicates": config.bernstein_replicates},
            )
            .with_concentration(results)
            .render()
        )
    report_written(paths, quiet)
    if not all(res.report.passed for res in results):
        ctx.exit(EXIT_PROPERTY_FAILURE)
