"""The ``estimate`` command: run the sieve on a sample file."""

import click

from sievelab.cli.common import (
    common_options,
    handle_errors,
    output_dir,
    report_written,
    resolve_config,
)
from sievelab.core.builder import SieveBuilder
from sievelab.harness.sampling import read_samples
from sievelab.presentation import ReportBuilder, write_estimate


@click.command(name="estimate")
@common_options
@click.option(
    "--samples",
    "samples_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Sample file: one decimal in [0, 1] per line",
)
@click.option("--adaptive", is_flag=True, help="Choose the depth online (adaptive sieve)")
@handle_errors
def estimate_cmd(
    config_path, preset, seed, out_dir, threads, verbose, quiet, samples_path, adaptive
):
    """Estimate a density from samples.

    Writes estimate.json, trace.json and trace.csv.
    """
    config = resolve_config(
        config_path,
        preset,
        verbose,
        quiet,
        seed=seed,
        out_dir=out_dir,
        threads=threads,
        adaptive=adaptive or None,
    )
    samples = read_samples(samples_path)
    out = output_dir(config)

    estimator = SieveBuilder.from_config(config).build()
    estimate, trace = estimator.estimate(samples)
    extra = {"n": int(samples.size), "variant": estimator.spec.variant, "adaptive": config.adaptive}
    paths = write_estimate(out, estimate, trace, config.config_hash(), extra)

    if not quiet:
        (
            ReportBuilder()
            .with_overview(
                "estimate",
                estimator.spec.variant,
                config.seed,
                config.config_hash(),
                {"Samples": samples.size, "Pool index": trace.final_index},
            )
            .with_constants(trace.constants)
            .with_trace(trace)
            .render()
        )
    report_written(paths, quiet)
