"""The ``sweep`` command: Monte Carlo risk over n and the fitted rate."""

import click

from sievelab.cli.common import (
    common_options,
    handle_errors,
    output_dir,
    report_written,
    resolve_config,
)
from sievelab.core.builder import SieveBuilder
from sievelab.harness.risk import draw_truth, rate_sweep
from sievelab.presentation import ReportBuilder, write_sweep


@click.command(name="sweep")
@common_options
@click.option("--replicates", type=click.IntRange(min=1), help="Replicates per sample size")
@click.option("--adaptive", is_flag=True, help="Use the adaptive sieve")
@handle_errors
def sweep_cmd(
    config_path, preset, seed, out_dir, threads, verbose, quiet, replicates, adaptive
):
    """Estimate the risk at every n in n_list and fit the log-log slope.

    The true density is a class member drawn off the pool from its own
    seeded stream. Writes sweep.csv and sweep.json.
    """
    config = resolve_config(
        config_path,
        preset,
        verbose,
        quiet,
        seed=seed,
        out_dir=out_dir,
        threads=threads,
        replicates=replicates,
        adaptive=adaptive or None,
    )
    out = output_dir(config)
    estimator = SieveBuilder.from_config(config).build()
    pool = estimator.pool
    f_true = draw_truth(estimator.spec, pool, config.seed)

    report = rate_sweep(
        estimator.spec,
        config.n_list,
        config.replicates,
        estimator,
        f_true,
        config.seed,
        pool,
        threads=config.threads,
    )
    paths = write_sweep(out, report, config.config_hash())

    if not quiet:
        (
            ReportBuilder()
            .with_overview(
                "sweep",
                estimator.spec.variant,
                config.seed,
                config.config_hash(),
                {"Replicates": config.replicates, "Adaptive": "yes" if config.adaptive else "no"},
            )
            .with_constants(estimator.constants)
            .with_risk_sweep(report)
            .render()
        )
    report_written(paths, quiet)
