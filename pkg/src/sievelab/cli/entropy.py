"""The ``entropy`` command: entropy estimates and critical radii."""

import click

from sievelab.cli.common import (
    common_options,
    handle_errors,
    output_dir,
    report_written,
    resolve_config,
)
from sievelab.core.builder import SieveBuilder
from sievelab.core.models import EntropyMode
from sievelab.engines.divergences import diameter_upper_bound
from sievelab.engines.packing import (
    entropy_profile,
    lower_bound_radius,
    solve_critical_epsilon,
)
from sievelab.presentation import ReportBuilder, write_entropy


@click.command(name="entropy")
@common_options
@click.option(
    "--epsilon",
    "epsilons",
    type=click.FloatRange(min=0.0, min_open=True),
    multiple=True,
    help="Radius of the grid (repeatable; replaces epsilon_list)",
)
@handle_errors
def entropy_cmd(config_path, preset, seed, out_dir, threads, verbose, quiet, epsilons):
    """Estimate local metric entropy and solve eps* for each n.

    Writes entropy.csv (global, local-sup and adaptive rows per radius),
    entropy_monotone.csv and critical_radii.csv.
    """
    config = resolve_config(
        config_path,
        preset,
        verbose,
        quiet,
        seed=seed,
        out_dir=out_dir,
        threads=threads,
        epsilon_list=list(epsilons) or None,
    )
    out = output_dir(config)
    estimator = SieveBuilder.from_config(config).build()
    spec, pool = estimator.spec, estimator.pool

    profile = entropy_profile(spec, config.epsilon_list, config.c, pool, estimator.centers)
    local = profile.curve(EntropyMode.LOCAL_SUP)
    upper = diameter_upper_bound(spec.bounds)
    critical = [
        (
            n,
            solve_critical_epsilon(n, spec, config.c, local, upper),
            lower_bound_radius(n, spec.bounds.alpha, config.c, local, upper),
        )
        for n in sorted(set(config.n_list))
    ]
    paths = write_entropy(out, profile, critical, config.config_hash())

    if not quiet:
        (
            ReportBuilder()
            .with_overview(
                "entropy",
                spec.variant,
                config.seed,
                config.config_hash(),
                {"Pool size": len(pool), "Centers": len(estimator.centers)},
            )
            .with_entropy(profile, critical)
            .render()
        )
    report_written(paths, quiet)
