"""sievelab command-line interface."""

import click

from sievelab import __version__

# Import and register commands
from sievelab.cli.bernstein import bernstein_cmd
from sievelab.cli.classes import classes_cmd
from sievelab.cli.entropy import entropy_cmd
from sievelab.cli.estimate import estimate_cmd
from sievelab.cli.presets import presets_group
from sievelab.cli.sweep import sweep_cmd
from sievelab.cli.verify import verify_cmd


@click.group()
@click.version_option(version=__version__)
def cli():
    """
    sievelab - multistage sieve density estimation

    Property suites, local entropy estimates, sieve fits and Monte Carlo
    risk sweeps over convex density classes on [0, 1].

    Exit codes: 0 success, 1 property failure, 2 configuration or usage error.
    """
    pass


cli.add_command(verify_cmd)
cli.add_command(entropy_cmd)
cli.add_command(estimate_cmd)
cli.add_command(sweep_cmd)
cli.add_command(bernstein_cmd)
cli.add_command(presets_group)
cli.add_command(classes_cmd)

if __name__ == "__main__":
    cli()
