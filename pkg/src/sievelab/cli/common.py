"""Options and helpers shared by every command."""

import functools
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click

from sievelab.core.config import RunConfig, load_config_file
from sievelab.core.errors import (
    ConfigurationError,
    InputError,
    SampleParseError,
    SievelabError,
)
from sievelab.utils.logging import configure_logging

EXIT_PROPERTY_FAILURE = 1


def common_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """--config, --preset, --seed, --out, --threads, -v and --quiet."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False),
            help="Flat JSON configuration file",
        ),
        click.option("--preset", help="Bundled preset to start from (see `sievelab presets`)"),
        click.option("--seed", type=click.IntRange(min=0), help="Master seed"),
        click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory"),
        click.option("--threads", type=click.IntRange(min=1), help="Worker threads"),
        click.option("-v", "--verbose", count=True, help="More logging (-vv for debug)"),
        click.option("--quiet", is_flag=True, help="No terminal report, errors only"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def handle_errors(func: Callable[..., Any]) -> Callable[..., Any]:
    """Map library errors to exit codes: usage problems 2, other failures 1."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (ConfigurationError, InputError, SampleParseError) as e:
            raise click.UsageError(str(e)) from e
        except SievelabError as e:
            raise click.ClickException(str(e)) from e

    return wrapper


def resolve_config(
    config_path: str | None,
    preset: str | None,
    verbose: int = 0,
    quiet: bool = False,
    **flags: Any,
) -> RunConfig:
    """
    Build the run configuration and set up logging.

    Precedence: flags > file > preset > defaults. Flags left unset (None)
    do not override.

    Raises:
        ConfigurationError: If any layer is invalid
    """
    configure_logging(verbose, quiet)
    config = RunConfig.from_preset(preset) if preset else RunConfig()
    if config_path:
        config = config.merged(load_config_file(config_path))
    return config.merged(flags).validate()


def output_dir(config: RunConfig) -> Path:
    """The configured output directory, created on demand."""
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def report_written(paths: list[Path], quiet: bool) -> None:
    if not quiet:
        for path in paths:
            click.echo(f"wrote {path}")
