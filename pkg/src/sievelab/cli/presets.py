"""Preset listing commands."""

import click

from sievelab.data import get_preset_registry


@click.group(name="presets")
def presets_group():
    """Bundled configuration presets."""
    pass


@presets_group.command("list")
@click.option("--category", help="Only presets of this category")
def presets_list_cmd(category):
    """List preset names and descriptions."""
    registry = get_preset_registry()
    presets = registry.get_by_category(category) if category else registry.get_all()
    if not presets:
        click.echo("No presets found.")
        return
    width = max(len(p.name) for p in presets)
    for preset in presets:
        click.echo(f"{preset.name.ljust(width)}  [{preset.category}] {preset.description}")


@presets_group.command("show")
@click.argument("name")
def presets_show_cmd(name):
    """Show the settings a preset applies."""
    preset = get_preset_registry().get(name)
    if preset is None:
        raise click.BadParameter(f"no preset named {name!r}", param_hint="NAME")
    click.echo(f"{preset.name} ({preset.category})")
    click.echo(preset.description)
    for key, value in preset.settings.items():
        click.echo(f"  {key}: {value}")
