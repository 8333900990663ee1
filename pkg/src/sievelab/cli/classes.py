"""Density class listing command."""

import click

from sievelab.core.registry import (
    CLASS_REGISTRY,
    get_class_by_alias,
    get_class_info,
    get_classes_by_category,
)


@click.command(name="classes")
@click.argument("name", required=False)
@click.option(
    "--category",
    type=click.Choice(["ambient", "parametric", "nonparametric"]),
    help="Only classes of this category",
)
def classes_cmd(name, category):
    """List density classes, or describe one by name or alias."""
    if name:
        info = get_class_info(name.lower()) or get_class_by_alias(name)
        if info is None:
            raise click.BadParameter(f"no density class named {name!r}", param_hint="NAME")
        click.echo(str(info))
        click.echo(info.description)
        click.echo(f"  category:   {info.category}")
        click.echo(f"  parameters: {', '.join(info.parameters) or '-'}")
        click.echo(f"  entropy:    {info.entropy_order}")
        click.echo(f"  rate:       {info.rate}")
        if info.aliases:
            click.echo(f"  aliases:    {', '.join(info.aliases)}")
        return

    infos = get_classes_by_category(category) if category else list(CLASS_REGISTRY.values())
    width = max(len(i.name) for i in infos)
    for info in infos:
        click.echo(f"{info.name.ljust(width)}  [{info.category}] {info.display_name}: {info.rate}")
