"""
Generate Command

Materializes a family window (or a tessellation patch) and writes it as JSON.
"""

from pathlib import Path

import click

from ..core.errors import TessellationError
from ..core.managers.graph_manager import GraphManager
from ..core.tessellation import TessellationFamily
from ..utils.resolve_path import resolve_path
from .common import CommandRun, io_options, library_errors, measure_option, radius_option


@click.command()
@click.argument("input_")
@radius_option
@measure_option
@click.option(
    "--tessellation",
    is_flag=True,
    help="Write the patch with faces (tessellation kinds only)",
)
@io_options
@library_errors
def generate(input_, radius, measure, tessellation, config_path, save_config, output, csv_path):
    """Write the window B_R of a family spec as graph JSON"""

    run = CommandRun(
        "generate", input_, config_path, output, csv_path, radius=radius, measure=measure
    )
    cfg = run.config
    target = resolve_path(cfg.output, f"{run.family.kind}.json")

    if tessellation:
        family = run.family
        if not isinstance(family, TessellationFamily):
            raise TessellationError(f"'{family.kind}' does not produce a tessellation patch")
        family.prepare(cfg.radius)
        if target is None:
            click.echo(GraphManager.render(GraphManager.tessellation_dict(family.patch)), nl=False)
        else:
            GraphManager(target).write_tessellation(family.patch)
        click.echo(f"✅ Patch with {family.patch.vertex_count} vertices generated", err=True)
    else:
        window = run.family.materialize(cfg.radius)
        if target is None:
            click.echo(GraphManager.render(GraphManager.to_dict(window.graph)), nl=False)
        else:
            GraphManager(target).write(window.graph)
        click.echo(f"✅ Window R={cfg.radius} with {window.size} vertices generated", err=True)

    if target is not None:
        click.echo(f"📁 Written to {target}", err=True)
    if save_config:
        run.toml_manager.save_config(cfg, Path(save_config))

