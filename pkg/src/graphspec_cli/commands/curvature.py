"""
Curvature Command

Vertex curvature of a tessellation patch, its classification and the
checks each class dispatches.
"""

from pathlib import Path

import click

from ..core.errors import TessellationError
from ..core.managers.graph_manager import GraphManager
from ..core.tessellation import (
    TessellationFamily,
    curvature_report,
    euler_characteristic,
    gauss_bonnet_check,
    vertex_curvature,
)
from ..utils.family_parser import looks_like_family_spec
from .common import CommandRun, io_options, library_errors

DEFAULT_LAYERS = 6


@click.command()
@click.argument("input_")
@click.option("--layers", "-L", type=int, default=None, help="Patch layers (default: R, else 6)")
@io_options
@library_errors
def curvature(input_, layers, config_path, save_config, output, csv_path):
    """Curvature of a tessellation spec (tess:p=7,q=3, mixed, branching) or patch file"""

    run = CommandRun("curvature", input_, config_path, output, csv_path, radius=layers)

    if looks_like_family_spec(input_):
        family = run.family
        if not isinstance(family, TessellationFamily):
            raise TessellationError(
                f"'{family.kind}' is not a tessellation kind (use tess, mixed or branching)"
            )
        if layers is None and "R=" not in input_:
            layers = DEFAULT_LAYERS
        else:
            layers = run.config.radius
        family.prepare(layers)
        patch = family.patch
    else:
        patch = GraphManager(Path(input_)).read_tessellation()

    click.echo(
        f"✓ Patch {patch.label}: {patch.vertex_count} vertices, {len(patch.faces)} faces, "
        f"interior radius {patch.interior_radius}",
        err=True,
    )

    summary = curvature_report(patch)
    bonnet = gauss_bonnet_check(patch)
    report = run.report
    report.add("classification", summary.classification, "tessellation.curvature_report")
    report.add("curvature", summary, "tessellation.curvature_report")
    report.add("euler_characteristic", euler_characteristic(patch), "tessellation.euler_characteristic")
    report.add(
        "gauss_bonnet",
        {"direct": bonnet.direct, "combinatorial": bonnet.combinatorial, "agrees": bonnet.agrees},
        "tessellation.gauss_bonnet_check",
    )

    rows = []
    for x in range(patch.vertex_count):
        kappa = vertex_curvature(patch, x)
        rows.append(
            (x, int(patch.depth[x]), "boundary" if kappa is None else str(kappa))
        )
    run.finish(save_config, ["vertex", "depth", "curvature"], rows)
    click.echo(f"✅ {summary.classification} curvature", err=True)
