"""
Info Command

Summarizes a graph file or a family window: sizes, invariant violations,
normalizing measure and bounded-geometry data.
"""

from pathlib import Path

import click

from ..core.graph import (
    bipartition,
    bounded_geometry_ratio,
    combinatorial_degree,
    normalizing_measure,
    operator_norm_bound,
    validate,
)
from ..core.managers.graph_manager import GraphManager
from .common import CommandRun, io_options, library_errors, measure_option, radius_option


@click.command()
@click.argument("input_")
@radius_option
@measure_option
@click.option("--export", default=None, help="Write the (window) graph as canonical JSON")
@io_options
@library_errors
def info(input_, radius, measure, export, config_path, save_config, output, csv_path):
    """Describe a graph file or a family spec like tree:d=3,R=4"""

    run = CommandRun(
        "info",
        input_,
        config_path,
        output,
        csv_path,
        strict=False,
        radius=radius,
        measure=measure,
    )
    if run.graph is not None and run.config.measure == "given":
        graph = run.graph
        boundary = False
    else:
        window = run.family.materialize(run.config.radius)
        graph = window.graph
        boundary = window.has_boundary
    click.echo(f"✓ Loaded {run.family.spec}: {graph.vertex_count} vertices", err=True)

    violations = validate(graph)
    for v in violations:
        click.echo(f"⚠️  {v}", err=True)

    n = normalizing_measure(graph)
    parts = bipartition(graph)
    degree = combinatorial_degree(graph)
    report = run.report
    report.add("vertices", graph.vertex_count, "graph-core.WeightedGraph")
    report.add("edges", len(graph.edges), "graph-core.WeightedGraph")
    report.add("has_boundary", boundary, "generators.materialize")
    report.add("violations", [str(v) for v in violations], "graph-core.validate")
    report.add(
        "normalizing_measure",
        {"min": float(n.min()) if n.size else 0.0, "max": float(n.max()) if n.size else 0.0},
        "graph-core.normalizing_measure",
    )
    report.add(
        "max_degree", int(degree.max()) if degree.size else 0, "graph-core.combinatorial_degree"
    )
    report.add(
        "bounded_geometry_ratio", bounded_geometry_ratio(graph), "graph-core.bounded_geometry_ratio"
    )
    report.add("operator_norm_bound", operator_norm_bound(graph), "graph-core.operator_norm_bound")
    report.add("bipartite", parts is not None, "graph-core.bipartition")
    if parts is not None:
        report.add("parts", [len(parts.part1), len(parts.part2)], "graph-core.bipartition")

    if export:
        GraphManager(Path(export)).write(graph)
        click.echo(f"📁 Graph written to {export}", err=True)

    rows = [(i, float(graph.m[i]), float(n[i]), int(degree[i])) for i in range(graph.vertex_count)]
    run.finish(save_config, ["vertex", "m", "n", "degree"], rows)
    if violations:
        raise click.ClickException(f"{input_}: {len(violations)} invariant violations")
    click.echo("✅ info done (0 violations)", err=True)
