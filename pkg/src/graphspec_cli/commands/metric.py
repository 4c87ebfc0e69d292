"""
Metric Command

Builds a pseudo metric on a graph or family window and certifies it.
"""

import click
import numpy as np

from ..core.metric import (
    lipschitz_verify,
    metric_for,
    truncated_distance_function,
    verify_intrinsic,
)
from ..core.graph import normalizing_measure
from .common import (
    CommandRun,
    io_options,
    library_errors,
    measure_option,
    metric_option,
    radius_option,
)


@click.command()
@click.argument("input_")
@radius_option
@measure_option
@metric_option
@click.option(
    "--lipschitz",
    nargs=2,
    type=int,
    default=None,
    help="Check psi = eps (d(., Y) ^ d(X, Y)) for vertices X Y",
)
@click.option("--epsilon", type=float, default=None, help="Lipschitz constant for --lipschitz")
@io_options
@library_errors
def metric(
    input_, radius, measure, metric, lipschitz, epsilon, config_path, save_config, output, csv_path
):
    """Certify an intrinsic metric on a graph file or family window"""

    run = CommandRun(
        "metric",
        input_,
        config_path,
        output,
        csv_path,
        radius=radius,
        measure=measure,
        metric=metric,
        epsilon=epsilon,
    )
    if run.graph is not None and run.config.measure == "given":
        graph, n = run.graph, normalizing_measure(run.graph)
    else:
        window = run.family.materialize(run.config.radius)
        graph, n = window.graph, window.full_degree

    click.echo(f"✓ Building {run.metric.value} metric on {graph.vertex_count} vertices", err=True)
    d = metric_for(graph, run.metric, n=n)
    intrinsic = verify_intrinsic(graph, d)
    problems = d.check(samples=2000)

    report = run.report
    report.add("metric", d.provenance, "metric.metric_for")
    report.add("jump_size", d.jump_size, "metric.PseudoMetric.jump_size")
    report.add("intrinsic", intrinsic.intrinsic, "metric.verify_intrinsic")
    report.add("min_slack", intrinsic.min_slack, "metric.verify_intrinsic")
    report.add("worst_vertex", intrinsic.worst_vertex, "metric.verify_intrinsic")
    report.add("metric_problems", problems, "metric.PseudoMetric.check")
    report.add(
        "m_dominates_n",
        bool(np.all(graph.m >= n - 1e-12 * n)),
        "graph-core.normalizing_measure",
    )

    if lipschitz:
        x, y = lipschitz
        psi = truncated_distance_function(d, x, y, run.config.epsilon)
        report.add("lipschitz", lipschitz_verify(graph, d, psi), "metric.lipschitz_verify")

    rows = [(i, float(intrinsic.slack[i])) for i in range(graph.vertex_count)]
    run.finish(save_config, ["vertex", "slack"], rows)

    if intrinsic.intrinsic:
        click.echo("✅ Metric is intrinsic", err=True)
    else:
        click.echo(
            f"❌ Not intrinsic: slack {intrinsic.min_slack:.6g} at vertex "
            f"{intrinsic.worst_vertex}",
            err=True,
        )
