"""
Growth Command

Volume growth of metric balls around a vertex, plus the uniform
subexponential-growth certificate and its consequences.
"""

import click

from ..core.growth import (
    bounded_degree_check,
    growth_consequence_check,
    sample_centers,
    subexp_certificate,
    volume_profile,
)
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
@click.option("--center", type=int, default=0, show_default=True, help="Ball center (BFS id)")
@click.option("--epsilon", type=float, default=None, help="Exponent of the certificate")
@click.option("--seed", type=int, default=None, help="Seed for center sampling")
@click.option("--uniform/--no-uniform", default=True, help="Run the certificate over centers")
@io_options
@library_errors
def growth(
    input_,
    radius,
    measure,
    metric,
    center,
    epsilon,
    seed,
    uniform,
    config_path,
    save_config,
    output,
    csv_path,
):
    """Measure ball growth m(B_r(x)) on a graph file or family"""

    run = CommandRun(
        "growth",
        input_,
        config_path,
        output,
        csv_path,
        radius=radius,
        measure=measure,
        metric=metric,
        epsilon=epsilon,
        seed=seed,
    )
    cfg = run.config
    click.echo(
        f"✓ Growth of {run.family.spec} in the {cfg.metric} metric up to R={cfg.radius}",
        err=True,
    )

    profile = volume_profile(run.family, run.metric, center, cfg.radius)
    report = run.report
    report.add("profile", profile, "growth.volume_profile")
    report.add("exp_growth_rate", profile.rate, "growth.exp_growth_rate")

    if uniform:
        centers = sample_centers(run.family, cfg.radius // 2, cfg.seed)
        certificate = subexp_certificate(
            run.family, run.metric, cfg.epsilon, cfg.radius, centers
        )
        consequences = growth_consequence_check(
            run.family, run.metric, cfg.epsilon, cfg.radius, centers
        )
        check = bounded_degree_check(run.family, run.metric, centers, cfg.radius)
        report.add("subexp_certificate", certificate, "growth.subexp_certificate")
        report.add("verdict", certificate.verdict, "growth.subexp_certificate")
        report.add("consequences", consequences, "growth.growth_consequence_check")
        report.add("bounded_degree", check, "growth.bounded_degree_check")
        click.echo(f"✓ {len(centers)} centers: {certificate.verdict}", err=True)

    run.finish(save_config, ["r", "volume", "count"], profile.rows())
    click.echo(f"✅ Growth rate {profile.rate:.6g}", err=True)
