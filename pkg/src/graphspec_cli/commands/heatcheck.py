"""
Heatcheck Command

Scans the off-diagonal heat-kernel and resolvent bounds over all pairs of a
window. Exits with code 2 when any bound is violated.
"""

import click

from ..config import HEAT_CHECK_T_GRID
from ..core.operator import (
    feynman_kac_domination,
    feynman_kac_mc,
    heat_bound_beta_check,
    heat_bound_check,
    resolvent_bound_check,
)
from .common import (
    CommandRun,
    ViolationsFound,
    io_options,
    library_errors,
    measure_option,
    metric_option,
    radius_option,
    t_grid_option,
)


PROVENANCE = {
    "heat-log-decay": "operator.heat_bound_check",
    "heat-beta": "operator.heat_bound_beta_check",
    "resolvent-decay": "operator.resolvent_bound_check",
}


@click.command()
@click.argument("input_")
@radius_option
@measure_option
@metric_option
@t_grid_option
@click.option("--buffer", type=int, default=None, help="Extra layers materialized past R")
@click.option("--beta", type=float, default=None, help="Also scan the e^(-beta d) bound")
@click.option(
    "--resolvent",
    "epsilons",
    type=float,
    multiple=True,
    help="Also scan the resolvent bound for this epsilon (repeatable)",
)
@click.option(
    "--mc",
    nargs=3,
    type=(float, int, int),
    default=None,
    help="Feynman-Kac Monte Carlo for T X Y",
)
@click.option("--samples", type=int, default=None, help="Monte Carlo samples")
@click.option("--seed", type=int, default=None, help="Monte Carlo seed")
@io_options
@library_errors
def heatcheck(
    input_,
    radius,
    measure,
    metric,
    t_grid,
    buffer,
    beta,
    epsilons,
    mc,
    samples,
    seed,
    config_path,
    save_config,
    output,
    csv_path,
):
    """Check heat-kernel and resolvent decay bounds on a family window"""

    run = CommandRun(
        "heatcheck",
        input_,
        config_path,
        output,
        csv_path,
        radius=radius,
        measure=measure,
        metric=metric,
        t_grid=t_grid or list(HEAT_CHECK_T_GRID),
        buffer=buffer,
        beta=beta,
        samples=samples,
        seed=seed,
    )
    cfg = run.config
    times = cfg.t_grid
    report = run.report

    checks = [heat_bound_check(run.family, cfg.radius, cfg.buffer, times, run.metric)]
    if beta is not None:
        checks.append(
            heat_bound_beta_check(run.family, cfg.radius, cfg.buffer, cfg.beta, times, run.metric)
        )
    for eps in epsilons:
        checks.append(resolvent_bound_check(run.family, cfg.radius, cfg.buffer, eps, run.metric))

    rows = []
    for check in checks:
        key = check.check if check.check != "resolvent-decay" else (
            f"resolvent-decay:eps={check.parameters['epsilon']:g}"
        )
        report.add(key, check, PROVENANCE[check.check])
        report.add_violations(v.to_dict() | {"check": key} for v in check.violations)
        marker = "✓" if check.passed else "❌"
        click.echo(
            f"{marker} {key}: {check.pairs_checked} pairs, "
            f"{len(check.violations)} violations, worst ratio {check.worst_ratio:.6g}",
            err=True,
        )
        rows.append((key, check.pairs_checked, len(check.violations), check.worst_ratio))

    if mc is not None:
        t, x, y = mc
        estimate = feynman_kac_mc(run.family, cfg.radius, t, x, y, cfg.samples, cfg.seed)
        report.add("feynman_kac", estimate, "operator.feynman_kac_mc")
        report.add("feynman_kac_within_ci", estimate.within_ci, "operator.feynman_kac_mc")
        if run.family.c:
            domination = feynman_kac_domination(
                run.family, cfg.radius, t, x, y, cfg.samples, cfg.seed
            )
            report.add("domination", domination.holds, "operator.feynman_kac_domination")

    run.finish(save_config, ["check", "pairs", "violations", "worst_ratio"], rows)

    total = sum(len(c.violations) for c in checks)
    if total:
        raise ViolationsFound(f"{total} bound violations found")
    click.echo("✅ No bound violations", err=True)
