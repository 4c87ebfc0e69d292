"""
Cheeger Command

Isoperimetric constants of family windows: exhaustive, sweep, along a
radius sequence, or at infinity.
"""

import click

from ..config import EXHAUSTIVE_LIMIT
from ..core.cheeger import (
    alpha_dichotomy_check,
    cheeger_at_infinity,
    cheeger_exhaustive,
    cheeger_family,
    cheeger_inequality_check,
    cheeger_sweep,
)
from .common import (
    CommandRun,
    io_options,
    library_errors,
    measure_option,
    radii_option,
    radius_option,
)

MODES = ("auto", "exhaustive", "sweep", "family", "infinity", "dichotomy")


@click.command()
@click.argument("input_")
@radius_option
@measure_option
@radii_option
@click.option("--mode", type=click.Choice(MODES), default="auto", show_default=True)
@click.option("--inner", "-K", type=int, default=0, show_default=True, help="K for --mode infinity")
@io_options
@library_errors
def cheeger(input_, radius, measure, radii, mode, inner, config_path, save_config, output, csv_path):
    """Cheeger constant of a graph file or family window"""

    run = CommandRun(
        "cheeger",
        input_,
        config_path,
        output,
        csv_path,
        radius=radius,
        measure=measure,
        radii=radii,
    )
    cfg = run.config
    family = run.family
    report = run.report
    rows = []

    if mode == "auto":
        size = family.materialize(cfg.radius).ball_size(cfg.radius)
        mode = "exhaustive" if size <= EXHAUSTIVE_LIMIT else "sweep"
        click.echo(f"✓ {size} vertices in B_{cfg.radius}: using {mode} mode", err=True)

    if mode == "exhaustive":
        result = cheeger_exhaustive(family, cfg.radius)
        report.add("cheeger", result, "cheeger.cheeger_exhaustive")
        inequality = cheeger_inequality_check(family, cfg.radius)
        report.add("inequality", inequality, "cheeger.cheeger_inequality_check")
        rows = [(cfg.radius, result.value)]
    elif mode == "sweep":
        result = cheeger_sweep(family, cfg.radius)
        report.add("cheeger", result, "cheeger.cheeger_sweep")
        rows = [(cfg.radius, result.value)]
    elif mode == "family":
        radii = cfg.radii or list(range(1, cfg.radius + 1))
        series = cheeger_family(family, radii)
        report.add("series", series, "cheeger.cheeger_family")
        report.add("limit", series.limit, "cheeger.cheeger_family")
        rows = list(zip(series.radii, series.values))
    elif mode == "infinity":
        result = cheeger_at_infinity(family, inner, cfg.radius)
        report.add("cheeger_at_infinity", result, "cheeger.cheeger_at_infinity")
        rows = [(cfg.radius, result.value)]
    else:
        radii = cfg.radii or list(range(2, cfg.radius + 1, 2))
        check = alpha_dichotomy_check(family, radii, cfg.t_grid)
        report.add("dichotomy", check, "cheeger.alpha_dichotomy_check")
        rows = [(radii[-1], check.alpha)]

    run.finish(save_config, ["radius", "value"], rows)
    click.echo(f"✅ Cheeger ({mode}) done", err=True)
