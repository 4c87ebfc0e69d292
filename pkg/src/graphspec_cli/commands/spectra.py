"""
Spectra Command

Spectrum of the Dirichlet truncation of a graph or family, with the l^p
spectral bounds, the disk and bipartite-symmetry checks and an optional
exhaustion series.
"""

import click

from ..core.operator import assemble, truncate
from ..core.spectra import (
    bipartite_symmetry_check,
    bottom_exhaustion,
    disk_check,
    spectral_report,
)
from .common import (
    CommandRun,
    io_options,
    library_errors,
    measure_option,
    radii_option,
    radius_option,
    t_grid_option,
)


@click.command()
@click.argument("input_")
@radius_option
@measure_option
@t_grid_option
@radii_option
@io_options
@library_errors
def spectra(input_, radius, measure, t_grid, radii, config_path, save_config, output, csv_path):
    """Eigenvalues and spectral bounds of a graph file or family window"""

    run = CommandRun(
        "spectra",
        input_,
        config_path,
        output,
        csv_path,
        radius=radius,
        measure=measure,
        t_grid=t_grid,
        radii=radii,
    )
    cfg = run.config
    tr = truncate(run.family, cfg.radius, 0)
    L = assemble(tr)
    click.echo(
        f"✓ Truncation of {run.family.spec} to R={cfg.radius}: {tr.size} vertices "
        f"({'dense' if L.is_dense else 'sparse'} solver)",
        err=True,
    )

    spec = spectral_report(L, cfg.t_grid)
    report = run.report
    report.add("spectrum", spec, "spectra.spectral_report")
    report.add("eigenvalues", spec.eigenvalues, "spectra.eigenvalues")
    report.add("bottom", spec.bottom, "spectra.eigenvalues")
    report.add("lambda_hat", spec.lambda_hat, "spectra.spectral_bounds")

    if spec.normalized:
        report.add("disk", "pass" if disk_check(spec) else "fail", "spectra.disk_check")
    if spec.complete:
        symmetry = bipartite_symmetry_check(L)
        report.add("symmetry", "pass" if symmetry.passed else "fail", "spectra.bipartite_symmetry_check")
        report.add("symmetry_detail", symmetry, "spectra.bipartite_symmetry_check")

    if cfg.radii and not run.family.is_finite:
        series = bottom_exhaustion(run.family, cfg.radii)
        report.add("exhaustion", series, "spectra.bottom_exhaustion")

    rows = [(i, float(value)) for i, value in enumerate(spec.eigenvalues)]
    run.finish(save_config, ["index", "eigenvalue"], rows)
    click.echo(f"✅ Bottom of spectrum {spec.bottom:.6g}", err=True)
