import logging
import sys

import click

from ._version import __version__
from .commands.common import ViolationsFound
from .commands.info import info
from .commands.metric import metric
from .commands.growth import growth
from .commands.spectra import spectra
from .commands.cheeger import cheeger
from .commands.heatcheck import heatcheck
from .commands.curvature import curvature
from .commands.generate import generate


class AnalysisGroup(click.Group):
    """Group whose sub-command usage errors exit with 1 like any bad input."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = 1
            raise


@click.group(cls=AnalysisGroup)
@click.version_option(__version__, prog_name="graphspec")
@click.option("--verbose", "-v", is_flag=True, help="Log debug records to stderr")
def cli(verbose: bool):
    """Spectral and geometric analysis of weighted graphs and their exhaustions"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


cli.add_command(info)
cli.add_command(metric)
cli.add_command(growth)
cli.add_command(spectra)
cli.add_command(cheeger)
cli.add_command(heatcheck)
cli.add_command(curvature)
cli.add_command(generate)


def main(argv: list[str] | None = None) -> None:
    """Console entry point: exit 0 on success, 1 on bad input, 2 on violations."""
    try:
        code = cli.main(args=argv, prog_name="graphspec", standalone_mode=False)
    except ViolationsFound as e:
        e.show()
        sys.exit(2)
    except click.ClickException as e:
        e.show()
        sys.exit(1)
    except click.Abort:
        click.echo("Aborted!", err=True)
        sys.exit(1)
    sys.exit(code if isinstance(code, int) else 0)
