"""
Option sets and input plumbing shared by the analysis commands.
"""

import functools
import logging
from pathlib import Path

import click

from ..config import AnalysisConfig, MeasureChoice, MetricChoice
from ..core.errors import GraphSpecError
from ..core.generators import FiniteFamily, GraphFamily, build_family
from ..core.managers.analysis_context import AnalysisContext
from ..core.managers.graph_manager import GraphManager
from ..core.managers.report_manager import ReportManager
from ..core.managers.toml_manager import TOMLManager
from ..utils.family_parser import looks_like_family_spec, parse_family_spec
from ..utils.name_converter import normalize_choice
from ..utils.resolve_path import resolve_path
from ..utils.validators import validate_params

logger = logging.getLogger(__name__)


class ViolationsFound(click.ClickException):
    """A bound check found violations; the report is already written."""

    exit_code = 2


def _float_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'")


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'")


def _choice(ctx, param, value):
    return None if value is None else normalize_choice(value)


def io_options(f):
    """--config, --save-config, --output and --csv."""
    f = click.option(
        "--csv", "csv_path", default=None, help="Also write the main table as CSV to this path"
    )(f)
    f = click.option(
        "--output", "-o", default=None, help="Report path (default: print to stdout)"
    )(f)
    f = click.option(
        "--save-config",
        default=None,
        help="Write the effective configuration as TOML to this path",
    )(f)
    f = click.option(
        "--config",
        "config_path",
        default=None,
        help="Config file (default: nearest graphspec.toml or [tool.graphspec])",
    )(f)
    return f


def measure_option(f):
    return click.option(
        "--measure",
        default=None,
        callback=_choice,
        help=f"Vertex measure ({', '.join(c.value for c in MeasureChoice)})",
    )(f)


def metric_option(f):
    return click.option(
        "--metric",
        default=None,
        callback=_choice,
        help=f"Pseudo metric ({', '.join(c.value for c in MetricChoice)})",
    )(f)


def radius_option(f):
    return click.option(
        "--radius", "-R", type=int, default=None, help="Window radius (default: R in the spec, else 8)"
    )(f)


def t_grid_option(f):
    return click.option(
        "--t-grid", default=None, callback=_float_list, help="Comma-separated times"
    )(f)


def radii_option(f):
    return click.option(
        "--radii", default=None, callback=_int_list, help="Comma-separated radii"
    )(f)


def library_errors(func):
    """Turn library errors into ClickException (exit code 1)."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            raise
        except (GraphSpecError, FileNotFoundError, ValueError) as e:
            raise click.ClickException(str(e))

    return wrapper


class CommandRun:
    """
    One command invocation: effective config, loaded input and report.

    Precedence of settings: command-line options, then the config file, then
    the defaults of ``AnalysisConfig``; the radius falls back to ``R`` in the
    family spec before the default.

    Graph files are validated on load unless ``strict`` is False; only
    ``info`` reads invalid graphs, to report what is wrong with them.
    """

    def __init__(
        self,
        command: str,
        input_: str,
        config_path: str | None = None,
        output: str | None = None,
        csv_path: str | None = None,
        strict: bool = True,
        **overrides,
    ) -> None:
        ctx = AnalysisContext(Path.cwd(), Path(config_path) if config_path else None)
        self.toml_manager = TOMLManager(ctx)
        if ctx.found:
            click.echo(f"📁 Using config {ctx.config_path}", err=True)

        file_defaults = self.toml_manager.load_defaults()
        validate_params(**{k: v for k, v in overrides.items() if v is not None})
        validate_params(**file_defaults)

        self.family: GraphFamily | None = None
        self.graph = None
        spec_radius = None
        if looks_like_family_spec(input_):
            parsed = parse_family_spec(input_)
            spec_radius = parsed.params.get("R")
            self.family = build_family(parsed.kind, parsed.params)
        else:
            self.graph = GraphManager(Path(input_)).read(strict=strict)
            self.family = FiniteFamily(self.graph, name=Path(input_).stem)

        if overrides.get("radius") is None and spec_radius is not None:
            overrides["radius"] = int(spec_radius)
        if self.family.is_finite and overrides.get("radius") is None:
            base = getattr(self.family, "base", self.family)
            overrides["radius"] = max(base.graph.vertex_count - 1, 0)

        self.config = (
            AnalysisConfig(command=command, input=input_)
            .merged(file_defaults)
            .merged({**overrides, "output": output, "csv": csv_path})
        )
        if self.config.measure != MeasureChoice.GIVEN.value:
            self.family = self.family.with_measure(self.config.measure)
        self.report = ReportManager(self.config)
        logger.debug("effective config: %s", self.config.to_dict())

    @property
    def metric(self) -> MetricChoice:
        return MetricChoice(self.config.metric)

    def finish(self, save_config: str | None, csv_columns=None, csv_rows=None) -> None:
        """Write the report, the optional CSV and the optional saved config."""
        self.report.write(resolve_path(self.config.output, f"{self.config.command}.json"))
        if self.config.csv and csv_columns is not None:
            csv_path = resolve_path(self.config.csv, f"{self.config.command}.csv")
            if csv_path is not None:
                self.report.write_csv(csv_path, csv_columns, csv_rows or [])
        if save_config:
            self.toml_manager.save_config(self.config, Path(save_config))
