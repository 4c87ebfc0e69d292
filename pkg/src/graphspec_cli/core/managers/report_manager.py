import csv
import dataclasses
import json
import logging
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from ..._version import __version__
from ...config import AnalysisConfig

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12


def canonical(value):
    """
    Convert a result value into JSON-ready data with fixed float precision.

    Floats keep 12 significant digits; non-finite floats become the strings
    "inf", "-inf" and "nan"; Fractions become "p/q" strings.
    """
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return float(f"{number:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": canonical(value.real), "im": canonical(value.imag)}
    if isinstance(value, np.ndarray):
        return [canonical(v) for v in value.tolist()]
    if hasattr(value, "_asdict"):
        return {k: canonical(v) for k, v in value._asdict().items()}
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: canonical(getattr(value, f.name))
            for f in dataclasses.fields(value)
            if f.repr
        }
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [canonical(v) for v in items]
    if value is None or isinstance(value, str):
        return value
    return str(value)


class ReportManager:
    """
    Collects headline results with their provenance and writes the report.

    Every report carries the toolkit version and the full effective config;
    output is byte-identical for identical configs and seeds.
    """

    def __init__(self, config: AnalysisConfig) -> None:
        self.config = config
        self.results: dict = {}
        self.provenance: dict[str, str] = {}
        self.violations: list = []

    def add(self, key: str, value, provenance: str) -> None:
        """Record a result and the module operation that produced it."""
        self.results[key] = value
        self.provenance[key] = provenance

    def add_violations(self, violations) -> None:
        self.violations.extend(violations)

    @property
    def header(self) -> dict:
        return {
            "tool": "graphspec-cli",
            "version": __version__,
            "config": self.config.to_dict(),
        }

    def to_dict(self) -> dict:
        return {
            "header": self.header,
            "results": self.results,
            "provenance": self.provenance,
            "violations": self.violations,
        }

    def render(self) -> str:
        return json.dumps(canonical(self.to_dict()), sort_keys=True, indent=2) + "\n"

    def write(self, path: Path | None) -> None:
        """Write the JSON report to ``path``, or to stdout when None."""
        text = self.render()
        if path is None:
            click.echo(text, nl=False)
            return
        with open(path, "w") as f:
            f.write(text)
        click.echo(f"📁 Report written to {path}", err=True)
        logger.debug("report with %d results written to %s", len(self.results), path)

    def write_csv(self, path: Path, columns: list[str], rows) -> None:
        """Write one CSV table; floats use the report precision."""
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([canonical(v) for v in row])
        click.echo(f"📁 CSV written to {path}", err=True)
