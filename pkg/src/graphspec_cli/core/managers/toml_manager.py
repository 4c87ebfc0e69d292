import logging
from pathlib import Path

import click
import tomllib
import tomli_w

from ...config import AnalysisConfig
from .analysis_context import AnalysisContext

logger = logging.getLogger(__name__)

# Keys a config file may set; everything else is run-specific
FILE_KEYS = ("measure", "metric", "buffer", "t_grid", "seed", "samples", "epsilon", "beta")


class TOMLManager:
    def __init__(self, ctx: AnalysisContext) -> None:
        self.toml_path = ctx.config_path
        self.ctx = ctx

    def write(self, data: dict, path: Path | None = None) -> None:
        """Write data to a TOML file (the discovered one by default)."""
        target = path or self.toml_path
        with open(target, "wb") as f:
            tomli_w.dump(data, f)

    def load_defaults(self) -> dict:
        """
        Config-file defaults restricted to the keys a file may set.

        Unknown keys are logged and dropped.
        """
        table = self.ctx.defaults
        unknown = sorted(set(table) - set(FILE_KEYS))
        if unknown:
            logger.warning(
                "ignoring unknown config keys in %s: %s", self.toml_path, ", ".join(unknown)
            )
        return {key: table[key] for key in FILE_KEYS if key in table}

    def save_config(self, config: AnalysisConfig, path: Path) -> None:
        """
        Write the effective configuration as TOML.

        A ``pyproject.toml`` target keeps its other tables and gets the keys
        under ``[tool.graphspec]``; any other path is written standalone.
        """
        table = {
            key: value
            for key, value in config.to_dict().items()
            if key in FILE_KEYS and value is not None
        }

        if path.name == "pyproject.toml" and path.exists():
            with open(path, "rb") as f:
                data = tomllib.load(f)
            data.setdefault("tool", {})["graphspec"] = table
        else:
            data = table

        click.echo(f"📁 Writing config to {path}...", err=True)
        self.write(data, path)
        logger.debug("saved config keys %s to %s", sorted(table), path)
