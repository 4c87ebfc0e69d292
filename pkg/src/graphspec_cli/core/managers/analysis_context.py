from pathlib import Path
import tomllib

from ...config import CONFIG_FILENAME, read_config_table


class AnalysisContext:
    """Discovers the analysis config file and provides its defaults."""

    def __init__(self, start_dir: Path, config_path: Path | None = None):
        if config_path is not None:
            if not config_path.exists():
                raise FileNotFoundError(f"Config file not found at {config_path}")
            self.config_path: Path | None = config_path
        else:
            self.config_path = self._find_config(start_dir)

    def _find_config(self, start_path: Path) -> Path | None:
        """Walk up directory tree to find graphspec.toml or a [tool.graphspec] table"""
        current = start_path.resolve()
        while True:
            candidate = current / CONFIG_FILENAME
            if candidate.exists():
                return candidate
            toml_path = current / "pyproject.toml"
            if toml_path.exists() and self._is_graphspec_project(toml_path):
                return toml_path
            if current == current.parent:
                return None
            current = current.parent

    def _is_graphspec_project(self, toml_path: Path) -> bool:
        """Check if pyproject.toml carries a [tool.graphspec] table"""
        try:
            with open(toml_path, "rb") as f:
                data = tomllib.load(f)
            return "graphspec" in data.get("tool", {})
        except Exception:
            # If we can't read/parse the toml, it's not ours
            return False

    @property
    def found(self) -> bool:
        return self.config_path is not None

    @property
    def project_root(self) -> Path:
        if self.config_path is None:
            return Path.cwd()
        return self.config_path.parent

    @property
    def defaults(self) -> dict:
        """
        Analysis defaults from the discovered file.

        Returns:
            Dictionary of config keys, empty when no file was found

        Raises:
            ValueError: If the file is not valid TOML
        """
        if self.config_path is None:
            return {}
        return read_config_table(self.config_path)
