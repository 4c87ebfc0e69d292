from pathlib import Path
from dataclasses import dataclass, field, asdict
from enum import Enum
import tomllib


class MetricChoice(str, Enum):
    """Supported pseudo metrics for growth and bound checks."""

    DEFAULT_INTRINSIC = "default-intrinsic"
    NATURAL = "natural"
    D1 = "d1"


class MeasureChoice(str, Enum):
    """Vertex measure used when materializing a family or reading a graph."""

    GIVEN = "given"
    M1 = "m1"
    MN = "mn"


class KernelKind(str, Enum):
    """Provenance tag of a kernel matrix."""

    HEAT = "heat"
    RESOLVENT = "resolvent"
    SQUARED_RESOLVENT = "squared-resolvent"
    TRANSITION = "transition"
    IDENTITY = "identity"


# Numerical tolerances
INTRINSIC_RTOL = 1e-12
PSD_TOL = 1e-10
DISK_TOL = 1e-9
SINGULARITY_TOL = 1e-8
BOUND_RTOL = 1e-9
BALL_TOL = 1e-12
KERNEL_ATOL = 1e-12

# Normalized bottom of spectrum counted as a strict gap above this value
LAMBDA_GAP_THRESHOLD = 0.01

# Growth windows are enlarged until exact, but never beyond this many vertices
MAX_WINDOW_VERTICES = 200_000

# Solver switch-over: full symmetric decomposition up to this many vertices
DENSE_LIMIT = 3000

# l^2 spectral bounds go through explicit heat-kernel norms up to this size
KERNEL_NORM_LIMIT = 1000

# Dense all-pairs distances up to this many vertices
DENSE_METRIC_LIMIT = 2000

# Triangle inequality is checked exhaustively up to this many vertices
TRIANGLE_EXHAUSTIVE_LIMIT = 200

# Subset enumeration cap for exhaustive Cheeger constants
EXHAUSTIVE_LIMIT = 22

# Center sampling for "uniform" growth quantifiers
CENTER_SAMPLE_LIMIT = 500
CENTER_SAMPLE_COUNT = 64

# Dichotomy verdict thresholds
ALPHA_ZERO_THRESHOLD = 0.02
GAP_STRICT_THRESHOLD = 0.02

# Geometric time grid {2^k : k = -3..5}
DEFAULT_T_GRID = tuple(2.0**k for k in range(-3, 6))

# Time grid of the heat-kernel bound scans
HEAT_CHECK_T_GRID = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)

# Monte Carlo block size; streams are split per block, not per worker
MC_BLOCK_SIZE = 10_000

CONFIG_FILENAME = "graphspec.toml"


@dataclass
class AnalysisConfig:
    """Effective configuration of one command run, embedded in every report."""

    command: str = ""
    input: str = ""
    metric: str = MetricChoice.DEFAULT_INTRINSIC.value
    measure: str = MeasureChoice.GIVEN.value
    radius: int = 8
    buffer: int | None = None
    radii: list[int] = field(default_factory=list)
    t_grid: list[float] = field(default_factory=lambda: list(DEFAULT_T_GRID))
    epsilon: float = 0.5
    beta: float = 1.0
    seed: int = 0
    samples: int = 100_000
    output: str | None = None
    csv: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def merged(self, overrides: dict) -> "AnalysisConfig":
        """Return a copy with the non-None entries of ``overrides`` applied."""
        data = self.to_dict()
        for key, value in overrides.items():
            if key in data and value is not None:
                data[key] = value
        return AnalysisConfig(**data)


def read_config_table(toml_path: Path) -> dict:
    """
    Read analysis defaults from a TOML file.

    A standalone ``graphspec.toml`` holds the keys at top level; a
    ``pyproject.toml`` holds them under ``[tool.graphspec]``.

    Args:
        toml_path: Path to the TOML file

    Returns:
        Dictionary of config keys (possibly empty)

    Raises:
        FileNotFoundError: If toml_path doesn't exist
        ValueError: If the file is not valid TOML
    """
    if not toml_path.exists():
        raise FileNotFoundError(f"Config file not found at {toml_path}")

    try:
        with open(toml_path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ValueError(f"Failed to parse {toml_path}: {e}")

    if toml_path.name == "pyproject.toml":
        return data.get("tool", {}).get("graphspec", {})
    return data
