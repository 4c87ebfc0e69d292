"""
Exception types raised by the graphspec core.

Commands catch these and turn them into ``click.ClickException`` so the CLI
exits with code 1 on bad input.
"""


class GraphSpecError(Exception):
    """Base class for all graphspec errors."""


class GraphFormatError(GraphSpecError, ValueError):
    """Malformed graph input: bad JSON, inconsistent ids, self-loops, duplicates."""


class MetricError(GraphSpecError, ValueError):
    """Invalid edge weighting or pseudo metric input."""


class LipschitzError(GraphSpecError, ValueError):
    """A function violates its own Lipschitz bound."""

    def __init__(self, message: str, witness: tuple[int, int]):
        super().__init__(message)
        self.witness = witness


class WindowTooSmallError(GraphSpecError, RuntimeError):
    """A materialized window cannot hold the requested ball exactly."""


class SpectralSingularityError(GraphSpecError, ValueError):
    """A resolvent parameter lies (numerically) in the spectrum."""


class TessellationError(GraphSpecError, ValueError):
    """Invalid tessellation parameters or an inconsistent patch."""


class FamilySpecError(GraphSpecError, ValueError):
    """A family spec could not be parsed or names unknown parameters."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ExhaustiveLimitError(GraphSpecError, ValueError):
    """Subset enumeration requested on a window above the exhaustive cap."""
