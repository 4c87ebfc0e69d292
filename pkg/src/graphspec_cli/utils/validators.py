import math

from ..config import MeasureChoice, MetricChoice


def validate_radius(radius) -> tuple[bool, str]:
    """
    Validate a window radius.

    Returns: (is_valid, error_message)
    """
    if radius is None:
        return False, "Radius cannot be empty"
    if isinstance(radius, bool) or not isinstance(radius, int):
        return False, f"Radius must be an integer, got {radius!r}"
    if radius < 0:
        return False, f"Radius must be >= 0, got {radius}"
    return True, ""


def validate_buffer(buffer) -> tuple[bool, str]:
    """
    Validate a truncation buffer (None means "same as the radius").

    Returns: (is_valid, error_message)
    """
    if buffer is None:
        return True, ""
    return validate_radius(buffer)


def validate_radii(radii) -> tuple[bool, str]:
    """
    Validate a radius list for exhaustion series.

    Returns: (is_valid, error_message)
    """
    if not radii:
        return False, "At least one radius is required"
    for r in radii:
        ok, message = validate_radius(r)
        if not ok:
            return False, message
    if list(radii) != sorted(set(radii)):
        return False, "Radii must be strictly increasing"
    return True, ""


def validate_positive(value, name: str = "Value") -> tuple[bool, str]:
    """
    Validate a finite positive real.

    Returns: (is_valid, error_message)
    """
    try:
        number = float(value)
    except (TypeError, ValueError):
        return False, f"{name} must be a number, got {value!r}"
    if not math.isfinite(number) or number <= 0:
        return False, f"{name} must be a finite positive number, got {value}"
    return True, ""


def validate_epsilon(epsilon) -> tuple[bool, str]:
    return validate_positive(epsilon, "Epsilon")


def validate_beta(beta) -> tuple[bool, str]:
    return validate_positive(beta, "Beta")


def validate_t_grid(t_grid) -> tuple[bool, str]:
    """
    Validate a time grid: nonempty, nonnegative, finite.

    Returns: (is_valid, error_message)
    """
    if not t_grid:
        return False, "Time grid cannot be empty"
    for t in t_grid:
        try:
            number = float(t)
        except (TypeError, ValueError):
            return False, f"Time grid entries must be numbers, got {t!r}"
        if not math.isfinite(number) or number < 0:
            return False, f"Time grid entries must be finite and >= 0, got {t}"
    return True, ""


def validate_samples(samples) -> tuple[bool, str]:
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        return False, f"Sample count must be a positive integer, got {samples!r}"
    return True, ""


def validate_metric(metric: str) -> tuple[bool, str]:
    """
    Validate a metric choice.

    Returns: (is_valid, error_message)
    """
    known = [choice.value for choice in MetricChoice]
    if metric not in known:
        return False, f"Unknown metric '{metric}' (choose from {', '.join(known)})"
    return True, ""


def validate_measure(measure: str) -> tuple[bool, str]:
    known = [choice.value for choice in MeasureChoice]
    if measure not in known:
        return False, f"Unknown measure '{measure}' (choose from {', '.join(known)})"
    return True, ""


# Mapping of parameter names to their validator functions
PARAM_VALIDATORS = {
    "radius": validate_radius,
    "buffer": validate_buffer,
    "radii": validate_radii,
    "epsilon": validate_epsilon,
    "beta": validate_beta,
    "t_grid": validate_t_grid,
    "samples": validate_samples,
    "metric": validate_metric,
    "measure": validate_measure,
}


def validate_params(**params) -> None:
    """
    Validate multiple parameters based on their names.

    Automatically uses the appropriate validator function based on parameter name.
    Raises click.BadParameter if validation fails.

    Example:
        validate_params(radius=8, epsilon=0.5, metric="natural")
    """
    import click

    for param_name, value in params.items():
        validator_func = PARAM_VALIDATORS.get(param_name)
        if validator_func:
            is_valid, error_message = validator_func(value)
            if not is_valid:
                raise click.BadParameter(
                    error_message, param_hint=f"'--{param_name.replace('_', '-')}'"
                )
