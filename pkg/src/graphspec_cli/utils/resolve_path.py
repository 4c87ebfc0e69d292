from pathlib import Path
import click


def resolve_path(destination: str | None, default_name: str) -> Path | None:
    """
    Resolve and validate an output path for a report or graph file.

    Args:
        destination: Target path. None disables the output, "-" means stdout
            (returned as None as well), a directory gets ``default_name``
            appended.
        default_name: File name used when ``destination`` is a directory

    Returns:
        Resolved Path object, or None when nothing is written to disk

    Raises:
        click.ClickException: If the parent directory does not exist

    Examples:
        >>> resolve_path(None, "report.json")  # No file output
        >>> resolve_path("out/", "report.json")  # Returns out/report.json
        >>> resolve_path("run1.json", "report.json")  # Returns run1.json
    """
    if destination is None or destination == "-":
        return None

    dest_path = Path(destination)
    if dest_path.is_dir() or destination.endswith(("/", "\\")):
        dest_path = dest_path / default_name

    # Validate the parent exists; reports never create directory trees
    if not dest_path.parent.exists():
        raise click.ClickException(f"Output directory {dest_path.parent} does not exist")

    if dest_path.exists() and dest_path.is_dir():
        raise click.ClickException(f"{dest_path} is a directory, not a file")

    return dest_path
