"""
Name conversion utilities for graphspec-cli.

Handles conversion between the spellings accepted on the command line and the
canonical names used in reports:
- Family kinds (any case, hyphens/underscores)
- Metric and measure choices
- Report keys
"""

# Spellings accepted for family kinds, mapped to the canonical kind
KIND_ALIASES = {
    "z": "lattice",
    "zd": "lattice",
    "regular_tree": "tree",
    "rapidly_branching_tree": "rbtree",
    "line_example": "line",
    "tessellation": "tess",
    "single_edge": "edge",
}


def normalize_name(name: str) -> str:
    """
    Convert input name to normalized form (lowercase, underscores).

    Examples:
        >>> normalize_name("Regular-Tree")
        'regular_tree'
        >>> normalize_name("LATTICE")
        'lattice'
    """
    return name.strip().lower().replace("-", "_")


def normalize_kind(kind: str) -> str:
    """
    Canonical family kind for an input spelling.

    Examples:
        >>> normalize_kind("Regular-Tree")
        'tree'
        >>> normalize_kind("tess")
        'tess'
    """
    normalized = normalize_name(kind)
    return KIND_ALIASES.get(normalized, normalized)


def normalize_choice(value: str) -> str:
    """
    Convert an option value to the enum spelling (lowercase, hyphens).

    Examples:
        >>> normalize_choice("Default_Intrinsic")
        'default-intrinsic'
        >>> normalize_choice("MN")
        'mn'
    """
    return value.strip().lower().replace("_", "-")


def to_report_key(name: str) -> str:
    """
    Convert a name to the snake_case key used in report JSON.

    Examples:
        >>> to_report_key("lambda-hat")
        'lambda_hat'
    """
    return normalize_name(name).replace(" ", "_")
