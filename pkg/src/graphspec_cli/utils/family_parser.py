import re
from typing import NamedTuple

from ..core.errors import FamilySpecError


class FamilySpec(NamedTuple):
    """A parsed ``kind:key=val,...`` family spec."""

    kind: str
    params: dict

    def __str__(self) -> str:
        """Return the spec in canonical form: kind:key=val,key=val"""
        return format_family_spec(self.kind, self.params)


_KIND = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VALUE = re.compile(r"[^,=:\s]+")
_INT = re.compile(r"[+-]?\d+")


def coerce_value(raw: str) -> int | float | bool | str:
    """
    Convert a spec value to int, float or bool where it reads as one.

    Examples:
        >>> coerce_value("3")
        3
        >>> coerce_value("0.5")
        0.5
        >>> coerce_value("mn")
        'mn'
    """
    if _INT.fullmatch(raw):
        return int(raw)
    lowered = raw.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return float(raw)
    except ValueError:
        return raw


def parse_family_spec(text: str) -> FamilySpec:
    """
    Parse a family spec string.

    Supports formats:
        - "tree"
        - "tree:d=3,R=10"
        - "tess:p=7,q=3,measure=mn"

    Args:
        text: Spec string

    Returns:
        FamilySpec with a normalized kind and coerced values

    Raises:
        FamilySpecError: With the 0-based position of the offending character

    Examples:
        >>> parse_family_spec("tree:d=3,R=10")
        FamilySpec(kind='tree', params={'d': 3, 'R': 10})
    """
    from .name_converter import normalize_kind

    match = _KIND.match(text)
    if not match:
        raise FamilySpecError("Expected a family kind", 0)
    kind = normalize_kind(match.group(0))
    pos = match.end()
    params: dict = {}

    if pos == len(text):
        return FamilySpec(kind, params)
    if text[pos] != ":":
        raise FamilySpecError(f"Expected ':' after kind, found '{text[pos]}'", pos)
    pos += 1

    while True:
        key_match = _KEY.match(text, pos)
        if not key_match:
            raise FamilySpecError("Expected a parameter name", pos)
        key = key_match.group(0)
        if key in params:
            raise FamilySpecError(f"Duplicate parameter '{key}'", pos)
        pos = key_match.end()

        if pos >= len(text) or text[pos] != "=":
            raise FamilySpecError(f"Expected '=' after '{key}'", pos)
        pos += 1

        value_match = _VALUE.match(text, pos)
        if not value_match:
            raise FamilySpecError(f"Expected a value for '{key}'", pos)
        params[key] = coerce_value(value_match.group(0))
        pos = value_match.end()

        if pos == len(text):
            return FamilySpec(kind, params)
        if text[pos] != ",":
            raise FamilySpecError(f"Expected ',' or end of spec, found '{text[pos]}'", pos)
        pos += 1


def format_family_spec(kind: str, params: dict) -> str:
    """
    Format a kind and parameters into a spec string.

    Example:
        >>> format_family_spec("lattice", {"dim": 2, "R": 20})
        'lattice:dim=2,R=20'
    """
    if not params:
        return kind
    return f"{kind}:" + ",".join(f"{k}={v}" for k, v in params.items())


def looks_like_family_spec(text: str) -> bool:
    """True unless ``text`` names a JSON file (graph inputs are ``*.json``)."""
    return not text.lower().endswith(".json")
