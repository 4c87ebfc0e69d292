"""
Graph and tessellation JSON I/O.

Canonical graph form:
    {"vertices": [{"id": int, "m": float, "c": float}, ...],
     "edges": [{"u": int, "v": int, "b": float}, ...]}

with ids ``0..n-1`` and every undirected edge stored once with ``u < v``.
Tessellation files add ``faces`` (cyclic vertex lists), ``boundary_faces``,
``label`` and ``layers``.
"""

import json
import logging
import math
from pathlib import Path

import numpy as np

from ..errors import GraphFormatError
from ..graph import WeightedGraph, validate
from ..tessellation import Tessellation, tessellation_from_faces

logger = logging.getLogger(__name__)


def _number(record: dict, key: str, where: str, default=None) -> float:
    if key not in record:
        if default is None:
            raise GraphFormatError(f"{where}: missing field '{key}'")
        return default
    value = record[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphFormatError(f"{where}: field '{key}' must be a number, got {value!r}")
    if not math.isfinite(value):
        raise GraphFormatError(f"{where}: field '{key}' must be finite, got {value!r}")
    return float(value)


def _integer(record: dict, key: str, where: str) -> int:
    value = record.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphFormatError(f"{where}: field '{key}' must be an integer, got {value!r}")
    return value


class GraphManager:
    """Reads and writes the canonical graph JSON."""

    def __init__(self, path: Path) -> None:
        self.path = path

    def _load(self) -> dict:
        if not self.path.exists():
            raise FileNotFoundError(f"Graph file not found: {self.path}")
        try:
            with open(self.path, "r") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise GraphFormatError(f"Invalid JSON in {self.path}: {e}")
        if not isinstance(data, dict):
            raise GraphFormatError(f"{self.path}: top level must be an object")
        return data

    @staticmethod
    def parse(data: dict) -> WeightedGraph:
        """
        Build a WeightedGraph from decoded JSON.

        Raises:
            GraphFormatError: Naming the offending vertex or edge record
        """
        vertices = data.get("vertices")
        edges = data.get("edges", [])
        if not isinstance(vertices, list):
            raise GraphFormatError("'vertices' must be a list of records")
        if not isinstance(edges, list):
            raise GraphFormatError("'edges' must be a list of records")

        n = len(vertices)
        m = np.ones(n)
        c = np.zeros(n)
        seen: set[int] = set()
        for i, record in enumerate(vertices):
            where = f"vertex record {i}"
            if not isinstance(record, dict):
                raise GraphFormatError(f"{where}: must be an object")
            vid = _integer(record, "id", where)
            if not 0 <= vid < n:
                raise GraphFormatError(f"{where}: id {vid} outside 0..{n - 1}")
            if vid in seen:
                raise GraphFormatError(f"{where}: duplicate vertex id {vid}")
            seen.add(vid)
            m[vid] = _number(record, "m", where, default=1.0)
            c[vid] = _number(record, "c", where, default=0.0)

        stored: set[tuple[int, int]] = set()
        triples = []
        for i, record in enumerate(edges):
            where = f"edge record {i}"
            if not isinstance(record, dict):
                raise GraphFormatError(f"{where}: must be an object")
            u = _integer(record, "u", where)
            v = _integer(record, "v", where)
            where = f"edge record {i} (u={u}, v={v})"
            if u == v:
                raise GraphFormatError(f"{where}: self-loop")
            if u > v:
                raise GraphFormatError(f"{where}: endpoints must satisfy u < v")
            if u < 0 or v >= n:
                raise GraphFormatError(f"{where}: references a missing vertex")
            if (u, v) in stored:
                raise GraphFormatError(f"{where}: duplicate edge")
            stored.add((u, v))
            triples.append((u, v, _number(record, "b", where)))

        return WeightedGraph.from_edges(n, triples, m=m, c=c)

    def read(self, strict: bool = True) -> WeightedGraph:
        """
        Read and parse the graph file.

        Args:
            strict: Also reject graphs that break a WeightedGraph invariant
                (non-positive b or m, negative c, isolated vertices)

        Raises:
            GraphFormatError: Listing every violation when ``strict``
        """
        graph = self.parse(self._load())
        if strict:
            violations = validate(graph)
            if violations:
                details = "\n".join(f"  {v}" for v in violations)
                raise GraphFormatError(f"{self.path}: invalid graph\n{details}")
        logger.debug(
            "read %s: %d vertices, %d edges", self.path, graph.vertex_count, len(graph.edges)
        )
        return graph

    def read_tessellation(self) -> Tessellation:
        """
        Read a tessellation file (graph JSON plus ``faces``).

        Raises:
            GraphFormatError: If the file has no faces or the graph is malformed
        """
        data = self._load()
        if "faces" not in data:
            raise GraphFormatError(f"{self.path}: no 'faces' list, not a tessellation file")
        graph = self.parse(data)
        return tessellation_from_faces(
            graph.vertex_count,
            data["faces"],
            label=str(data.get("label", self.path.stem)),
            layers=int(data.get("layers", 0)),
            edges=[(e.u, e.v) for e in graph.edges],
        )

    @staticmethod
    def to_dict(graph: WeightedGraph) -> dict:
        return {
            "vertices": [
                {"id": i, "m": float(graph.m[i]), "c": float(graph.c[i])}
                for i in range(graph.vertex_count)
            ],
            "edges": [
                {"u": e.u, "v": e.v, "b": float(e.b)}
                for e in sorted(graph.edges, key=lambda e: (e.u, e.v))
            ],
        }

    @staticmethod
    def render(data: dict) -> str:
        return json.dumps(data, sort_keys=True, indent=2) + "\n"

    def write(self, graph: WeightedGraph) -> None:
        """Write data to the graph file in canonical form."""
        with open(self.path, "w") as f:
            f.write(self.render(self.to_dict(graph)))

    @classmethod
    def tessellation_dict(cls, t: Tessellation) -> dict:
        data = cls.to_dict(t.graph)
        data["faces"] = [list(face) for face in t.faces]
        data["boundary_faces"] = list(t.boundary_faces)
        data["label"] = t.label
        data["layers"] = t.layers
        return data

    def write_tessellation(self, t: Tessellation) -> None:
        with open(self.path, "w") as f:
            f.write(self.render(self.tessellation_dict(t)))
