"""Simple undirected graphs stored as an upper-triangle bitmask.

Vertices are 0-indexed. Bit ``k`` of the mask corresponds to the k-th pair
``(u, v)`` with ``u < v`` in row-major order of the strict upper triangle,
so ``(0, 1)`` is bit 0, ``(0, 2)`` bit 1, ..., ``(L-2, L-1)`` the top bit.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

ENUMERATION_CAP = 7
NAMED_KINDS = ("star", "ring", "path", "complete")


class GraphError(ValueError):
    """Invalid graph construction or unsupported request."""


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@lru_cache(maxsize=None)
def pair_table(L: int) -> tuple[tuple[int, int], ...]:
    """Vertex pairs in bit order for ``L`` vertices."""
    return tuple(itertools.combinations(range(L), 2))


@lru_cache(maxsize=None)
def _pair_index(L: int) -> dict[tuple[int, int], int]:
    return {pair: k for k, pair in enumerate(pair_table(L))}


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on ``vertex_count`` vertices."""

    vertex_count: int
    mask: int = 0

    def __post_init__(self):
        if self.vertex_count < 1:
            raise GraphError(f"vertex_count must be >= 1, got {self.vertex_count}")
        npairs = self.vertex_count * (self.vertex_count - 1) // 2
        if self.mask < 0 or self.mask >> npairs:
            raise GraphError(f"mask {self.mask} out of range for L={self.vertex_count}")

    @classmethod
    def from_edges(cls, L: int, edges) -> "Graph":
        index = _pair_index(L)
        mask = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < L and 0 <= v < L):
                raise GraphError(f"edge ({u}, {v}) out of range for L={L}")
            mask |= 1 << index[(min(u, v), max(u, v))]
        return cls(L, mask)

    @property
    def L(self) -> int:
        return self.vertex_count

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [pair for k, pair in enumerate(pair_table(self.L)) if self.mask >> k & 1]

    @property
    def edge_count(self) -> int:
        return bin(self.mask).count("1")

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.L, self.L))
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1.0
        return A

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.L)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degrees(self) -> list[int]:
        return [len(n) for n in self.neighbours()]

    def to_edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges)

    def __str__(self):
        return f"Graph(L={self.L}, edges={self.edges})"


def from_edge_list(text: str, L: int) -> Graph:
    """Parse a whitespace-separated ``u v`` edge list.

    ``#`` starts a comment and blank lines are skipped. Duplicate edges
    (in either orientation) collapse to one.
    """
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise EdgeListParseError(lineno, f"expected two vertex ids, got {raw.strip()!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer vertex id in {raw.strip()!r}") from None
        if not (0 <= u < L and 0 <= v < L):
            raise EdgeListParseError(lineno, f"vertex id out of range [0, {L - 1}]")
        if u == v:
            raise EdgeListParseError(lineno, f"self-loop at vertex {u}")
        edges.append((u, v))
    return Graph.from_edges(L, edges)


def read_edge_list(path: str | os.PathLike) -> Graph:
    """Read an edge-list file; ``L`` is one more than the largest vertex id
    unless a ``# vertices: L`` header line is present."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    L = None
    max_id = -1
    for raw in text.splitlines():
        stripped = raw.strip()
        if stripped.startswith("#"):
            body = stripped[1:].strip().lower()
            if body.startswith("vertices:"):
                L = int(body.split(":", 1)[1])
            continue
        for tok in stripped.split("#", 1)[0].split():
            if tok.lstrip("-").isdigit():
                max_id = max(max_id, int(tok))
    if L is None:
        L = max(max_id + 1, 1)
    return from_edge_list(text, L)


def generate_named(kind: str, L: int) -> Graph:
    if kind not in NAMED_KINDS:
        raise GraphError(f"unknown graph kind {kind!r}; expected one of {', '.join(NAMED_KINDS)}")
    minimum = 3 if kind == "ring" else 1
    if L < minimum:
        raise GraphError(f"{kind} graph needs L >= {minimum}, got {L}")
    if kind == "star":
        edges = [(0, j) for j in range(1, L)]
    elif kind == "path":
        edges = [(j, j + 1) for j in range(L - 1)]
    elif kind == "ring":
        edges = [(j, (j + 1) % L) for j in range(L)]
    else:
        edges = pair_table(L)
    return Graph.from_edges(L, edges)


def is_connected(g: Graph) -> bool:
    adj = g.neighbours()
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.L


def is_bipartite(g: Graph) -> Optional[tuple[int, ...]]:
    """Return a 2-coloring (vertex 0 of each component gets label 0), or None.

    Components are seeded from their lowest-index vertex and explored
    breadth-first, so the labeling is deterministic.
    """
    adj = g.neighbours()
    label = [-1] * g.L
    for root in range(g.L):
        if label[root] != -1:
            continue
        label[root] = 0
        queue = [root]
        for u in queue:
            for v in adj[u]:
                if label[v] == -1:
                    label[v] = 1 - label[u]
                    queue.append(v)
                elif label[v] == label[u]:
                    return None
    return tuple(label)


def graph_count(L: int) -> int:
    return 1 << (L * (L - 1) // 2)


def check_enumeration_cap(L: int, cap: int = ENUMERATION_CAP) -> None:
    if L < 1:
        raise GraphError(f"L must be >= 1, got {L}")
    if L > cap:
        raise GraphError(f"L={L} exceeds the enumeration cap of {cap} vertices")


def enumerate_graphs(
    L: int,
    connected_only: bool = False,
    cap: int = ENUMERATION_CAP,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[Graph]:
    """Yield labeled graphs on ``L`` vertices in increasing bitmask order.

    ``start``/``stop`` restrict the mask range, which is how the search
    module partitions work between processes.
    """
    check_enumeration_cap(L, cap)
    total = graph_count(L)
    stop = total if stop is None else min(stop, total)
    for mask in range(start, stop):
        g = Graph(L, mask)
        if connected_only and not is_connected(g):
            continue
        yield g
