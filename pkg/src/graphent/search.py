"""Exhaustive search over labeled graphs for the most entangled vertex.

Two functionals are supported: the ground-state condensate (top adjacency
eigenvector, connected graphs only) and the maximum over every
eigenstate. All maximizers within :data:`TIE_TOL` are kept as witnesses.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .entanglement import max_entropy, vertex_entropies, vertex_entropy
from .graph_core import ENUMERATION_CAP, Graph, check_enumeration_cap, graph_count, is_connected
from .spectral import eigendecompose

log = logging.getLogger(__name__)

TIE_TOL = 1e-10
MODES = ("ground_state", "any_eigenstate")
SEARCH_SCHEMA = "graphent.search/1"


@dataclass(frozen=True, order=True)
class Witness:
    mask: int
    vertex: int
    eigenstate: int
    p: float = field(compare=False)
    value: float = field(compare=False)


@dataclass
class SearchResult:
    mode: str
    L: int
    N: int
    best_value: float
    witnesses: list[Witness]
    evaluated_count: int
    connected_count: int
    eigenspace_max: bool = False

    @property
    def skipped_count(self) -> int:
        return self.evaluated_count - self.connected_count

    def witness_graphs(self) -> list[Graph]:
        return [Graph(self.L, w.mask) for w in self.witnesses]

    def has_witness(self, g: Graph, vertex: int, eigenstate: int | None = None) -> bool:
        return any(
            w.mask == g.mask and w.vertex == vertex and (eigenstate is None or w.eigenstate == eigenstate)
            for w in self.witnesses
        )

    def to_json(self) -> dict:
        return {
            "schema": SEARCH_SCHEMA,
            "mode": self.mode,
            "L": self.L,
            "N": self.N,
            "eigenspace_max": self.eigenspace_max,
            "best_value": self.best_value,
            "evaluated_count": self.evaluated_count,
            "connected_count": self.connected_count,
            "skipped_disconnected": self.skipped_count,
            "witnesses": [
                {
                    "mask": w.mask,
                    "edges": [list(e) for e in Graph(self.L, w.mask).edges],
                    "vertex": w.vertex,
                    "eigenstate": w.eigenstate,
                    "p": w.p,
                }
                for w in self.witnesses
            ],
        }


class _Tracker:
    """Running maximum plus every candidate within ``TIE_TOL`` of it."""

    def __init__(self):
        self.best = -np.inf
        self.cands: list[Witness] = []

    def offer(self, values: np.ndarray, p: np.ndarray, mask: int, rows: Sequence[int]):
        top = float(values.max())
        if top > self.best:
            self.best = top
            self.cands = [w for w in self.cands if w.value >= top - TIE_TOL]
        if top < self.best - TIE_TOL:
            return
        for r, k in enumerate(rows):
            for i in np.flatnonzero(values[r] >= self.best - TIE_TOL):
                self.cands.append(Witness(mask, int(i), int(k), float(p[r, i]), float(values[r, i])))

    def merge(self, other: "_Tracker"):
        self.best = max(self.best, other.best)
        self.cands = [w for w in self.cands + other.cands if w.value >= self.best - TIE_TOL]


def _scan(L: int, Ns: tuple[int, ...], mode: str, eigenspace_max: bool, start: int, stop: int):
    trackers = {N: _Tracker() for N in Ns}
    evaluated = connected = 0
    for mask in range(start, stop):
        evaluated += 1
        g = Graph(L, mask)
        if not is_connected(g):
            continue
        connected += 1
        sd = eigendecompose(g)
        if mode == "ground_state":
            rows = [0]
            p = np.clip(np.abs(sd.eigenvectors[:1]) ** 2, 0.0, 1.0)
        else:
            rows = list(range(L))
            p = np.clip(sd.square_amplitudes(eigenspace_max), 0.0, 1.0)
        for N in Ns:
            trackers[N].offer(vertex_entropies(p, N), p, mask, rows)
    return trackers, evaluated, connected


def search(
    L: int,
    Ns: Sequence[int],
    mode: str = "ground_state",
    eigenspace_max: bool = False,
    jobs: int = 1,
    cap: int = ENUMERATION_CAP,
) -> dict[int, SearchResult]:
    """Run the search for several particle numbers sharing one pass over graphs.

    The mask range is cut into contiguous chunks; with ``jobs > 1`` they are
    evaluated in worker processes. Merging is order-independent, so the result
    does not depend on ``jobs``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown search mode {mode!r}")
    check_enumeration_cap(L, cap)
    Ns = tuple(int(N) for N in Ns)
    for N in Ns:
        if N < 1:
            raise ValueError(f"particle number must be >= 1, got {N}")
    total = graph_count(L)
    jobs = max(1, int(jobs))
    n_chunks = 1 if jobs == 1 else min(total, jobs * 4)
    bounds = [total * c // n_chunks for c in range(n_chunks + 1)]
    ranges = [(bounds[c], bounds[c + 1]) for c in range(n_chunks)]

    if jobs == 1:
        parts = [_scan(L, Ns, mode, eigenspace_max, a, b) for a, b in ranges]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_scan, L, Ns, mode, eigenspace_max, a, b) for a, b in ranges]
            parts = [f.result() for f in futures]

    merged = {N: _Tracker() for N in Ns}
    evaluated = connected = 0
    for trackers, ev, co in parts:
        evaluated += ev
        connected += co
        for N in Ns:
            merged[N].merge(trackers[N])
    log.debug("L=%d: %d graphs, %d connected", L, evaluated, connected)

    return {
        N: SearchResult(
            mode=mode,
            L=L,
            N=N,
            best_value=float(merged[N].best),
            witnesses=sorted(merged[N].cands),
            evaluated_count=evaluated,
            connected_count=connected,
            eigenspace_max=eigenspace_max,
        )
        for N in Ns
    }


def search_ground(L: int, N: int, jobs: int = 1, cap: int = ENUMERATION_CAP) -> SearchResult:
    return search(L, [N], "ground_state", jobs=jobs, cap=cap)[N]


def search_any_eigenstate(
    L: int, N: int, eigenspace_max: bool = False, jobs: int = 1, cap: int = ENUMERATION_CAP
) -> SearchResult:
    return search(L, [N], "any_eigenstate", eigenspace_max=eigenspace_max, jobs=jobs, cap=cap)[N]


def reevaluate(result: SearchResult, w: Witness) -> float:
    """Recompute a witness value from scratch with the scalar entropy routine."""
    sd = eigendecompose(Graph(result.L, w.mask))
    p = sd.square_amplitudes(result.eigenspace_max)[w.eigenstate, w.vertex]
    return vertex_entropy(min(float(p), 1.0), result.N)


def check_result(result: SearchResult) -> list[str]:
    """Problems found with a result's invariants; empty when consistent."""
    problems = []
    if result.best_value > max_entropy(result.N) + 1e-12:
        problems.append(f"best value {result.best_value} exceeds max_entropy({result.N})")
    for w in result.witnesses:
        value = reevaluate(result, w)
        if abs(value - result.best_value) > TIE_TOL:
            problems.append(f"witness {w} re-evaluates to {value}")
    return problems
