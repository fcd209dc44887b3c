"""Closed-form vertex entanglement of condensates.

An N-boson condensate over a single-particle wavefunction ``x`` puts
``m`` particles on vertex ``i`` with binomial probability
``C(N, m) p^m (1-p)^(N-m)``, ``p = |x_i|^2``. The vertex-versus-rest
entanglement is the Shannon entropy (bits) of that distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph_core import Graph
from .spectral import DEGEN_TOL, SpectralDecomposition, eigendecompose

LOG_SPACE_THRESHOLD = 64
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class VertexOccupationDistribution:
    vertex: int
    particles: int
    probabilities: np.ndarray

    def entropy(self) -> float:
        return shannon_bits(self.probabilities)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"occupation probability must lie in [0, 1], got {p!r}")
    return p


def _check_n(N: int) -> int:
    if int(N) != N or N < 1:
        raise ValueError(f"particle number must be a positive integer, got {N!r}")
    return int(N)


def log_binomials(N: int) -> np.ndarray:
    """``ln C(N, m)`` for ``m = 0..N`` from a log-gamma table."""
    lg = np.array([math.lgamma(k + 1) for k in range(N + 1)])
    return lg[N] - lg - lg[::-1]


def binomial_pmf(p: float, N: int) -> np.ndarray:
    if p == 0.0 or p == 1.0:
        out = np.zeros(N + 1)
        out[N if p == 1.0 else 0] = 1.0
        return out
    if N <= LOG_SPACE_THRESHOLD:
        q = 1.0 - p
        return np.array([math.comb(N, m) * p**m * q ** (N - m) for m in range(N + 1)])
    m = np.arange(N + 1)
    log_pmf = log_binomials(N) + m * math.log(p) + (N - m) * math.log1p(-p)
    return np.exp(log_pmf - np.logaddexp.reduce(log_pmf))


def shannon_bits(probabilities) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``."""
    probs = np.asarray(probabilities, dtype=float)
    nz = probs[probs > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def vertex_distribution(p: float, N: int, vertex: int = 0) -> VertexOccupationDistribution:
    p = _check_p(p)
    N = _check_n(N)
    return VertexOccupationDistribution(vertex, N, binomial_pmf(p, N))


def vertex_entropy(p: float, N: int) -> float:
    """Entropy in bits of the vertex occupation for square amplitude ``p``."""
    p = _check_p(p)
    N = _check_n(N)
    return shannon_bits(binomial_pmf(p, N))


def vertex_entropies(p, N: int) -> np.ndarray:
    """Vectorized :func:`vertex_entropy` over an array of square amplitudes."""
    N = _check_n(N)
    p = np.asarray(p, dtype=float)
    if np.any((p < 0.0) | (p > 1.0)) or np.any(np.isnan(p)):
        raise ValueError("occupation probabilities must lie in [0, 1]")
    flat = p.reshape(-1, 1)
    m = np.arange(N + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        if N <= LOG_SPACE_THRESHOLD:
            coeffs = np.array([float(math.comb(N, k)) for k in m])
            probs = coeffs * flat**m * (1.0 - flat) ** (N - m)
        else:
            logs = log_binomials(N) + m * np.log(flat) + (N - m) * np.log1p(-flat)
            probs = np.exp(np.nan_to_num(logs, nan=-np.inf))
            probs[flat[:, 0] == 0.0] = np.eye(N + 1)[0]
            probs[flat[:, 0] == 1.0] = np.eye(N + 1)[N]
        terms = np.where(probs > 0.0, -probs * np.log2(np.where(probs > 0.0, probs, 1.0)), 0.0)
    return terms.sum(axis=1).reshape(p.shape)


def amplitude_entropy(x, vertex: int, N: int) -> float:
    """Vertex entropy of a condensate over an arbitrary (normalized) vector."""
    amps = np.asarray(x, dtype=complex)
    p = float(abs(amps[vertex]) ** 2 / np.sum(np.abs(amps) ** 2))
    return vertex_entropy(min(p, 1.0), N)


def max_entropy(N: int) -> float:
    """Largest attainable vertex entropy, reached at ``p = 1/2``:
    ``N - 2^-N sum_m C(N,m) log2 C(N,m)``."""
    N = _check_n(N)
    if N <= LOG_SPACE_THRESHOLD:
        total = sum(math.comb(N, m) * math.log2(math.comb(N, m)) for m in range(N + 1))
        return N - total / 2.0**N
    # equivalent to the closed form, with log-weights renormalized so that
    # rounding in the log-gamma table does not leak through sum(w) != 1
    log_w = log_binomials(N) - N * _LN2
    log_w -= np.logaddexp.reduce(log_w)
    return float(-np.sum(np.exp(log_w) * log_w) / _LN2)


def max_entropy_gaussian(N: int) -> float:
    """Large-N estimate ``0.5 log2(pi e N / 2)`` of :func:`max_entropy`."""
    return 0.5 * math.log2(math.pi * math.e * N / 2.0)


def entropy_curve(N_list: Iterable[int], grid: int) -> list[tuple[float, int, float]]:
    """Rows ``(p, N, S/log2(N+1))`` on a uniform grid of ``grid`` points in [0, 1]."""
    if grid < 2:
        raise ValueError(f"grid must have at least 2 points, got {grid}")
    ps = [k / (grid - 1) for k in range(grid)]
    rows = []
    for N in N_list:
        N = _check_n(N)
        norm = math.log2(N + 1)
        rows.extend((p, N, vertex_entropy(p, N) / norm) for p in ps)
    return rows


def log_spaced_integers(n_max: int, samples: int) -> list[int]:
    """Distinct integers from 1 to ``n_max``, roughly log-uniform, both ends included."""
    if n_max < 1:
        raise ValueError(f"N_max must be >= 1, got {n_max}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if n_max == 1 or samples == 1:
        return sorted({1, n_max})
    raw = np.geomspace(1, n_max, samples)
    return sorted({int(round(v)) for v in raw} | {1, n_max})


def entanglement_ratio(N: int) -> float:
    return max_entropy(N) / math.log2(N + 1)


def ratio_curve(N_max: int, samples: int = 50) -> list[tuple[int, float]]:
    """Rows ``(N, max_entropy(N)/log2(N+1))`` at log-spaced ``N``.

    The exact ratio keeps decreasing slowly with N; it sits near 0.57
    around N = 3e4 and is not a converged limit there.
    """
    return [(N, entanglement_ratio(N)) for N in log_spaced_integers(N_max, samples)]


@dataclass(frozen=True)
class EntanglementReport:
    """Per-(eigenstate k, vertex i) square amplitudes and entropies (bits)."""

    graph: Graph
    particles: int
    eigenvalues: np.ndarray
    square_amplitudes: np.ndarray
    entropies: np.ndarray
    degenerate: tuple[bool, ...]
    eigenspace_max: bool

    def entropy(self, k: int, i: int) -> float:
        return float(self.entropies[k, i])

    def best(self) -> tuple[float, int, int]:
        k, i = np.unravel_index(int(np.argmax(self.entropies)), self.entropies.shape)
        return float(self.entropies[k, i]), int(k), int(i)


def graph_entanglement_report(
    g: Graph,
    N: int,
    eigenspace_max: bool = False,
    sd: SpectralDecomposition | None = None,
    degen_tol: float = DEGEN_TOL,
) -> EntanglementReport:
    N = _check_n(N)
    if sd is None:
        sd = eigendecompose(g, degen_tol)
    p = np.clip(sd.square_amplitudes(eigenspace_max), 0.0, 1.0)
    ent = np.array([[vertex_entropy(pk, N) for pk in row] for row in p]).reshape(p.shape)
    degenerate = tuple(sd.is_degenerate(k) for k in range(sd.size))
    return EntanglementReport(g, N, sd.eigenvalues, p, ent, degenerate, eigenspace_max)


def mode_report(modes: Sequence, N: int) -> np.ndarray:
    """Entropy table for an explicit list of single-particle modes (e.g. Fourier)."""
    N = _check_n(N)
    return np.array([[vertex_entropy(min(pi, 1.0), N) for pi in np.abs(np.asarray(getattr(m, "amplitudes", m))) ** 2] for m in modes])
