"""Symmetric eigendecomposition of adjacency matrices.

The solver is a cyclic Jacobi iteration. Eigenpairs are returned sorted by
descending eigenvalue with eigenvectors stored as *rows* of ``U`` so that
``U @ A @ U.T`` is diagonal and ``U[0]`` is the top (ground-state) mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graph_core import Graph, GraphError, is_connected

OFFDIAG_TOL = 1e-12
DEGEN_TOL = 1e-9
NORM_TOL = 1e-12
# Above this dimension eigh() hands over to LAPACK; cyclic Jacobi in Python
# costs O(n^2) rotations per sweep.
JACOBI_MAX_DIM = 64


class PerronFrobeniusError(GraphError):
    """Ground eigenvector requested for a graph that is not connected."""


def jacobi_eigh(matrix, tol: float = OFFDIAG_TOL, max_sweeps: int = 100):
    """Eigenvalues and eigenvectors (as columns) of a real symmetric matrix.

    Sweeps over all pairs ``p < q`` in row order until the off-diagonal
    Frobenius norm drops below ``tol * (1 + ||A||_F)``. Output is unsorted.
    Rotations run on nested lists: at adjacency-matrix sizes the per-call
    overhead of numpy slicing dominates the arithmetic.
    """
    arr = np.array(matrix, dtype=float)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.allclose(arr, arr.T, rtol=0, atol=1e-12 * (1 + np.abs(arr).max(initial=0))):
        raise ValueError("matrix is not symmetric")
    arr = 0.5 * (arr + arr.T)
    threshold = tol * (1.0 + float(np.linalg.norm(arr)))
    a = arr.tolist()
    v = np.eye(n).tolist()
    rng = range(n)

    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[r][c] ** 2 for r in rng for c in rng if r != c))
        if off <= threshold:
            break
        for p in range(n - 1):
            row_p = a[p]
            for q in range(p + 1, n):
                apq = row_p[q]
                if apq == 0.0:
                    continue
                row_q = a[q]
                theta = (row_q[q] - row_p[p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = c * x - s * y
                    row[q] = s * x + c * y
                for r in rng:
                    x, y = row_p[r], row_q[r]
                    row_p[r] = c * x - s * y
                    row_q[r] = s * x + c * y
                row_p[q] = row_q[p] = 0.0
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = c * x - s * y
                    row[q] = s * x + c * y
    else:
        raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    return np.array([a[k][k] for k in rng]), np.array(v).reshape(n, n)


def eigh(matrix, method: str = "auto"):
    """Dispatch between the Jacobi solver and ``numpy.linalg.eigh``.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    :data:`JACOBI_MAX_DIM`).
    """
    n = np.shape(matrix)[0]
    if method == "auto":
        method = "jacobi" if n <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        return jacobi_eigh(matrix)
    if method == "lapack":
        return np.linalg.eigh(np.asarray(matrix, dtype=float))
    raise ValueError(f"unknown eigensolver method {method!r}")


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    mags = np.abs(vec)
    # tolerance keeps the tie-break stable against round-off
    lead = int(np.flatnonzero(mags >= mags.max() - 1e-10)[0])
    return -vec if vec[lead] < 0 else vec


def group_degenerate(eigenvalues: Sequence[float], tol: float = DEGEN_TOL) -> tuple[tuple[int, ...], ...]:
    """Group indices of a descending spectrum whose neighbours lie within ``tol``."""
    if tol <= 0:
        raise ValueError("degeneracy tolerance must be positive")
    classes: list[list[int]] = []
    for k, w in enumerate(eigenvalues):
        if classes and abs(eigenvalues[classes[-1][-1]] - w) <= tol:
            classes[-1].append(k)
        else:
            classes.append([k])
    return tuple(tuple(c) for c in classes)


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_classes: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    def class_of(self, k: int) -> tuple[int, ...]:
        for cls in self.degeneracy_classes:
            if k in cls:
                return cls
        raise IndexError(k)

    def is_degenerate(self, k: int) -> bool:
        return len(self.class_of(k)) > 1

    def square_amplitudes(self, eigenspace_max: bool = False) -> np.ndarray:
        """Matrix ``p[k, i] = |U[k, i]|^2``.

        With ``eigenspace_max`` the rows of degenerate levels are replaced by
        the diagonal of the spectral projector onto the level, i.e. the
        largest ``|x_i|^2`` over unit vectors ``x`` in the eigenspace.
        """
        p = np.abs(self.eigenvectors) ** 2
        if eigenspace_max:
            out = p.copy()
            for cls in self.degeneracy_classes:
                if len(cls) > 1:
                    out[list(cls)] = p[list(cls)].sum(axis=0)
            return out
        return p

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return U.T @ np.diag(self.eigenvalues) @ U


@dataclass(frozen=True)
class SingleParticleState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"single-particle state is not normalized (|x|^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, vector) -> "SingleParticleState":
        vec = np.asarray(vector, dtype=complex)
        return cls(vec / np.linalg.norm(vec))

    def __len__(self):
        return len(self.amplitudes)

    def square_amplitudes(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def decompose_matrix(matrix, degen_tol: float = DEGEN_TOL, method: str = "jacobi") -> SpectralDecomposition:
    w, v = eigh(matrix, method=method)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    U = np.array([_fix_sign(v[:, k]) for k in order]).reshape(len(w), len(w))
    return SpectralDecomposition(w, U, group_degenerate(w, degen_tol))


def eigendecompose(g: Graph, degen_tol: float = DEGEN_TOL) -> SpectralDecomposition:
    """Spectrum of the adjacency matrix of ``g``, descending, rows = eigenvectors."""
    return decompose_matrix(g.adjacency(), degen_tol)


def degeneracy_classes(sd: SpectralDecomposition, tol: float = DEGEN_TOL):
    return group_degenerate(sd.eigenvalues, tol)


def ground_eigenvector(sd: SpectralDecomposition, g: Optional[Graph] = None) -> SingleParticleState:
    """Perron vector of a connected graph (strictly positive entries)."""
    if g is not None and not is_connected(g):
        raise PerronFrobeniusError(
            "ground eigenvector needs a connected graph (Perron-Frobenius uniqueness fails otherwise)"
        )
    if sd.is_degenerate(0):
        raise RuntimeError(
            f"top eigenvalue {sd.eigenvalues[0]!r} is degenerate; eigensolver inconsistent for a connected graph"
        )
    top = sd.eigenvectors[0]
    if top.sum() < 0:
        top = -top
    if g is not None and g.L > 1 and top.min() <= 0:
        raise RuntimeError("Perron vector has non-positive entries; eigensolver failure")
    return SingleParticleState(top)


def fourier_modes(L: int) -> list[SingleParticleState]:
    """Plane waves ``x_j = exp(2 pi i k j / L) / sqrt(L)`` for ``k = 0..L-1``."""
    if L < 3:
        raise GraphError(f"ring Fourier modes need L >= 3, got {L}")
    j = np.arange(L)
    return [SingleParticleState(np.exp(2j * np.pi * k * j / L) / math.sqrt(L)) for k in range(L)]


def fourier_eigenvalues(L: int) -> np.ndarray:
    return 2.0 * np.cos(2.0 * np.pi * np.arange(L) / L)
