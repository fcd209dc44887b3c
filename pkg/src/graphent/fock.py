"""Brute-force many-body layer in the fixed-N Fock sector.

Everything here works on explicit occupation-number vectors and is kept
independent of the closed-form binomial route in :mod:`graphent.entanglement`;
the two are compared against each other in the test-suite and by the
``oracle`` CLI command.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .entanglement import VertexOccupationDistribution, shannon_bits
from .graph_core import Graph, is_bipartite
from .spectral import eigh

BASIS_CAP = 2_000_000
BASIS_CAP_ENV = "GRAPHENT_BASIS_CAP"
FOCK_SCHEMA = "graphent.fock_state/1"


class BasisTooLargeError(ValueError):
    pass


def basis_cap() -> int:
    value = os.environ.get(BASIS_CAP_ENV)
    return int(value) if value else BASIS_CAP


def _occupations(L: int, N: int):
    # lexicographically descending: largest n_1 first
    if L == 1:
        yield (N,)
        return
    for n in range(N, -1, -1):
        for rest in _occupations(L - 1, N - n):
            yield (n,) + rest


@dataclass(frozen=True, eq=False)
class FockBasis:
    modes: int
    particles: int
    states: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self):
        return self.size

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(n) for n in s): k for k, s in enumerate(self.states)}

    def index_of(self, occupation: Sequence[int]) -> int:
        return self.index[tuple(occupation)]


def enumerate_basis(L: int, N: int, cap: int | None = None) -> FockBasis:
    if L < 1 or N < 0:
        raise ValueError(f"need L >= 1 and N >= 0, got L={L}, N={N}")
    cap = basis_cap() if cap is None else cap
    size = math.comb(N + L - 1, N)
    if size > cap:
        raise BasisTooLargeError(f"Fock basis for L={L}, N={N} has {size} states, above the cap of {cap}")
    states = np.array(list(_occupations(L, N)), dtype=np.int64).reshape(size, L)
    return FockBasis(L, N, states)


@dataclass(frozen=True, eq=False)
class FockState:
    basis: FockBasis
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.shape != (self.basis.size,):
            raise ValueError(f"expected {self.basis.size} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coefficients", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def to_json(self, tol: float = 0.0) -> dict:
        entries = [
            [[int(n) for n in occ], float(c.real), float(c.imag)]
            for occ, c in zip(self.basis.states, self.coefficients)
            if abs(c) > tol
        ]
        return {"schema": FOCK_SCHEMA, "L": self.basis.modes, "N": self.basis.particles, "entries": entries}

    @classmethod
    def from_json(cls, doc: dict, basis: FockBasis | None = None) -> "FockState":
        if basis is None:
            basis = enumerate_basis(int(doc["L"]), int(doc["N"]))
        coeffs = np.zeros(basis.size, dtype=complex)
        for occ, re, im in doc["entries"]:
            coeffs[basis.index_of(occ)] = complex(re, im)
        return cls(basis, coeffs)


def basis_state(basis: FockBasis, occupation: Sequence[int]) -> FockState:
    coeffs = np.zeros(basis.size, dtype=complex)
    coeffs[basis.index_of(occupation)] = 1.0
    return FockState(basis, coeffs)


def condensate_state(x, basis: FockBasis) -> FockState:
    """All ``N`` particles in the single-particle mode ``x``.

    Coefficient of ``|n_1..n_L>`` is ``sqrt(N!/prod n_k!) prod x_k^n_k``;
    the multinomial factor is built from log-gamma values.
    """
    amps = np.asarray(getattr(x, "amplitudes", x), dtype=complex)
    if amps.shape != (basis.modes,):
        raise ValueError(f"single-particle vector has length {amps.size}, basis has {basis.modes} modes")
    norm = float(np.sum(np.abs(amps) ** 2))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"single-particle vector is not normalized (|x|^2 = {norm!r})")
    N = basis.particles
    states = basis.states
    lg = np.array([math.lgamma(n + 1) for n in range(N + 1)])
    log_multinomial = lg[N] - lg[states].sum(axis=1)
    powers = np.prod(amps[None, :] ** states, axis=1)
    return FockState(basis, np.exp(0.5 * log_multinomial) * powers)


def vertex_marginal(psi: FockState, i: int):
    """Occupation distribution of vertex ``i``, by direct summation of
    ``|C(n)|^2`` over basis states with ``n_i = m``."""
    basis = psi.basis
    probs = np.bincount(basis.states[:, i], weights=psi.probabilities(), minlength=basis.particles + 1)
    return VertexOccupationDistribution(i, basis.particles, probs)


def marginal_entropy(psi: FockState, i: int) -> float:
    return shannon_bits(vertex_marginal(psi, i).probabilities)


@dataclass(frozen=True, eq=False)
class ManyBodyHamiltonian:
    """Dense ``H = -sum_<ij> (b_i^+ b_j + h.c.) + (u/2) sum_j n_j (n_j - 1)``."""

    basis: FockBasis
    matrix: np.ndarray
    hubbard_u: float = 0.0

    @cached_property
    def spectrum(self):
        return eigh(self.matrix)


def build_hamiltonian(g: Graph, basis: FockBasis, hubbard_u: float = 0.0) -> ManyBodyHamiltonian:
    if basis.modes != g.L:
        raise ValueError(f"basis has {basis.modes} modes but the graph has {g.L} vertices")
    D = basis.size
    H = np.zeros((D, D))
    edges = g.edges
    for col, occ in enumerate(basis.states):
        occ = [int(n) for n in occ]
        for u, v in edges:
            for src, dst in ((v, u), (u, v)):
                if occ[src] == 0:
                    continue
                amp = math.sqrt(occ[dst] + 1) * math.sqrt(occ[src])
                new = list(occ)
                new[src] -= 1
                new[dst] += 1
                H[basis.index[tuple(new)], col] -= amp
        if hubbard_u:
            H[col, col] += 0.5 * hubbard_u * sum(n * (n - 1) for n in occ)
    return ManyBodyHamiltonian(basis, H, float(hubbard_u))


def _check_compatible(psi: FockState, H: ManyBodyHamiltonian):
    if psi.basis is not H.basis and (
        psi.basis.modes != H.basis.modes or psi.basis.particles != H.basis.particles
    ):
        raise ValueError("state and Hamiltonian live in different Fock sectors")


def evolve(psi: FockState, H: ManyBodyHamiltonian, t: float) -> FockState:
    """``exp(-i H t) psi`` through the eigendecomposition of ``H``."""
    _check_compatible(psi, H)
    energies, vecs = H.spectrum
    amps = vecs.T @ psi.coefficients
    return FockState(psi.basis, vecs @ (np.exp(-1j * energies * t) * amps))


def entropy_timeseries(psi0: FockState, H: ManyBodyHamiltonian, i: int, times: Sequence[float]):
    """Rows ``(t, S_i(t))`` with ``S_i`` the vertex-``i`` entropy in bits."""
    for t in times:
        if not math.isfinite(t):
            raise ValueError(f"non-finite time {t!r}")
    return [(float(t), marginal_entropy(evolve(psi0, H, t), i)) for t in times]


def sign_map(psi: FockState, labels: Sequence[int]) -> FockState:
    """Multiply each coefficient by ``(-1)^(sum of n_j over vertices labelled 1)``."""
    side = np.asarray(labels, dtype=np.int64)
    parity = psi.basis.states @ side
    return FockState(psi.basis, psi.coefficients * np.where(parity % 2 == 0, 1.0, -1.0))


def bipartite_sign_map(psi: FockState, g: Graph) -> FockState:
    labels = is_bipartite(g)
    if labels is None:
        raise ValueError("sign map needs a bipartite graph")
    return sign_map(psi, labels)


def reversal_asymmetry(psi0: FockState, H: ManyBodyHamiltonian, i: int, times: Sequence[float]) -> float:
    """``max_t |S_i(t) - S_i(-t)|``; used as an exploratory probe, not a guarantee."""
    return max(
        abs(marginal_entropy(evolve(psi0, H, t), i) - marginal_entropy(evolve(psi0, H, -t), i)) for t in times
    )


def random_state(basis: FockBasis, rng: np.random.Generator, real: bool = False) -> FockState:
    c = rng.normal(size=basis.size)
    if not real:
        c = c + 1j * rng.normal(size=basis.size)
    return FockState(basis, c / np.linalg.norm(c))
