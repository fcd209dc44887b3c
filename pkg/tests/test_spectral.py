import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from graphent.graph_core import Graph, enumerate_graphs, generate_named, graph_count, is_bipartite, is_connected
from graphent.spectral import (
    PerronFrobeniusError,
    SingleParticleState,
    decompose_matrix,
    degeneracy_classes,
    eigendecompose,
    eigh,
    fourier_eigenvalues,
    fourier_modes,
    ground_eigenvector,
    jacobi_eigh,
)


def test_star_spectrum():
    sd = eigendecompose(generate_named("star", 5))
    np.testing.assert_allclose(sd.eigenvalues, [2, 0, 0, 0, -2], atol=1e-12)


def test_complete_spectrum():
    sd = eigendecompose(generate_named("complete", 4))
    np.testing.assert_allclose(sd.eigenvalues, [3, -1, -1, -1], atol=1e-12)


@pytest.mark.parametrize("L", [3, 4, 5, 6, 7])
def test_ring_spectrum_matches_circulant(L):
    sd = eigendecompose(generate_named("ring", L))
    expected = sorted(fourier_eigenvalues(L), reverse=True)
    np.testing.assert_allclose(sd.eigenvalues, expected, atol=1e-12)
    if L == 4:
        np.testing.assert_allclose(sd.eigenvalues, [2, 0, 0, -2], atol=1e-12)


def test_ground_eigenvector_star():
    g = generate_named("star", 5)
    x = ground_eigenvector(eigendecompose(g), g).amplitudes
    assert x[0].real == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    np.testing.assert_allclose(x[1:].real, 1 / math.sqrt(8), atol=1e-12)


def test_ground_eigenvector_complete_and_dimer():
    g = generate_named("complete", 4)
    np.testing.assert_allclose(ground_eigenvector(eigendecompose(g), g).amplitudes, 0.5, atol=1e-12)
    d = generate_named("path", 2)
    np.testing.assert_allclose(ground_eigenvector(eigendecompose(d), d).amplitudes, 1 / math.sqrt(2), atol=1e-12)


def test_ground_eigenvector_disconnected():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(PerronFrobeniusError, match="connected"):
        ground_eigenvector(eigendecompose(g), g)


def test_fourier_modes():
    m3 = fourier_modes(3)
    np.testing.assert_allclose(m3[0].amplitudes, np.ones(3) / math.sqrt(3), atol=1e-15)
    for mode in fourier_modes(4):
        np.testing.assert_allclose(mode.square_amplitudes(), 0.25, atol=1e-15)
    A = generate_named("ring", 4).adjacency()
    x1 = fourier_modes(4)[1].amplitudes
    np.testing.assert_allclose(A @ x1, 0.0, atol=1e-14)
    for L in (3, 5, 8):
        A = generate_named("ring", L).adjacency()
        for mode, w in zip(fourier_modes(L), fourier_eigenvalues(L)):
            np.testing.assert_allclose(A @ mode.amplitudes, w * mode.amplitudes, atol=1e-12)


def test_degeneracy_classes():
    assert eigendecompose(generate_named("star", 5)).degeneracy_classes == ((0,), (1, 2, 3), (4,))
    sd = eigendecompose(generate_named("path", 3))
    np.testing.assert_allclose(sd.eigenvalues, [math.sqrt(2), 0, -math.sqrt(2)], atol=1e-12)
    assert degeneracy_classes(sd) == ((0,), (1,), (2,))
    assert eigendecompose(generate_named("complete", 4)).degeneracy_classes == ((0,), (1, 2, 3))


def test_degeneracy_tolerance_flags_near_degenerate():
    sd = decompose_matrix(np.diag([1.0, 1.0 + 1e-10, 0.0]))
    assert sd.degeneracy_classes == ((0, 1), (2,))
    assert degeneracy_classes(sd, tol=1e-12) == ((0,), (1,), (2,))
    with pytest.raises(ValueError):
        degeneracy_classes(sd, tol=0)


def test_sign_convention():
    sd = eigendecompose(generate_named("path", 4))
    for row in sd.eigenvectors:
        lead = np.flatnonzero(np.abs(row) >= np.abs(row).max() - 1e-10)[0]
        assert row[lead] > 0


def test_projector_diagonal_on_degenerate_level():
    sd = eigendecompose(generate_named("complete", 4))
    p = sd.square_amplitudes(eigenspace_max=True)
    # projector onto the -1 eigenspace is I - J/4
    np.testing.assert_allclose(p[1:], 0.75, atol=1e-12)
    np.testing.assert_allclose(p[0], 0.25, atol=1e-12)


def test_single_particle_state_validates_norm():
    with pytest.raises(ValueError):
        SingleParticleState(np.array([1.0, 1.0]))
    assert len(SingleParticleState.normalized([1, 1j])) == 2


def test_eigh_dispatch():
    A = generate_named("ring", 5).adjacency()
    w1, _ = eigh(A, "jacobi")
    w2, _ = eigh(A, "lapack")
    np.testing.assert_allclose(sorted(w1), sorted(w2), atol=1e-12)
    with pytest.raises(ValueError):
        eigh(A, "qr")
    with pytest.raises(ValueError, match="symmetric"):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("L", range(1, 6))
def test_reconstruction_all_graphs(L):
    for g in enumerate_graphs(L):
        A = g.adjacency()
        sd = eigendecompose(g)
        U = sd.eigenvectors
        assert np.abs(A - sd.reconstruct()).max() <= 1e-10
        assert np.abs(U @ U.T - np.eye(L)).max() <= 1e-12
        off = U @ A @ U.T
        assert np.abs(off - np.diag(np.diag(off))).max() <= 1e-12 * (1 + np.linalg.norm(A))
        assert abs(sd.eigenvalues.sum()) <= 1e-12
        assert list(sd.eigenvalues) == sorted(sd.eigenvalues, reverse=True)


def test_reconstruction_sampled_l6_l7(rng):
    for L in (6, 7):
        for mask in rng.integers(0, graph_count(L), size=150):
            g = Graph(L, int(mask))
            sd = eigendecompose(g)
            assert np.abs(g.adjacency() - sd.reconstruct()).max() <= 1e-10


@pytest.mark.parametrize("L", range(2, 7))
def test_bipartite_spectral_symmetry(L):
    for g in enumerate_graphs(L):
        if is_bipartite(g) is None:
            continue
        sd = eigendecompose(g)
        w = sd.eigenvalues
        np.testing.assert_allclose(w, -w[::-1], atol=1e-10)
        for k in range(L):
            if not sd.is_degenerate(k):
                np.testing.assert_allclose(
                    sd.eigenvectors[k] ** 2, sd.eigenvectors[L - 1 - k] ** 2, atol=1e-10
                )


@pytest.mark.parametrize("L", range(2, 7))
def test_regular_and_perron_properties(L):
    for g in enumerate_graphs(L):
        degs = g.degrees()
        sd = eigendecompose(g)
        if len(set(degs)) == 1:
            assert sd.eigenvalues[0] == pytest.approx(degs[0], abs=1e-10)
            if is_connected(g):
                np.testing.assert_allclose(np.abs(sd.eigenvectors[0]), 1 / math.sqrt(L), atol=1e-10)
        if is_connected(g):
            assert ground_eigenvector(sd, g).amplitudes.real.min() > 0


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (5, 5), elements=st.floats(-10, 10, allow_nan=False)))
def test_jacobi_random_symmetric(m):
    a = m + m.T
    w, v = jacobi_eigh(a)
    np.testing.assert_allclose(v @ np.diag(w) @ v.T, a, atol=1e-9 * (1 + np.abs(a).max()))
    np.testing.assert_allclose(v.T @ v, np.eye(5), atol=1e-12)
    np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-9 * (1 + np.abs(a).max()))
