"""Vertex mode entanglement of N-boson condensates on tunnelling graphs."""

__version__ = "0.1.0"

from .entanglement import (
    EntanglementReport,
    VertexOccupationDistribution,
    entropy_curve,
    graph_entanglement_report,
    max_entropy,
    ratio_curve,
    vertex_distribution,
    vertex_entropy,
)
from .fock import (
    FockBasis,
    FockState,
    ManyBodyHamiltonian,
    build_hamiltonian,
    condensate_state,
    entropy_timeseries,
    enumerate_basis,
    evolve,
    vertex_marginal,
)
from .graph_core import (
    Graph,
    GraphError,
    enumerate_graphs,
    from_edge_list,
    generate_named,
    is_bipartite,
    is_connected,
)
from .search import SearchResult, search, search_any_eigenstate, search_ground
from .spectral import (
    SingleParticleState,
    SpectralDecomposition,
    degeneracy_classes,
    eigendecompose,
    fourier_modes,
    ground_eigenvector,
)
