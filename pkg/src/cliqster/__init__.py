"""Maximal-clique basis decomposition of networks.

A simple graph is modelled as independent Bernoulli edges whose probabilities
are a weighted sum of indicator matrices, one per maximal clique. The weights
come from an ordinary least-squares fit to the observed adjacency, and their
sorted values serve as a compact feature vector for comparing networks.
"""
from .baselines import svd_feature_vector, svd_spectrum
from .cliques import Clique, brute_force_maximal_cliques, enumerate_maximal_cliques
from .core import (
    CliqueBasis,
    CoefficientVector,
    DecompositionError,
    GeneratorMatrix,
    GramSystem,
    assemble_system,
    build_basis,
    decompose,
    feature_vector,
    reconstruct_Z,
    sample_network,
    solve_coefficients,
)
from .estimators import CliqsterDecomposer, SVDDecomposer, get_decomposer, register_decomposer
from .evaluation import (
    ExperimentReport,
    FeatureMatrix,
    NearestNeighborVote,
    clustering_error,
    kmeans_cluster,
    knn_classify,
    run_classification,
    run_distinguishability,
    sample_protocol,
)
from .graph import (
    EdgeListError,
    Graph,
    SparseGraphError,
    connected_components,
    degeneracy_ordering,
    density,
    from_edge_list,
    induced_subgraph,
    read_edge_list,
    sample_induced,
)
from .netstats import PowerLawFit, fit_power_law, summary
from .synth import CategoryProfile, CliqueBoost, builtin_profiles, generate, get_profile

__version__ = "0.1.0"

__all__ = [
    "CategoryProfile", "CliqsterDecomposer", "Clique", "CliqueBasis", "CliqueBoost", "CoefficientVector",
    "DecompositionError", "EdgeListError", "ExperimentReport", "FeatureMatrix", "GeneratorMatrix", "Graph",
    "GramSystem", "NearestNeighborVote", "PowerLawFit", "SVDDecomposer", "SparseGraphError", "assemble_system",
    "brute_force_maximal_cliques", "build_basis", "builtin_profiles", "clustering_error", "connected_components",
    "decompose", "degeneracy_ordering", "density", "enumerate_maximal_cliques", "feature_vector", "fit_power_law",
    "from_edge_list", "generate", "get_decomposer", "get_profile", "induced_subgraph", "kmeans_cluster",
    "knn_classify", "read_edge_list", "reconstruct_Z", "register_decomposer", "run_classification",
    "run_distinguishability", "sample_induced", "sample_network", "sample_protocol", "solve_coefficients",
    "summary", "svd_feature_vector", "svd_spectrum",
]
