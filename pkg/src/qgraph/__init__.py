"""Spectral determinants and eigenvalue clusters of Schrodinger operators on equilateral quantum graphs."""

from .charmatrix import (
    CharacteristicMatrix,
    CoefficientVector,
    assemble_regular,
    assemble_scaled,
    determinant,
    flower_determinant,
    nullspace,
)
from .forests import (
    EnumerationLimitError,
    MonomialAnalysis,
    SaturatedForest,
    ShiftPolynomial,
    bouquet_expansion,
    enumerate_saturated_forests,
    exact_incidence_determinant,
    forest_expansion,
    monomial_analysis,
    shift_polynomial,
)
from .graph import (
    BouquetShape,
    ComponentSummary,
    Edge,
    GraphError,
    MetricGraph,
    build_bouquet,
    build_graph,
    incidence_matrix,
    recognize_bouquet,
    subgraph_components,
)
from .io import fixture_path, graph_spec, load_graph_spec
from .propagator import (
    EdgePotential,
    TransferData,
    TransferPrediction,
    asymptotic_predictions,
    propagate,
    transfer_zero_oracle,
)
from .spectrum import (
    ClusterRecord,
    Eigenvalue,
    NoEigenvalueError,
    ScanOptions,
    SpectrumReport,
    cluster_analysis,
    cluster_scan,
    refine_eigenvalue,
    scan_spectrum,
    smallest_eigenvalue,
)

__version__ = "0.1.0"
