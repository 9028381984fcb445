"""Exact graph densities, twin-free blow-up structure, and measure
optimization for small graphs, with an HTTP service and CLI on top."""

from .errors import ParseError, PreconditionError
from .graphs import (
    Graph,
    TwinDecomposition,
    VertexMap,
    automorphisms,
    blow_up,
    canonical_form,
    is_canonical_form,
    is_isomorphic,
    is_strong_hom,
    is_twin_free,
    twin_free_factor,
)
from .density import (
    Measure,
    PartiallyLabeledGraph,
    QuantumGraph,
    WeightedGraph,
    boundary,
    count_induced,
    induced_density,
    labeled_density,
    polynomial_eval,
    quantum_density,
    strong_hom_count,
    strong_hom_density,
)
from .weighted import (
    EquivalenceWitness,
    RegularityReport,
    alpha,
    are_equivalent,
    continuity_gap,
    d1_commensurable,
    d1_distance,
    regularity,
)
from .blowup_opt import (
    CriticalPointReport,
    OptimizationResult,
    amgm_maximizer,
    blowup_self_density,
    blowup_self_gradient,
    critical_point_test,
    inducibility_from_sup,
    is_balanced,
    optimize_nu,
    p_eval,
)
from .probes import (
    BoundCheck,
    ClosenessReport,
    DichotomyOutcome,
    ExceptionSet,
    MismatchWitness,
    check_biclique_bound,
    check_star_bound,
    closeness_probe,
    dichotomy,
)
from .search import (
    EnumerationStream,
    EvidenceReport,
    ScanResult,
    enumerate_graphs,
    extremal_scan,
    report_inducibility_evidence,
)

__version__ = "0.1.0"

__all__ = [
    "ParseError",
    "PreconditionError",
    "Graph",
    "TwinDecomposition",
    "VertexMap",
    "automorphisms",
    "blow_up",
    "canonical_form",
    "is_canonical_form",
    "is_isomorphic",
    "is_strong_hom",
    "is_twin_free",
    "twin_free_factor",
    "Measure",
    "PartiallyLabeledGraph",
    "QuantumGraph",
    "WeightedGraph",
    "boundary",
    "count_induced",
    "induced_density",
    "labeled_density",
    "polynomial_eval",
    "quantum_density",
    "strong_hom_count",
    "strong_hom_density",
    "EquivalenceWitness",
    "RegularityReport",
    "alpha",
    "are_equivalent",
    "continuity_gap",
    "d1_commensurable",
    "d1_distance",
    "regularity",
    "CriticalPointReport",
    "OptimizationResult",
    "amgm_maximizer",
    "blowup_self_density",
    "blowup_self_gradient",
    "critical_point_test",
    "inducibility_from_sup",
    "is_balanced",
    "optimize_nu",
    "p_eval",
    "BoundCheck",
    "ClosenessReport",
    "DichotomyOutcome",
    "ExceptionSet",
    "MismatchWitness",
    "check_biclique_bound",
    "check_star_bound",
    "closeness_probe",
    "dichotomy",
    "EnumerationStream",
    "EvidenceReport",
    "ScanResult",
    "enumerate_graphs",
    "extremal_scan",
    "report_inducibility_evidence",
]
