"""Monomer-dimer entropy curves for layered graph families.

The library builds exact subset-indexed transfer matrices for sequences of
graphs made of repeated layers, computes their pressure and entropy curves
through Perron roots and a Legendre transform, and compares the curves
against closed-form lower and upper bounds for regular bipartite graphs.
"""

from .errors import NumericFailureError, ResourceLimitError
from .graphs import (
    BipartiteLayerTag,
    Graph,
    LayeredFamily,
    build_layer_graph,
    classify_wiring,
    disjoint_union,
    enumerate_connections,
    enumerate_regular_bipartite_class,
    even_odd_connection,
    graph_from_text,
    graph_to_text,
    identity_connection,
    make_bethe_sequence_element,
    make_complete_bipartite,
    make_cycle,
    make_edgeless,
    make_torus,
    proper_two_coloring,
    random_bipartite_glue,
    shift_connection,
    zero_connection,
)
from .matching import (
    MatchingPolynomial,
    finite_entropy_point,
    krr_matching_count,
    matching_polynomial,
    min_matchings_over_class,
    monomer_dimer_cover_count,
    newton_check,
    permanent,
    polynomial_from_json,
    polynomial_to_json,
)
from .transfer import (
    ConnectionLift,
    IntraLayerTable,
    SubsetIndex,
    TransferMatrix,
    build_intra_table,
    build_transfer,
    derivative_matrix,
    evaluate_numeric,
    evaluate_shifted,
    exact_trace_power,
    lift_connection,
    max_pressure_check,
    spectral_radius,
)
from .thermo import (
    EntropyCurve,
    default_t_grid,
    density,
    disjoint_krr_family,
    entropy_point,
    krr_curve,
    pressure,
    pressure_shifted,
    sweep,
)
from . import bounds

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
