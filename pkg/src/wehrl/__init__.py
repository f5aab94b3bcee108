"""Wehrl entropy of spin states via the Majorana points representation."""
from .closed_forms import (
    Embedding,
    Spin2Edges,
    chords_from_points,
    cos_phi,
    edge_sums,
    embeddable4,
    spin1_entropy,
    spin2_entropy,
    spin2_inverse_c,
    spin32_entropy,
    spin32_realizable,
)
from .entropy import (
    EntropyReport,
    coherent_entropy,
    entropy_lower_bound,
    husimi_grid,
    ln_c_quadrature,
    s_norm_exact,
    s_norm_quadrature,
    wehrl_closed,
    wehrl_from_points,
    wehrl_quadrature,
)
from .errors import (
    CeilingExceeded,
    CountMismatch,
    DegenerateGeometry,
    DegenerateState,
    NotEmbeddable,
    NotNormalized,
    WehrlError,
)
from .majorana import (
    MajoranaDecomposition,
    analyze,
    canonical_order,
    chord_sq,
    max_pairwise_chord_sq,
    multiset_distance,
    rotate_state,
    rotate_to_north,
    su2_rotation,
    synthesize,
)
from .quadrature import QuadratureGrid
from .search import (
    MinimizeReport,
    SearchConfig,
    SweepRow,
    minimize_entropy,
    perturbation_sweep,
    quadratic_coefficient,
)
from .spin import (
    NORTH,
    SOUTH,
    SpherePoint,
    SpinState,
    coherent_state,
    husimi,
    overlap,
    random_points,
    random_state,
)

__all__ = [
    "analyze",
    "canonical_order",
    "CeilingExceeded",
    "chord_sq",
    "chords_from_points",
    "coherent_entropy",
    "coherent_state",
    "cos_phi",
    "CountMismatch",
    "DegenerateGeometry",
    "DegenerateState",
    "edge_sums",
    "embeddable4",
    "Embedding",
    "entropy_lower_bound",
    "EntropyReport",
    "husimi",
    "husimi_grid",
    "ln_c_quadrature",
    "MajoranaDecomposition",
    "max_pairwise_chord_sq",
    "minimize_entropy",
    "MinimizeReport",
    "multiset_distance",
    "NORTH",
    "NotEmbeddable",
    "NotNormalized",
    "overlap",
    "perturbation_sweep",
    "quadratic_coefficient",
    "QuadratureGrid",
    "random_points",
    "random_state",
    "rotate_state",
    "rotate_to_north",
    "s_norm_exact",
    "s_norm_quadrature",
    "SearchConfig",
    "SOUTH",
    "SpherePoint",
    "spin1_entropy",
    "spin2_entropy",
    "spin2_inverse_c",
    "Spin2Edges",
    "spin32_entropy",
    "spin32_realizable",
    "SpinState",
    "su2_rotation",
    "SweepRow",
    "synthesize",
    "wehrl_closed",
    "wehrl_from_points",
    "wehrl_quadrature",
    "WehrlError",
]

__version__ = "0.1.0"
