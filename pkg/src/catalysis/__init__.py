"""Exact tools for entanglement catalysis and supercatalysis of bipartite pure states."""

from .errors import (
    CatalysisError,
    DimensionMismatch,
    DimensionTooHigh,
    IndistinguishableEntropy,
    InvalidOrdering,
    NegativeEntry,
    NotIncomparable,
    NotNormalized,
    TooLarge,
    Unbounded,
    Unsupported,
    VerticesUnavailable,
)
from .majorization import (
    Comparability,
    NoGo,
    SupercatalysisCheck,
    TransformReport,
    check_proposition1,
    compare,
    majorizes,
    nogo_check,
    verify_catalysis,
    verify_supercatalysis,
)
from .opmp import (
    Catalyzability,
    Opmp,
    Ordering,
    build_opmp,
    chi_of,
    enumerate_opmps,
    enumerate_orderings,
    hook_length_count,
    is_catalyzable,
    realizable_orderings,
)
from .oracle import GridSpec, scan_catalysts, scan_supercatalysts
from .polyhedra import HalfspaceSystem, Polyhedron, Row, Tag, contains, feasibility, intersect, polyhedron, vertices
from .rational import (
    Cmp,
    EntropyInterval,
    Spectrum,
    entropy,
    entropy_compare,
    make_spectrum,
    parse_rational,
    tensor,
    uniform,
)
from .supercat import (
    Strictness,
    StrictnessProfile,
    SupercatalysisCertificate,
    check_bound_attainment,
    classify_strictness,
    delta_upper_bound,
    find_supercatalyst,
    find_supercatalyst_to,
    make_certificate,
    supercat_from_opmp,
)

__all__ = [name for name in dir() if not name.startswith("_")]
