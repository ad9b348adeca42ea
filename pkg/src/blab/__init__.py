"""blab: a numerical laboratory for Blaschke products with boundary-clustered zeros.

Core objects: BlaschkeProduct over a ZeroSequence, model functions and
Stolz-type regions on the disk, inequality verification drivers, critical
point extraction, and Hardy/Bergman integral means.
"""

from .bounds import (
    BoundReport,
    EnvelopeFit,
    chord_check,
    envelope_fit,
    envelope_grid,
    lemma_bound,
    lemma_check,
    lemma_lhs,
    schwarz_pick_bound,
    schwarz_pick_check,
    theorem_bound,
    theorem_check,
    three_point_check,
)
from .critical import (
    CriticalSet,
    RationalForm,
    SumSeries,
    argument_principle_count,
    critical_points,
    critical_sum,
    log_weighted_sum,
    protas_sum,
    to_rational,
)
from .errors import (
    BlabError,
    ContourError,
    DomainError,
    EmptyRegionError,
    InvalidZeroError,
    ResolutionError,
    RootFindingError,
    SamplingError,
)
from .fileio import (
    atomic_write_text,
    canonical_json,
    complex_pair,
    format_zeros,
    means_csv,
    parse_zero_line,
    points_csv,
    read_boundary,
    read_zeros,
    series_csv,
    write_boundary,
    write_means_csv,
    write_points_csv,
    write_report,
    write_series_csv,
    write_zeros,
)
from .means import (
    MeansTable,
    bergman_integral,
    default_hardy_nodes,
    hardy_mean,
    hp_trend,
    radial_geometric_family,
)
from .products import (
    BlaschkeProduct,
    ZeroSequence,
    blaschke_factor,
    blaschke_sum,
    factor_derivative,
    truncation_tail,
)
from .regions import (
    BoundarySet,
    GeometricLaw,
    ModelFunction,
    PowerLaw,
    StolzSpec,
    angular_halfwidth,
    in_stolz,
    neighborhood_measure,
    region_boundary,
    region_is_empty,
    sample_zeros,
    type_beta,
)

__version__ = "0.1.0"

__all__ = [
    "BlabError",
    "BlaschkeProduct",
    "BoundReport",
    "BoundarySet",
    "ContourError",
    "CriticalSet",
    "DomainError",
    "EmptyRegionError",
    "EnvelopeFit",
    "GeometricLaw",
    "InvalidZeroError",
    "MeansTable",
    "ModelFunction",
    "PowerLaw",
    "RationalForm",
    "ResolutionError",
    "RootFindingError",
    "SamplingError",
    "StolzSpec",
    "SumSeries",
    "ZeroSequence",
    "angular_halfwidth",
    "argument_principle_count",
    "atomic_write_text",
    "bergman_integral",
    "blaschke_factor",
    "blaschke_sum",
    "canonical_json",
    "chord_check",
    "complex_pair",
    "critical_points",
    "critical_sum",
    "default_hardy_nodes",
    "envelope_fit",
    "envelope_grid",
    "factor_derivative",
    "format_zeros",
    "hardy_mean",
    "hp_trend",
    "in_stolz",
    "lemma_bound",
    "lemma_check",
    "lemma_lhs",
    "log_weighted_sum",
    "means_csv",
    "neighborhood_measure",
    "parse_zero_line",
    "points_csv",
    "protas_sum",
    "radial_geometric_family",
    "read_boundary",
    "read_zeros",
    "region_boundary",
    "region_is_empty",
    "sample_zeros",
    "schwarz_pick_bound",
    "schwarz_pick_check",
    "series_csv",
    "theorem_bound",
    "theorem_check",
    "three_point_check",
    "to_rational",
    "truncation_tail",
    "type_beta",
    "write_boundary",
    "write_means_csv",
    "write_points_csv",
    "write_report",
    "write_series_csv",
    "write_zeros",
    "__version__",
]
