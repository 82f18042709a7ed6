"""ED degrees of middle-catalecticant hypersurfaces under the Bombieri-Weyl form.

Two independent routes to the same integers: exact construction of the quartic
invariant of squared binary forms followed by Euler-characteristic assembly,
and numeric counting of critical points by homotopy continuation.
"""

from .bwforms import (
    BinaryForm,
    HarmonicBasisIndex,
    bw_pair_coeff,
    bw_pair_diff,
    harmonic_components,
    harmonic_element,
    pairing_rule,
)
from .catalecticant import (
    QuarticInvariant,
    SingularComponent,
    SymbolicForm,
    bezout_slice_points,
    build_quartic,
    catalecticant_det,
    catalecticant_matrix,
    osculating_containment_check,
    osculating_singularity_check,
    square_symbolic,
    verify_component,
)
from .euler import (
    EDResult,
    SingularDataRegistry,
    aluffi_harris,
    builtin_registry,
    catanese_trifogli,
    chi_quadric_or_quartic_section,
    chi_smooth_ci,
    chi_with_singularities,
    corollary_eddegree,
    eddegree_pipeline,
    milnor_number_germ,
)
from .exactcore import (
    GaussianRational,
    PolynomialError,
    RationalSeriesSpec,
    SparsePoly,
    content_normalize,
    format_poly,
    parse_poly,
    series_coefficient,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "EDResult",
    "GaussianRational",
    "HarmonicBasisIndex",
    "PolynomialError",
    "QuarticInvariant",
    "RationalSeriesSpec",
    "SingularComponent",
    "SingularDataRegistry",
    "SparsePoly",
    "SymbolicForm",
    "aluffi_harris",
    "bezout_slice_points",
    "build_quartic",
    "builtin_registry",
    "bw_pair_coeff",
    "bw_pair_diff",
    "catalecticant_det",
    "catalecticant_matrix",
    "catanese_trifogli",
    "chi_quadric_or_quartic_section",
    "chi_smooth_ci",
    "chi_with_singularities",
    "content_normalize",
    "corollary_eddegree",
    "eddegree_pipeline",
    "format_poly",
    "harmonic_components",
    "harmonic_element",
    "milnor_number_germ",
    "osculating_containment_check",
    "osculating_singularity_check",
    "pairing_rule",
    "parse_poly",
    "series_coefficient",
    "square_symbolic",
    "verify_component",
    "__version__",
]
