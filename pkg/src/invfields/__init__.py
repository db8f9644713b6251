"""Invariant random fields on S2, S3 and compact group orbits.

Layers, bottom to top:

- groups: SU(2) and SO(4) elements, composition, Haar sampling, seeded streams
- irrep: homogeneous polynomial modules, representation matrices, exact
  squared-modulus polynomials, Clebsch-Gordan decomposition
- bases: realized function modules on the three spaces and self-conjugated
  bases (torus-adapted, random, left-translated)
- mixing: randomized moduli-gap search, orbit-span cross-check, exact
  polynomial certificates
- fields: coefficient marginals, invariant samplers, rank-one matrix fields,
  synthesis/analysis, CSV sample format
- stats: covariance estimation, column structure checks, distributional tests
- cli: the `invfields` command
"""

from .groups import (
    RngStream,
    SO4Element,
    SU2Element,
    haar_sample,
    haar_sample_batch,
    haar_sample_so4,
    rotation_matrix,
    su2_from_euler,
    torus_element,
)
from .irrep import (
    clebsch_gordan_components,
    jacobian_pair,
    matrix_coeff,
    p_poly,
    rep_matrix,
    rep_matrix_batch,
)
from .bases import (
    SelfConjBasis,
    basis_rep_batch,
    basis_rep_matrix,
    left_translated_basis,
    make_module,
    random_selfconj_basis,
    realified_rep,
    selfconj_defects,
    sph_harm_table,
    torus_adapted_selfconj_basis,
)
from .mixing import (
    MixingReport,
    check_mixing,
    moduli_gap,
    orbit_orthogonality,
    s3_exact_mixing,
    wedge_pairing,
)
from .fields import (
    CoefficientVector,
    analyze_s2,
    bijoux_eval,
    bijoux_sample,
    bijoux_sample_batch,
    make_marginal,
    read_samples_csv,
    rotate_coeffs,
    sample_independent_batch,
    sample_invariant_gaussian,
    sample_invariant_gaussian_batch,
    synthesize,
    write_samples_csv,
)
from .stats import (
    check_column_structure,
    estimate_cov,
    gaussianity_test,
    invariance_test,
    ks_two_sample,
    matrix_invariance_test,
    phase_invariance_test,
)

__version__ = "0.1.0"

__all__ = [
    "RngStream",
    "SO4Element",
    "SU2Element",
    "haar_sample",
    "haar_sample_batch",
    "haar_sample_so4",
    "rotation_matrix",
    "su2_from_euler",
    "torus_element",
    "clebsch_gordan_components",
    "jacobian_pair",
    "matrix_coeff",
    "p_poly",
    "rep_matrix",
    "rep_matrix_batch",
    "SelfConjBasis",
    "basis_rep_batch",
    "basis_rep_matrix",
    "left_translated_basis",
    "make_module",
    "random_selfconj_basis",
    "realified_rep",
    "selfconj_defects",
    "sph_harm_table",
    "torus_adapted_selfconj_basis",
    "MixingReport",
    "check_mixing",
    "moduli_gap",
    "orbit_orthogonality",
    "s3_exact_mixing",
    "wedge_pairing",
    "CoefficientVector",
    "analyze_s2",
    "bijoux_eval",
    "bijoux_sample",
    "bijoux_sample_batch",
    "make_marginal",
    "read_samples_csv",
    "rotate_coeffs",
    "sample_independent_batch",
    "sample_invariant_gaussian",
    "sample_invariant_gaussian_batch",
    "synthesize",
    "write_samples_csv",
    "check_column_structure",
    "estimate_cov",
    "gaussianity_test",
    "invariance_test",
    "ks_two_sample",
    "matrix_invariance_test",
    "phase_invariance_test",
    "__version__",
]
