"""Best-approximation distances and Birkhoff-James orthogonality.

Finite-dimensional lp spaces and matrix operators: minimal distances to
subspaces, the functionals and operators that certify them, orthogonality
tests with witnesses, and brute-force oracles for independent verification.
"""

from .errors import (
    BjApproxError,
    CapacityError,
    DegenerateInputError,
    DimensionMismatchError,
    InternalInconsistencyError,
    InvalidExponentError,
    InvalidParameterError,
    PreconditionError,
    RankDeficiencyError,
)
from .functional_approx import (
    ApproxResult,
    best_approx_functional,
    check_best_approx_certificate_functional,
    classical_duality_eval,
    codim1_closed_form_2d,
    dist_point_subspace_lp,
    max_on_sphere_subspace,
    verify_remark_inequality,
)
from .lp_core import (
    Exponent,
    Functional,
    LpVector,
    Subspace,
    conjugate_exponent,
    duality_map,
    lp_norm,
    norm_attainment_point,
    nullspace_intersection,
    sip,
    symmetric_eigen,
)
from .operator_approx import (
    MatrixOperator,
    NdimCertificateReport,
    NormAttainmentSet,
    best_approx_operator_1d,
    dist_formula_hilbert,
    dist_formula_smooth_codomain,
    hilbert_lambda_condition,
    lemma_norm_eval,
    norm_attainment_set,
    operator_norm,
    verify_ndim_certificate_hilbert,
)
from .oracle import (
    GridMaxReport,
    OracleReport,
    grid_max_constrained,
    primal_min_lp,
    primal_min_operator,
)
from .orthogonality import (
    OrthogonalityVerdict,
    StrongOrthogonalityVerdict,
    bj_orthogonal_functionals,
    bj_orthogonal_matrices_hilbert,
    bj_orthogonal_vectors,
    golden_section_min,
    semicone_membership,
    strong_bj_orthogonal,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxResult",
    "BjApproxError",
    "CapacityError",
    "DegenerateInputError",
    "DimensionMismatchError",
    "Exponent",
    "Functional",
    "GridMaxReport",
    "InternalInconsistencyError",
    "InvalidExponentError",
    "InvalidParameterError",
    "LpVector",
    "MatrixOperator",
    "NdimCertificateReport",
    "NormAttainmentSet",
    "OracleReport",
    "OrthogonalityVerdict",
    "PreconditionError",
    "RankDeficiencyError",
    "StrongOrthogonalityVerdict",
    "Subspace",
    "best_approx_functional",
    "best_approx_operator_1d",
    "bj_orthogonal_functionals",
    "bj_orthogonal_matrices_hilbert",
    "bj_orthogonal_vectors",
    "check_best_approx_certificate_functional",
    "classical_duality_eval",
    "codim1_closed_form_2d",
    "conjugate_exponent",
    "dist_formula_hilbert",
    "dist_formula_smooth_codomain",
    "dist_point_subspace_lp",
    "duality_map",
    "golden_section_min",
    "grid_max_constrained",
    "hilbert_lambda_condition",
    "lemma_norm_eval",
    "lp_norm",
    "max_on_sphere_subspace",
    "norm_attainment_point",
    "norm_attainment_set",
    "nullspace_intersection",
    "operator_norm",
    "primal_min_lp",
    "primal_min_operator",
    "semicone_membership",
    "sip",
    "strong_bj_orthogonal",
    "symmetric_eigen",
    "verify_ndim_certificate_hilbert",
    "verify_remark_inequality",
]
