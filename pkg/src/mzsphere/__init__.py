"""Norm discretization on the q-sphere: kernels, partitions, budgets, experiments."""

from .kernels import (
    DlvpKernel,
    UltrasphericalEvaluator,
    cd_kernel_eval,
    dlvp_deriv_bound,
    dlvp_l1_bound,
    dlvp_sup_bound,
    harmonic_dim,
    kernel_deriv_integral,
    kernel_l1,
    kernel_sup,
    poly_space_dim,
    sphere_area,
    zonal_kernel_sum,
)
from .geometry import (
    CompatiblePair,
    MeshNormEstimate,
    OccupancyFailure,
    PointSet,
    SphereConstants,
    SpherePoint,
    build_compatible_pair,
    geodesic,
    mesh_norm_estimate,
    sample_uniform,
    sphere_constants,
)
from .partition import (
    CirclePartition,
    EqualAreaPartition,
    cap_area,
    cap_colatitude,
    equal_area_partition,
    partition_norm_bound,
)
from .quadrature import QuadratureRule, gauss_weight_rule, quadrature_rule
from .sphharm import basis_size, sph_harm_basis
from .gram import (
    EigStats,
    ExtremalEigs,
    GramMatrix,
    addition_kernel,
    budget_even_p,
    budget_tropp,
    eig_experiment,
    explicit_basis_matrix_q2,
    extremal_eigs,
    gram_matrix,
)
from .polynomials import SpherePolynomial, evaluate_all, random_polynomial
from .norms import continuous_norm, continuous_norms, discrete_norm, discrete_norms
from .coupon import (
    budget_coupon,
    coupon_budget,
    coupon_condition_lhs,
    coupon_failure_bound,
    coupon_simulate,
)
from .mzcheck import (
    DEFAULT_P_LIST,
    InfeasibleBudget,
    MeshWeights,
    MzReport,
    det_mz_check,
    mesh_norm_weights,
    occupancy_weights,
    random_mz_experiment,
    random_mz_run,
    required_patches_det,
)

__version__ = "0.1.0"
