"""Hypercontractive inequalities with optimal exponents, and their coding-theory consequences."""
from .bounds import (
    BoundReport,
    ai_bounds,
    block_error_bound,
    eta_star,
    gk_curve,
    p_ue_bounds,
    p_ue_exact,
    weight_bound_margin,
)
from .channel import bhattacharyya, capacity, make_generic, make_kec, make_ksc, parse_channel
from .code import (
    LinearCode,
    WeightDistribution,
    erasure_entropy,
    fourier,
    macwilliams,
    make_code,
    min_distance,
    projected_dim,
    weight_distribution,
)
from .errors import SdpiError, ViolationFound
from .gf import Field, Matrix, make_field, null_space, rref_rank
from .prob_space import FiniteDist, make_dist, make_uniform
from .sdpi import lambda_opt, r_ratio, renyi_divergence, sdpi_ratio, sup_search, z_of_lambda
from .simulate import SimResult, erasure_exact, monte_carlo_pb
from .tensor_fn import NestedNormSpec, TensorFn, cond_exp, nested_norm, noise, noise_all, q_norm
from .verifier import CheckReport, check_base_case, check_minkowski, check_tensor, monotone_suite

__version__ = "0.1.0"
