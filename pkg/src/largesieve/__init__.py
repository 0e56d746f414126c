"""Numerical experiments around large sieve inequalities on the n-torus."""

__version__ = "0.1.0"

from .errors import ConvergenceError, InvariantViolation, ResourceCapError
from .torus import (
    PointSet,
    TorusPoint,
    enumerate_farey_line_Tprime,
    enumerate_order_ball,
    enumerate_prime_line_T,
    enumerate_S,
    make_fraction,
    order,
    primes_upto,
    torus_distance,
)
from .expsums import (
    CoeffBox,
    LhsResult,
    eval_expsum,
    exact_lhs_prime_line,
    l2_norm_sq,
    make_coeffs,
    sieve_lhs,
    unit_phase,
)
from .kernel import kernel_weight, phi, triangle, v_closed, v_truncated
from .spacing import farey_line_max_count, lemma2_bound, m_of, min_spacing, neighbor_count
from .duality import dual_constant, duality_gap, forward_constant
from .experiments import (
    ExperimentReport,
    dyadic_decompose,
    kernel_identity_check,
    majorant_gallagher,
    majorant_goal,
    majorant_improved,
    majorant_mv_classical,
    majorant_thm2_product,
    run_classical_check,
    run_ratio_experiment,
    slope_fit,
)
