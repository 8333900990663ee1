"""
Numerical engines: divergences, density classes, packings and the sieve.

Common entry points:
    >>> from sievelab.engines import l2_distance, kl_divergence, hellinger
    >>> from sievelab.engines import ConvMixSpec, sample_member, membership
    >>> from sievelab.engines import CandidatePool, entropy_profile, run_sieve
"""

# Divergences
from sievelab.engines.divergences import (
    chi_square,
    diameter_upper_bound,
    elementary_log_check,
    equivalence_constants,
    h_derivative,
    h_function,
    hellinger,
    kl_divergence,
    l2_distance,
)

# Classes
from sievelab.engines.classes import (
    AmbientSpec,
    BVSpec,
    ClassSpec,
    ConvMixSpec,
    LipschitzSpec,
    QuadSpec,
    convex_combine,
    gram_matrix,
    membership,
    sample_member,
    sample_near,
    sin_family,
    spec_from_dict,
    uniform_density,
)

# Packings and entropy
from sievelab.engines.packing import (
    CandidatePool,
    EntropyCurve,
    contract_packing,
    entropy_profile,
    global_local_gap_check,
    greedy_maximal_packing,
    local_entropy_estimate,
    lower_bound_radius,
    solve_critical_epsilon,
)

# Sieve
from sievelab.engines.sieve import (
    SieveEstimator,
    check_trajectory,
    compute_constants,
    epsilon_schedule,
    mixture_lift,
    run_adaptive_sieve,
    run_sieve,
)
from sievelab.engines.simplex import fit_simplex_weights, project_to_simplex

__all__ = [
    # Divergences
    "l2_distance",
    "kl_divergence",
    "chi_square",
    "hellinger",
    "h_function",
    "h_derivative",
    "equivalence_constants",
    "elementary_log_check",
    "diameter_upper_bound",
    # Classes
    "ClassSpec",
    "AmbientSpec",
    "LipschitzSpec",
    "BVSpec",
    "QuadSpec",
    "ConvMixSpec",
    "spec_from_dict",
    "membership",
    "convex_combine",
    "uniform_density",
    "sin_family",
    "gram_matrix",
    "sample_member",
    "sample_near",
    "project_to_simplex",
    "fit_simplex_weights",
    # Packing
    "CandidatePool",
    "EntropyCurve",
    "greedy_maximal_packing",
    "local_entropy_estimate",
    "entropy_profile",
    "solve_critical_epsilon",
    "lower_bound_radius",
    "global_local_gap_check",
    "contract_packing",
    # Sieve
    "SieveEstimator",
    "compute_constants",
    "epsilon_schedule",
    "run_sieve",
    "run_adaptive_sieve",
    "check_trajectory",
    "mixture_lift",
]
