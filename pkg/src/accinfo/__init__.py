"""Information-guessing tradeoffs for binary joints and accessible information of qubit dichotomies."""

from .binary_dist import (
    BoundaryPointError,
    DomainError,
    InfeasibleError,
    JointDist,
    MarginalX,
    ParamCoords,
    coords_from_joint,
    fano_upper_bound,
    guessing_probability,
    hellman_raviv_lower_bound,
    info_derivatives,
    joint,
    joint_from_coords,
    monotonicity_holds,
    mutual_information,
    tradeoff_max,
)
from .qubit_dichotomy import (
    DegenerateError,
    Dichotomy,
    Effect,
    QubitState,
    StateError,
    helstrom_matrix,
    induced_joint,
    lambda_helstrom,
    lambda_star,
    lorenz_curve,
    mu,
    omega,
    omega_purity,
    povm_from_lambda,
)
from .solver import (
    SolveReport,
    SolverConfig,
    SolverError,
    bisect_accessible_info,
    brute_force_accessible_info,
    concavity_scan,
    info_derivative,
    info_of_lambda,
    probe_conjectures,
)

__all__ = [
    "BoundaryPointError",
    "DegenerateError",
    "Dichotomy",
    "DomainError",
    "Effect",
    "InfeasibleError",
    "JointDist",
    "MarginalX",
    "ParamCoords",
    "QubitState",
    "SolveReport",
    "SolverConfig",
    "SolverError",
    "StateError",
    "bisect_accessible_info",
    "brute_force_accessible_info",
    "concavity_scan",
    "coords_from_joint",
    "fano_upper_bound",
    "guessing_probability",
    "hellman_raviv_lower_bound",
    "helstrom_matrix",
    "induced_joint",
    "info_derivative",
    "info_derivatives",
    "info_of_lambda",
    "joint",
    "joint_from_coords",
    "lambda_helstrom",
    "lambda_star",
    "lorenz_curve",
    "monotonicity_holds",
    "mu",
    "mutual_information",
    "omega",
    "omega_purity",
    "povm_from_lambda",
    "probe_conjectures",
    "tradeoff_max",
]
