"""Exact, certificate-producing computation of zero-sum constants.

Groups are finite abelian groups given by invariant factors; sequences are
multisets over them. The solver finds zero-sum subsequences of a prescribed
length and computes ``D(G)`` and ``s_L(G)`` for small groups exactly.
"""

from .errors import (
    AssumptionViolationError,
    ConfigurationError,
    DomainError,
    GroupMismatchError,
    InternalContradictionError,
    ResourceCapError,
    ValidationError,
    ZeroSumError,
)
from .groups import Group, GroupElement, add, davenport_formula_p_group, enumerate_elements
from .sequences import Sequence, concat, is_subsequence, length, remove, sigma
from .solver import (
    Certificate,
    ExtremalResult,
    compute_davenport,
    compute_s_exact,
    find_fixed_length_zero_sum,
    has_short_zero_sum,
    verify_certificate,
)
from .constructions import general_lower_bound, kubertin_lower_bound
from .registry import ConstantRecord, Registry, predict, self_check
from .lifting import LiftingPlan, kernel_divide, lift_zero_sum, project, upper_bound_value
from .induction import peel_find, registry_precondition

__version__ = "0.1.0"
