"""Linear functional equations on finite abelian groups and the degrees of their solutions."""

from .abelian import Element, FinAbGroup, GroupHom, RingZm, invert_automorphism, is_automorphism
from .aichinger import characterize, find_decomposition, verify_decomposition
from .equations import LinearFunctionalEquation, check_hypotheses, instantiate, solve_equation
from .errors import CapacityError, GroupError, HypothesisViolation, NotAnAutomorphism, TheoremViolation
from .functions import FunctionTable, MultiFunctionTable
from .linalg import IntLinearSystem, ModuleCoset, solve
from .polynomial import Degree, DegreeReport, degree, is_degree_at_most

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Degree",
    "DegreeReport",
    "Element",
    "FinAbGroup",
    "FunctionTable",
    "GroupError",
    "GroupHom",
    "HypothesisViolation",
    "IntLinearSystem",
    "LinearFunctionalEquation",
    "ModuleCoset",
    "MultiFunctionTable",
    "NotAnAutomorphism",
    "RingZm",
    "TheoremViolation",
    "characterize",
    "check_hypotheses",
    "degree",
    "find_decomposition",
    "instantiate",
    "invert_automorphism",
    "is_automorphism",
    "is_degree_at_most",
    "solve",
    "solve_equation",
    "verify_decomposition",
]
