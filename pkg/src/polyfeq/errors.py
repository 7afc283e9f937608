"""Exceptions shared across modules."""

from .abelian import GroupError, NotAnAutomorphism


class CapacityError(ValueError):
    """A computation would exceed the configured row or size bounds."""


class TheoremViolation(AssertionError):
    """Two routes that must agree by a theorem disagree; only an implementation bug can cause this."""


class HypothesisViolation(ValueError):
    pass


class NotNormalized(GroupError):
    """The equation is not of the form ``Σ λ_i f_i(x + c_i(y))``; normalize it first."""


__all__ = ["CapacityError", "GroupError", "HypothesisViolation", "NotAnAutomorphism", "NotNormalized", "TheoremViolation"]
