"""Exception types shared across the package.

``DomainError`` covers violated mathematical preconditions (a caller asked a
well-formed question whose hypotheses fail); ``InputError`` covers malformed
input data (bad JSON, wrong schema, non-integer matrix entries).  The CLI
maps them to exit codes 2 and 1 respectively.
"""

from __future__ import annotations


class InputError(Exception):
    """Malformed input: bad JSON, schema violations, inexact numbers."""

    code = "malformed-input"


class DomainError(Exception):
    """A mathematical precondition of the requested operation fails."""

    code = "domain-error"


class DimensionMismatch(DomainError):
    code = "dimension-mismatch"


class IneffectiveRepresentation(DomainError):
    code = "ineffective-representation"


class NotComplexityOne(DomainError):
    code = "not-complexity-one"


class NotNonProper(DomainError):
    """The moment map is proper, so no nonnegative relation exists."""

    code = "not-non-proper"


class ExactnessFailure(DomainError):
    """No primitive character cuts out this subgroup exactly."""

    code = "exactness-failure"


class ExceptionalPoint(DomainError):
    code = "exceptional-point"


class ComplexityNotOne(DomainError):
    code = "complexity-not-one"


class DegenerateGrid(DomainError):
    code = "degenerate-grid"


class PointNotFixed(DomainError):
    code = "point-not-fixed"


class PointNotInOrbit(DomainError):
    code = "point-not-in-orbit"


class InvalidRank(DomainError):
    code = "invalid-rank"
