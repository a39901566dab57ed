"""Subtorus representations H inside (S^1)^n acting on C^n.

A compact abelian subgroup of the standard torus is presented either by the
integer weight matrix of its coordinate characters (connected subtori) or as
the kernel of an integer character matrix (which also captures disconnected
subgroups exactly).  This module decides surjectivity and properness of the
quadratic moment map, extracts the primitive monomial character cutting out
a complexity-one subgroup, splits coordinates into a surjective block and a
toric block, computes stabilizers of coordinate subspaces, and classifies
exceptional orbits.

Values are immutable and operations pure.  All group-level decisions are
exact; floating point appears only in ``moment_eval``, whose complex input
is sample data rather than a decision input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    ExactnessFailure,
    IneffectiveRepresentation,
    NotComplexityOne,
    NotNonProper,
)
from .lattice import (
    NONNEG_NONZERO,
    STRICT_POSITIVE,
    IntMatrix,
    exists_sign_relation,
    invariant_factors,
    lattice_kernel,
    same_row_lattice,
)

Presentation = Literal["image", "kernel"]


@dataclass(frozen=True)
class SubtorusRep:
    """A closed subgroup H of (S^1)^n acting on C^n by inclusion.

    ``image`` presentation: ``matrix`` is h x n with columns the weights
    eta_j; H is the (connected) image of (S^1)^h under those characters.
    ``kernel`` presentation: ``matrix`` is (n-h) x n and H is the common
    kernel of its row characters; disconnected subgroups are supported
    here only.  Coordinate indices are 0-based throughout.
    """

    n: int
    presentation: Presentation
    matrix: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", IntMatrix.coerce(self.matrix))
        if self.n < 1:
            raise ValueError("need at least one complex coordinate")
        if self.matrix.cols != self.n:
            raise ValueError("matrix must have one column per coordinate")
        if self.presentation == "kernel":
            if self.matrix.rows > self.n:
                raise ValueError("kernel presentation has more rows than coordinates")
            if len(invariant_factors(self.matrix)) != self.matrix.rows:
                raise ValueError("kernel presentation requires full row rank")
        elif self.presentation != "image":
            raise ValueError(f"unknown presentation {self.presentation!r}")

    @property
    def h(self) -> int:
        """Dimension of H."""
        if self.presentation == "image":
            return self.matrix.rows
        return self.n - self.matrix.rows

    @cached_property
    def _weights(self) -> IntMatrix:
        if self.presentation == "image":
            return self.matrix
        return lattice_kernel(self.matrix).transpose()

    def weights(self) -> IntMatrix:
        """The h x n matrix of isotropy weights of the identity component,
        one column per complex coordinate."""
        return self._weights

    @cached_property
    def _kernel_rows(self) -> IntMatrix:
        if self.presentation == "kernel":
            return self.matrix
        return lattice_kernel(self.matrix).transpose()

    def kernel_rows(self) -> IntMatrix:
        """Rows of characters of (S^1)^n whose common kernel contains H,
        saturated for image presentations; the relation lattice of H."""
        return self._kernel_rows

    @property
    def is_effective(self) -> bool:
        """Whether H acts effectively: for image presentations the weight
        columns must generate the full character lattice Z^h; kernel
        presentations are genuine subgroups and always act effectively."""
        if self.presentation == "kernel":
            return True
        f = invariant_factors(self.matrix)
        return len(f) == self.matrix.rows and all(x == 1 for x in f)

    @property
    def is_connected(self) -> bool:
        if self.presentation == "image":
            return True
        return all(x == 1 for x in invariant_factors(self.matrix))

    def _require_effective(self):
        if not self.is_effective:
            raise IneffectiveRepresentation(
                "weight columns do not generate the character lattice"
            )


@dataclass(frozen=True)
class DefiningPolynomial:
    """Primitive monomial z -> prod z_j^(xi_j) whose character cuts H out
    of (S^1)^n; the exponents satisfy sum_j xi_j * eta_j = 0 and have
    gcd 1, and are all positive exactly when the moment map is onto."""

    exponents: tuple[int, ...]

    @property
    def all_positive(self) -> bool:
        return all(e > 0 for e in self.exponents)

    def evaluate(self, z: Sequence[complex]) -> complex:
        """Evaluate at a complex point; log-magnitude plus accumulated
        phase, so large exponents cannot overflow."""
        if len(z) != len(self.exponents):
            raise DimensionMismatch("point length does not match exponents")
        import cmath

        acc = 0j
        for e, w in zip(self.exponents, z):
            if e == 0:
                continue
            if w == 0:
                return 0j
            acc += e * cmath.log(complex(w))
        return cmath.exp(acc)


@dataclass(frozen=True)
class StabilizerInfo:
    """Dimension and component group (cyclic orders > 1) of a stabilizer."""

    dimension: int
    component_group: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return self.dimension == 0 and not self.component_group


@dataclass(frozen=True)
class Splitting:
    """Coordinate permutation separating a surjective-moment block from a
    toric block.  ``permutation[i]`` is the original index of the i-th
    coordinate after reordering; the surjective block comes first.
    ``toric_part`` is None when every exponent is positive."""

    permutation: tuple[int, ...]
    surjective_part: SubtorusRep
    toric_part: SubtorusRep | None
    exponents: tuple[int, ...]

    @property
    def h_prime(self) -> int:
        return self.surjective_part.h

    @property
    def h_double_prime(self) -> int:
        return 0 if self.toric_part is None else self.toric_part.n


def moment_eval(rep: SubtorusRep, z: Sequence[complex]) -> tuple[float, ...]:
    """Quadratic moment map value (1/2) sum_j |z_j|^2 eta_j as floats."""
    if len(z) != rep.n:
        raise DimensionMismatch(f"expected {rep.n} coordinates, got {len(z)}")
    w = np.array(rep.weights().entries, dtype=float).reshape(rep.h, rep.n)
    sq = np.array([abs(complex(x)) ** 2 for x in z], dtype=float)
    return tuple(float(v) for v in 0.5 * (w @ sq))


def is_onto(rep: SubtorusRep) -> bool:
    """Whether the moment map is onto: some strictly positive combination
    of the weights vanishes."""
    rep._require_effective()
    return exists_sign_relation(rep.weights(), STRICT_POSITIVE).feasible


def is_proper(rep: SubtorusRep) -> bool:
    """Whether the moment map is proper: no nonnegative nonzero combination
    of the weights vanishes."""
    rep._require_effective()
    return not exists_sign_relation(rep.weights(), NONNEG_NONZERO).feasible


def defining_polynomial(rep: SubtorusRep) -> DefiningPolynomial:
    """The unique primitive nonnegative exponent vector whose character has
    kernel exactly H, for complexity-one subgroups with non-proper moment
    map.

    Raises ``NotNonProper`` when the moment map is proper,
    ``NotComplexityOne`` when dim H != n - 1, and ``ExactnessFailure``
    when no primitive character cuts out H (disconnected H).
    """
    rep._require_effective()
    if is_proper(rep):
        raise NotNonProper("moment map is proper; no nonnegative relation exists")
    if rep.h != rep.n - 1:
        raise NotComplexityOne(f"dim H = {rep.h} but need {rep.n - 1} for n = {rep.n}")
    kern = lattice_kernel(rep.weights())
    if kern.cols != 1:
        raise RuntimeError("weight kernel is not one dimensional")
    xi = list(kern.column(0))
    if all(x <= 0 for x in xi):
        xi = [-x for x in xi]
    if any(x < 0 for x in xi):
        # mixed signs would mean a proper moment map, excluded above
        raise NotNonProper("relation coefficients have mixed signs")
    g = 0
    for x in xi:
        g = gcd(g, x)
    if g != 1:
        raise RuntimeError("saturated kernel generator is not primitive")
    character = IntMatrix.from_rows([xi], rep.n)
    if not same_row_lattice(character, rep.kernel_rows()):
        raise ExactnessFailure(
            "kernel of the primitive character differs from H "
            "(H is disconnected)"
        )
    return DefiningPolynomial(tuple(xi))


def split(rep: SubtorusRep) -> Splitting:
    """Split coordinates so the positive-exponent block carries a subgroup
    with surjective moment map and the zero-exponent block is torically
    acted on by the complementary factor."""
    dp = defining_polynomial(rep)
    xi = dp.exponents
    positive = [j for j in range(rep.n) if xi[j] > 0]
    zero = [j for j in range(rep.n) if xi[j] == 0]
    perm = tuple(positive + zero)
    xi_prime = [xi[j] for j in positive]
    surjective = SubtorusRep(
        n=len(positive),
        presentation="kernel",
        matrix=IntMatrix.from_rows([xi_prime], len(positive)),
    )
    toric = None
    if zero:
        toric = SubtorusRep(
            n=len(zero), presentation="image", matrix=IntMatrix.identity(len(zero))
        )
    result = Splitting(perm, surjective, toric, xi)
    if not is_onto(result.surjective_part):
        raise RuntimeError("surjective block failed the surjectivity check")
    return result


def stabilizer(rep: SubtorusRep, support: Iterable[int]) -> StabilizerInfo:
    """The subgroup of H fixing every point whose support (set of nonzero
    coordinates, 0-based) is the given one: {lam in H : lam_j = 1 for all
    j in support}, reported as dimension plus cyclic component orders."""
    support = sorted(set(support))
    if support and (support[0] < 0 or support[-1] >= rep.n):
        raise DomainError(f"support indices must lie in 0..{rep.n - 1}")
    rows = list(rep.kernel_rows().entries)
    for j in support:
        rows.append(tuple(int(k == j) for k in range(rep.n)))
    m = IntMatrix.from_rows(rows, rep.n)
    factors = invariant_factors(m)
    dim = rep.n - len(factors)
    comps = tuple(f for f in factors if f > 1)
    return StabilizerInfo(dimension=dim, component_group=comps)


def is_exceptional_orbit(rep: SubtorusRep, support: Iterable[int]) -> bool:
    """Whether orbits with the given support pattern are exceptional, for a
    complexity-one subgroup with surjective moment map.

    Non-exceptional iff the support is full or misses exactly one index
    whose exponent is 1; cross-checked against triviality of the exact
    stabilizer, and a disagreement raises ``RuntimeError``.
    """
    dp = defining_polynomial(rep)
    if not dp.all_positive:
        raise DomainError(
            "moment map is not surjective; split off the toric block first"
        )
    support = set(support)
    if support and (min(support) < 0 or max(support) >= rep.n):
        raise DomainError(f"support indices must lie in 0..{rep.n - 1}")
    missing = [j for j in range(rep.n) if j not in support]
    non_exceptional = not missing or (
        len(missing) == 1 and dp.exponents[missing[0]] == 1
    )
    stab = stabilizer(rep, support)
    if stab.is_trivial != non_exceptional:
        raise RuntimeError(
            "support-pattern rule disagrees with the stabilizer computation"
        )
    return not non_exceptional
