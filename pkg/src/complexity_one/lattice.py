"""Exact integer and rational linear algebra.

Smith normal form with unimodular transforms, saturated lattice kernels,
integer linear solving, and rational linear-programming feasibility with
witnesses that verify by direct substitution: sign-constrained relations
among weight vectors and membership in finitely generated rational cones.

Everything in this module is exact (Python ints and ``Fraction``); no
floating point enters any decision.  All values are immutable and all
functions are pure, so they are safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Literal, Sequence

RationalVector = tuple[Fraction, ...]
SignRegime = Literal["strict-positive", "nonneg-nonzero"]

STRICT_POSITIVE: SignRegime = "strict-positive"
NONNEG_NONZERO: SignRegime = "nonneg-nonzero"


def _check_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"exact integer required, got {x!r}")
    return x


def ratvec(entries: Iterable) -> RationalVector:
    """Coerce an iterable of ints/Fractions/strings to a rational vector."""
    return tuple(Fraction(e) for e in entries)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError("dimension mismatch in dot product")
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; row-major tuples, explicit column count.

    The explicit ``cols`` keeps zero-row matrices well formed.
    """

    entries: tuple[tuple[int, ...], ...]
    cols: int

    def __post_init__(self):
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
            for x in row:
                _check_int(x)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(_check_int(x) for x in r) for r in rows)
        if cols is None:
            if not rows:
                raise ValueError("column count required for an empty matrix")
            cols = len(rows[0])
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(tuple(tuple(0 for _ in range(cols)) for _ in range(rows)), cols)

    @staticmethod
    def coerce(m) -> "IntMatrix":
        if isinstance(m, IntMatrix):
            return m
        return IntMatrix.from_rows(m)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(r[j] for r in self.entries) for j in range(self.cols)), self.rows)

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matmul")
        return IntMatrix(
            tuple(
                tuple(sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols)) for j in range(other.cols))
                for i in range(self.rows)
            ),
            other.cols,
        )

    def matvec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("shape mismatch in matvec")
        return tuple(sum(r[j] * v[j] for j in range(self.cols)) for r in self.entries)

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if other.cols != self.cols:
            raise ValueError("shape mismatch in stack")
        return IntMatrix(self.entries + other.entries, self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    m = IntMatrix.coerce(m)
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*m*V == D, U and V unimodular, and the
    diagonal of D a nonnegative chain d1 | d2 | ...

    Deterministic: pivot choice scans for the smallest nonzero magnitude.
    """
    m = IntMatrix.coerce(m)
    R, C = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = [[int(i == j) for j in range(R)] for i in range(R)]
    v = [[int(i == j) for j in range(C)] for i in range(C)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def row_sub(i, k, q):
        # row i -= q * row k
        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
        u[i] = [x - q * y for x, y in zip(u[i], u[k])]

    def col_sub(j, k, q):
        # col j -= q * col k
        for row in a:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    def row_add(i, k):
        a[i] = [x + y for x, y in zip(a[i], a[k])]
        u[i] = [x + y for x, y in zip(u[i], u[k])]

    t = 0
    while t < min(R, C):
        # bring the smallest nonzero entry of the trailing block to (t, t)
        pos, best = None, None
        for i in range(t, R):
            for j in range(t, C):
                x = abs(a[i][j])
                if x and (best is None or x < best):
                    pos, best = (i, j), x
        if pos is None:
            break
        if pos[0] != t:
            swap_rows(t, pos[0])
        if pos[1] != t:
            swap_cols(t, pos[1])
        while True:
            if a[t][t] < 0:
                negate_row(t)
            p = a[t][t]
            remainder = False
            for i in range(t + 1, R):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        row_sub(i, t, q)
                    if a[i][t]:
                        swap_rows(i, t)
                        remainder = True
                        break
            if remainder:
                continue
            for j in range(t + 1, C):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        col_sub(j, t, q)
                    if a[t][j]:
                        swap_cols(j, t)
                        remainder = True
                        break
            if remainder:
                continue
            # row and column cleared; enforce divisibility of the rest
            offender = None
            for i in range(t + 1, R):
                for j in range(t + 1, C):
                    if a[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender)
        t += 1

    D = IntMatrix.from_rows(a, C)
    U = IntMatrix.from_rows(u, R) if R else IntMatrix.zero(0, 0)
    V = IntMatrix.from_rows(v, C) if C else IntMatrix.zero(0, 0)
    return U, D, V


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith form, i.e. the invariant factors."""
    _, d, _ = smith_normal_form(m)
    return tuple(x for x in d.diagonal() if x != 0)


def rank(m: IntMatrix) -> int:
    return len(invariant_factors(m))


def lattice_kernel(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of the saturated lattice {v in Z^cols : m v = 0}.

    Saturated means the basis spans the full kernel lattice, not a
    finite-index sublattice; this holds because the basis consists of
    columns of a unimodular matrix.
    """
    m = IntMatrix.coerce(m)
    _, d, v = smith_normal_form(m)
    diag = d.diagonal()
    free = [j for j in range(m.cols) if j >= len(diag) or diag[j] == 0]
    cols = [v.column(j) for j in free]
    return IntMatrix(tuple(tuple(c[i] for c in cols) for i in range(m.cols)), len(cols))


def solve_integer(m: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution of m x = b, or None if none exists."""
    m = IntMatrix.coerce(m)
    if len(b) != m.rows:
        raise ValueError("shape mismatch in solve_integer")
    u, d, v = smith_normal_form(m)
    c = u.matvec(tuple(_check_int(x) for x in b))
    diag = d.diagonal()
    y = [0] * m.cols
    for i in range(m.rows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di:
                return None
            y[i] = c[i] // di
    return v.matvec(tuple(y))


def in_row_lattice(m: IntMatrix, vec: Sequence[int]) -> bool:
    """Whether ``vec`` lies in the integer row span of ``m``."""
    m = IntMatrix.coerce(m)
    return solve_integer(m.transpose(), vec) is not None


def same_row_lattice(a: IntMatrix, b: IntMatrix) -> bool:
    """Whether two integer matrices generate the same row lattice."""
    a, b = IntMatrix.coerce(a), IntMatrix.coerce(b)
    if a.cols != b.cols:
        return False
    return all(in_row_lattice(b, r) for r in a.entries) and all(
        in_row_lattice(a, r) for r in b.entries
    )


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, _check_int(x))
    if g == 0:
        raise ValueError("primitive part of the zero vector")
    return tuple(x // g for x in v)


def bezout_vector(v: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Return (g, c) with sum(c_j * v_j) == g == gcd(v)."""
    g, coeffs = 0, []
    for x in v:
        x = _check_int(x)
        if g == 0:
            g, s = abs(x), (0 if x == 0 else (1 if x > 0 else -1))
            coeffs = [0] * len(coeffs) + [s]
            continue
        old_g = g
        g = gcd(g, x)
        if g == old_g:
            coeffs.append(0)
            continue
        # g = a*old_g + b*x via the extended euclidean algorithm
        a, b = _ext_gcd(old_g, x)
        coeffs = [a * c for c in coeffs] + [b]
    if g == 0:
        raise ValueError("bezout vector of the zero vector")
    return g, tuple(coeffs)


def _ext_gcd(a: int, b: int) -> tuple[int, int]:
    """(x, y) with x*a + y*b == gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_x, old_y = -old_x, -old_y
    return old_x, old_y


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    cols = len(a[0])
    r = 0
    for j in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][j]
        a[r] = [x / inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


# ---------------------------------------------------------------------------
# Exact linear programming (feasibility with certificates)
# ---------------------------------------------------------------------------


def _solve_eq_nonneg(
    a: list[list[Fraction]], b: list[Fraction]
) -> tuple[Literal["feasible"], list[Fraction]] | tuple[Literal["infeasible"], list[Fraction]]:
    """Feasibility of {A x = b, x >= 0} by exact phase-one simplex.

    Feasible: returns x.  Infeasible: returns y with y*A <= 0 (entrywise)
    and y*b > 0, which refutes the system by substitution.  Bland's rule
    guarantees termination; artificial columns never re-enter the basis.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return "feasible", [Fraction(0)] * n

    a = [[Fraction(x) for x in row] for row in a]
    b = [Fraction(x) for x in b]
    flipped = [False] * m
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
            flipped[i] = True

    # tableau rows: [A | I | b]; basis starts on the artificial block
    width = n + m
    tab = [a[i] + [Fraction(int(k == i)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m

    while True:
        # reduced costs c_j - c_B . (column j); only original columns may enter
        entering = None
        for j in range(n):
            red = cost[j] - sum(cost[basis[i]] * tab[i][j] for i in range(m))
            if red < 0:
                entering = j
                break
        if entering is None:
            break
        leaving, best = None, None
        for i in range(m):
            if tab[i][entering] > 0:
                ratio = tab[i][width] / tab[i][entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    leaving, best = i, ratio
        if leaving is None:
            # phase-one objective is bounded below by 0, so this cannot occur
            raise RuntimeError("unbounded phase-one objective")
        piv = tab[leaving][entering]
        tab[leaving] = [x / piv for x in tab[leaving]]
        for i in range(m):
            if i != leaving and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leaving])]
        basis[leaving] = entering

    objective = sum(cost[basis[i]] * tab[i][width] for i in range(m))
    if objective == 0:
        x = [Fraction(0)] * n
        for i in range(m):
            if basis[i] < n:
                x[basis[i]] = tab[i][width]
        for i in range(m):
            got = sum(a[i][j] * x[j] for j in range(n))
            if got != b[i]:
                raise RuntimeError("simplex produced an invalid feasible point")
        return "feasible", x

    # simplex multipliers y = c_B . B^{-1}; the artificial block of the
    # tableau is B^{-1} since it started as the identity
    y = [sum(cost[basis[i]] * tab[i][n + k] for i in range(m)) for k in range(m)]
    y = [-v if flipped[k] else v for k, v in enumerate(y)]
    return "infeasible", y


@dataclass(frozen=True)
class ConeFeasibility:
    """Outcome of a sign-constrained relation query, with exact witness.

    Feasible: ``witness`` is a coefficient vector xi with
    sum_j xi_j * eta_j = 0 in the requested sign regime.  Infeasible:
    ``witness`` is a functional on the weight space; for the
    ``nonneg-nonzero`` regime it pairs strictly positively with every
    weight, for ``strict-positive`` it pairs nonnegatively with every
    weight and strictly positively with their sum.
    """

    status: Literal["feasible", "infeasible"]
    witness: RationalVector
    regime: SignRegime

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def verify(self, weights: IntMatrix) -> bool:
        """Check the witness claim by exact substitution."""
        weights = IntMatrix.coerce(weights)
        cols = weights.columns()
        if self.feasible:
            xi = self.witness
            if len(xi) != weights.cols:
                return False
            combo = [dot([c[i] for c in cols], xi) for i in range(weights.rows)]
            if any(v != 0 for v in combo):
                return False
            if self.regime == STRICT_POSITIVE:
                return all(x > 0 for x in xi)
            return all(x >= 0 for x in xi) and any(x > 0 for x in xi)
        y = self.witness
        if len(y) != weights.rows:
            return False
        pairings = [dot(y, c) for c in cols]
        if self.regime == NONNEG_NONZERO:
            return all(p > 0 for p in pairings)
        return all(p >= 0 for p in pairings) and sum(pairings) > 0


def exists_sign_relation(weights: IntMatrix, sign: SignRegime) -> ConeFeasibility:
    """Decide whether sum_j xi_j * eta_j = 0 admits a solution in the given
    sign regime, where eta_j are the columns of ``weights``.

    Strict positivity is scale invariant for a homogeneous system, so it is
    decided as xi_j >= 1; the nonnegative-nonzero regime is normalized by
    sum_j xi_j = 1.  Either way the returned witness verifies exactly.
    """
    weights = IntMatrix.coerce(weights)
    if weights.cols < 1:
        raise ValueError("at least one weight column required")
    h, n = weights.rows, weights.cols

    if h == 0:
        # the trivial group: every relation is vacuously zero
        if sign == STRICT_POSITIVE:
            witness = tuple(Fraction(1) for _ in range(n))
        elif sign == NONNEG_NONZERO:
            witness = tuple(Fraction(int(j == 0)) for j in range(n))
        else:
            raise ValueError(f"unknown sign regime {sign!r}")
        return ConeFeasibility("feasible", witness, sign)

    if sign == STRICT_POSITIVE:
        # xi = 1 + s with s >= 0:  W s = -W 1
        a = [[Fraction(weights.entries[i][j]) for j in range(n)] for i in range(h)]
        b = [Fraction(-sum(weights.entries[i])) for i in range(h)]
        status, w = _solve_eq_nonneg(a, b)
        if status == "feasible":
            xi = tuple(Fraction(1) + s for s in w)
            out = ConeFeasibility("feasible", xi, sign)
        else:
            out = ConeFeasibility("infeasible", tuple(-y for y in w), sign)
    elif sign == NONNEG_NONZERO:
        a = [[Fraction(weights.entries[i][j]) for j in range(n)] for i in range(h)]
        a.append([Fraction(1)] * n)
        b = [Fraction(0)] * h + [Fraction(1)]
        status, w = _solve_eq_nonneg(a, b)
        if status == "feasible":
            out = ConeFeasibility("feasible", tuple(w), sign)
        else:
            out = ConeFeasibility("infeasible", tuple(-y for y in w[:h]), sign)
    else:
        raise ValueError(f"unknown sign regime {sign!r}")

    if not out.verify(weights):
        raise RuntimeError("sign-relation witness failed verification")
    return out


@dataclass(frozen=True)
class ConeMembership:
    """Membership of a point in the nonnegative span of generator columns.

    Member: ``coefficients`` reproduce the point exactly.  Not a member:
    ``separator`` pairs nonnegatively with every generator and strictly
    negatively with the point.
    """

    member: bool
    coefficients: RationalVector | None
    separator: RationalVector | None

    def verify(self, point: Sequence[Fraction], generators: IntMatrix) -> bool:
        generators = IntMatrix.coerce(generators)
        point = ratvec(point)
        if self.member:
            if self.coefficients is None or len(self.coefficients) != generators.cols:
                return False
            if any(c < 0 for c in self.coefficients):
                return False
            rebuilt = [
                dot(generators.row(i), self.coefficients) for i in range(generators.rows)
            ]
            return tuple(rebuilt) == point
        if self.separator is None or len(self.separator) != generators.rows:
            return False
        pair_gens = [dot(self.separator, g) for g in generators.columns()]
        return all(p >= 0 for p in pair_gens) and dot(self.separator, point) < 0


def cone_member(point: Sequence[Fraction], generators: IntMatrix) -> ConeMembership:
    """Decide whether ``point`` lies in the rational cone spanned by the
    generator columns, returning coefficients or a separating functional."""
    generators = IntMatrix.coerce(generators)
    point = ratvec(point)
    if len(point) != generators.rows:
        raise ValueError("point dimension does not match generators")
    d, g = generators.rows, generators.cols
    if g == 0:
        if all(p == 0 for p in point):
            return ConeMembership(True, (), None)
        # any functional negative on the point separates from the origin cone
        sep = tuple(-p for p in point)
        out = ConeMembership(False, None, sep)
        if not out.verify(point, generators):
            raise RuntimeError("cone separator failed verification")
        return out

    a = [[Fraction(generators.entries[i][j]) for j in range(g)] for i in range(d)]
    status, w = _solve_eq_nonneg(a, list(point))
    if status == "feasible":
        out = ConeMembership(True, tuple(w), None)
    else:
        out = ConeMembership(False, None, tuple(-y for y in w))
    if not out.verify(point, generators):
        raise RuntimeError("cone membership witness failed verification")
    return out
