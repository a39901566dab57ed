"""Independent oracles used by the test suite.

These deliberately avoid the library's own algorithms: feasibility is
decided by Fourier-Motzkin elimination instead of simplex, and primitive
relation vectors come from direct normalization or rational Gaussian
elimination instead of Smith reduction.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def fm_feasible(ineqs: list[tuple[list[Fraction], Fraction]]) -> bool:
    """Feasibility of {a . x <= c} systems by exact Fourier-Motzkin."""
    work = [([Fraction(a) for a in row], Fraction(c)) for row, c in ineqs]
    if not work:
        return True
    nvars = len(work[0][0])

    def normalize(items):
        out = set()
        for row, c in items:
            scale = next((abs(x) for x in row if x != 0), None)
            if scale is None:
                if c < 0:
                    return None
                continue
            out.add((tuple(x / scale for x in row), c / scale))
        return [(list(r), c) for r, c in out]

    work = normalize(work)
    if work is None:
        return False
    for k in range(nvars):
        pos = [rc for rc in work if rc[0][k] > 0]
        neg = [rc for rc in work if rc[0][k] < 0]
        rest = [rc for rc in work if rc[0][k] == 0]
        combined = list(rest)
        for rp, cp in pos:
            for rn, cn in neg:
                ap, an = rp[k], -rn[k]
                row = [an * x + ap * y for x, y in zip(rp, rn)]
                c = an * cp + ap * cn
                combined.append((row, c))
        work = normalize(combined)
        if work is None:
            return False
    return True


def _rational_nullspace_basis(rows: list[list[int]], n: int) -> list[list[Fraction]]:
    """Basis (as columns) of {x : rows . x = 0} over Q, by plain Gaussian
    elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for j in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][j] for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
    basis = []
    for jf in range(n):
        if jf in pivots:
            continue
        col = [Fraction(0)] * n
        col[jf] = Fraction(1)
        for i, jp in enumerate(pivots):
            col[jp] = -a[i][jf]
        basis.append(col)
    return basis


def fm_sign_relation(weights: list[list[int]], regime: str) -> bool:
    """Feasibility of sum_j xi_j eta_j = 0 in a sign regime, where eta_j
    are the columns of ``weights``.

    The equalities are eliminated first by substituting a rational
    nullspace basis (xi = N y), which keeps the Fourier-Motzkin step on a
    handful of inequalities in few variables.
    """
    h = len(weights)
    n = len(weights[0]) if h else None
    if n is None:
        raise ValueError("need at least one row to infer the column count")
    basis = _rational_nullspace_basis(weights, n)
    k = len(basis)
    # xi_j = sum_m basis[m][j] * y_m
    rows_in_y = [[basis[m][j] for m in range(k)] for j in range(n)]
    ineqs: list[tuple[list[Fraction], Fraction]] = []
    if regime == "strict-positive":
        # scale invariance: xi > 0 iff xi >= 1 is solvable
        for row in rows_in_y:
            ineqs.append(([-x for x in row], Fraction(-1)))
    elif regime == "nonneg-nonzero":
        for row in rows_in_y:
            ineqs.append(([-x for x in row], Fraction(0)))
        total = [sum(rows_in_y[j][m] for j in range(n)) for m in range(k)]
        ineqs.append((list(total), Fraction(1)))
        ineqs.append(([-x for x in total], Fraction(-1)))
    else:
        raise ValueError(regime)
    return fm_feasible(ineqs)


def primitive_nonneg(row: list[int]) -> tuple[int, ...] | None:
    """Primitive nonnegative orientation of an integer vector, or None if
    the entries have mixed signs."""
    g = 0
    for x in row:
        g = gcd(g, x)
    if g == 0:
        return None
    v = [x // g for x in row]
    if all(x <= 0 for x in v):
        v = [-x for x in v]
    if any(x < 0 for x in v):
        return None
    return tuple(v)


def rational_nullspace_primitive(rows: list[list[int]], n: int) -> tuple[int, ...] | None:
    """Primitive generator of a one-dimensional nullspace over Q, found by
    plain Gaussian elimination; None when the nullity is not one."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for j in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][j] for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
    free = [j for j in range(n) if j not in pivots]
    if len(free) != 1:
        return None
    jf = free[0]
    sol = [Fraction(0)] * n
    sol[jf] = Fraction(1)
    for i, jp in enumerate(pivots):
        sol[jp] = -a[i][jf]
    denom = 1
    for x in sol:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in sol]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)
