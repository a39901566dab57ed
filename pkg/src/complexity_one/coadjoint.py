"""Root systems of types B and D, Weyl orbits, fixed-point isotropy
weights, moment polytopes, and equivariant ball-packing certificates.

For the torus action on a coadjoint orbit through a point x of the dual
Cartan (standard dot product identification), the torus fixed points are
the Weyl orbit of x and the isotropy weights at a fixed point y are the
roots pairing strictly negatively with y.  A half-space certificate checks
two finite conditions at a fixed point p: the pairwise differences of the
isotropy weights span exactly the hyperplane orthogonal to the chosen
normal, and p is the only fixed point on the chosen open side.  When both
hold, the moment preimage of that open half-space is an equivariantly
embedded ball; a pair of such certificates on opposite sides of one
hyperplane, exchanged by a Weyl element, exhibits a two-ball packing whose
complement in the moment polytope lies in a single hyperplane slice.

Everything here is exact rational arithmetic; types are immutable and
functions pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .errors import (
    ComplexityNotOne,
    DimensionMismatch,
    InvalidRank,
    PointNotFixed,
    PointNotInOrbit,
)
from .lattice import (
    IntMatrix,
    RationalVector,
    dot,
    lattice_kernel,
    primitive_part,
    rational_rank,
    ratvec,
)
from .lattice import _solve_eq_nonneg

Family = Literal["B", "D"]
Side = Literal["+", "-"]


@dataclass(frozen=True)
class RootSystem:
    family: Family
    rank: int
    roots: tuple[tuple[int, ...], ...]


def build_root_system(family: Family, rank: int) -> RootSystem:
    """Standard roots: type B has all +-e_i and +-e_i +- e_j (i < j); type
    D drops the short roots +-e_i.  Rank must be >= 1 for B, >= 2 for D."""
    if family == "B":
        if rank < 1:
            raise InvalidRank("type B needs rank >= 1")
    elif family == "D":
        if rank < 2:
            raise InvalidRank("type D needs rank >= 2")
    else:
        raise InvalidRank(f"unknown family {family!r}")

    roots: list[tuple[int, ...]] = []
    if family == "B":
        for i in range(rank):
            for s in (1, -1):
                e = [0] * rank
                e[i] = s
                roots.append(tuple(e))
    for i in range(rank):
        for j in range(i + 1, rank):
            for si in (1, -1):
                for sj in (1, -1):
                    e = [0] * rank
                    e[i], e[j] = si, sj
                    roots.append(tuple(e))
    return RootSystem(family=family, rank=rank, roots=tuple(sorted(roots)))


@dataclass(frozen=True)
class WeylElement:
    """Signed permutation y = w(x) with y_i = signs[i] * x[perm[i]]."""

    permutation: tuple[int, ...]
    signs: tuple[int, ...]

    def apply(self, x: Sequence) -> tuple:
        return tuple(s * x[p] for s, p in zip(self.signs, self.permutation))


def _weyl_generators(system: RootSystem) -> list[WeylElement]:
    k = system.rank
    gens = []
    for i in range(k - 1):
        perm = list(range(k))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(WeylElement(tuple(perm), (1,) * k))
    if system.family == "B":
        signs = [1] * k
        signs[k - 1] = -1
        gens.append(WeylElement(tuple(range(k)), tuple(signs)))
    else:
        # reflection in e_{k-1} + e_k: swap and negate the last two
        perm = list(range(k))
        if k >= 2:
            perm[k - 2], perm[k - 1] = perm[k - 1], perm[k - 2]
            signs = [1] * k
            signs[k - 2] = signs[k - 1] = -1
            gens.append(WeylElement(tuple(perm), tuple(signs)))
    return gens


def weyl_group_order(system: RootSystem) -> int:
    order = 2**system.rank * math.factorial(system.rank)
    if system.family == "D":
        order //= 2
    return order


def weyl_group_elements(system: RootSystem) -> list[WeylElement]:
    """All signed permutations of the group (even sign count for D)."""
    k = system.rank
    out = []
    for perm in itertools.permutations(range(k)):
        for signs in itertools.product((1, -1), repeat=k):
            if system.family == "D" and signs.count(-1) % 2:
                continue
            out.append(WeylElement(perm, signs))
    return out


def weyl_orbit(system: RootSystem, x: Sequence) -> tuple[RationalVector, ...]:
    """Orbit of x under the Weyl group, by closure under the generators;
    returned sorted lexicographically."""
    x = ratvec(x)
    if len(x) != system.rank:
        raise DimensionMismatch("point dimension does not match the rank")
    gens = _weyl_generators(system)
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = g.apply(p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return tuple(sorted(seen))


def isotropy_weights_at(
    system: RootSystem, orbit: Sequence[RationalVector], y: Sequence
) -> tuple[tuple[int, ...], ...]:
    """Roots pairing strictly negatively with the fixed point y."""
    y = ratvec(y)
    if y not in set(map(tuple, orbit)):
        raise PointNotInOrbit(f"{y} is not a fixed point of this orbit")
    return tuple(r for r in system.roots if dot(r, y) < 0)


@dataclass(frozen=True)
class RootSystemOrbit:
    """A coadjoint-orbit model: root system, base point, the fixed points
    (Weyl orbit of the base point), and per-point isotropy weights."""

    system: RootSystem
    base_point: RationalVector
    fixed_points: tuple[RationalVector, ...]
    weights: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def build(cls, system: RootSystem, base_point: Sequence) -> "RootSystemOrbit":
        pts = weyl_orbit(system, base_point)
        wts = tuple(tuple(r for r in system.roots if dot(r, p) < 0) for p in pts)
        counts = {len(w) for w in wts}
        if len(counts) != 1:
            raise RuntimeError("isotropy weight count varies over the orbit")
        return cls(system, ratvec(base_point), pts, wts)

    @property
    def weight_count(self) -> int:
        return len(self.weights[0])

    @property
    def complexity(self) -> int:
        return self.weight_count - self.system.rank

    def weights_at(self, p: Sequence) -> tuple[tuple[int, ...], ...]:
        p = ratvec(p)
        for q, w in zip(self.fixed_points, self.weights):
            if q == p:
                return w
        raise PointNotInOrbit(f"{p} is not a fixed point of this orbit")


@dataclass(frozen=True)
class Polytope:
    """Exact convex hull: vertices, and outward facets <normal, x> <= offset
    when the hull is full dimensional."""

    vertices: tuple[RationalVector, ...]
    facets: tuple[tuple[tuple[int, ...], Fraction], ...]
    dimension: int
    full_dimensional: bool


def _affine_dimension(points: Sequence[RationalVector]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    return rational_rank(rows)


def _is_vertex(points: list[RationalVector], idx: int) -> bool:
    """Whether points[idx] is outside the convex hull of the others
    (exact feasibility of the convex-combination system)."""
    p = points[idx]
    others = [q for k, q in enumerate(points) if k != idx]
    if not others:
        return True
    d = len(p)
    a = [[Fraction(q[i]) for q in others] for i in range(d)]
    a.append([Fraction(1)] * len(others))
    b = [Fraction(x) for x in p] + [Fraction(1)]
    status, _ = _solve_eq_nonneg(a, b)
    return status == "infeasible"


def moment_polytope(orbit: RootSystemOrbit) -> Polytope:
    """Exact convex hull of the fixed points.

    Facets are enumerated from rank-sized point subsets (desk scale: orbit
    sizes here are small); only full-dimensional hulls carry facets.
    """
    points = list(dict.fromkeys(orbit.fixed_points))
    d = orbit.system.rank
    vertices = tuple(p for i, p in enumerate(points) if _is_vertex(points, i))
    dim = _affine_dimension(points)
    if dim < d:
        return Polytope(vertices, (), dim, False)

    facets: set[tuple[tuple[int, ...], Fraction]] = set()
    for subset in itertools.combinations(vertices, d):
        base = subset[0]
        rows = [[p[i] - base[i] for i in range(d)] for p in subset[1:]]
        if rational_rank(rows) != d - 1:
            continue
        normal = _integer_normal(rows, d)
        if normal is None:
            continue
        offset = dot(normal, base)
        sides = [dot(normal, p) - offset for p in points]
        if all(s <= 0 for s in sides):
            facets.add((normal, offset))
        elif all(s >= 0 for s in sides):
            facets.add((tuple(-x for x in normal), -offset))
    return Polytope(vertices, tuple(sorted(facets)), dim, True)


def _integer_normal(rows: list[list[Fraction]], d: int) -> tuple[int, ...] | None:
    """Primitive integer normal of the hyperplane spanned by the rows."""
    if not rows:
        if d != 1:
            return None
        return (1,)
    denom = 1
    for r in rows:
        for x in r:
            denom = denom * Fraction(x).denominator // _gcd(denom, Fraction(x).denominator)
    int_rows = [[int(Fraction(x) * denom) for x in r] for r in rows]
    kern = lattice_kernel(IntMatrix.from_rows(int_rows, d))
    if kern.cols != 1:
        return None
    return primitive_part(kern.column(0))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else 1


@dataclass(frozen=True)
class BallCertificate:
    """Checked hypotheses at a fixed point p and a half-space side: the
    isotropy-weight differences span exactly the hyperplane orthogonal to
    ``normal``, and p is the unique fixed point strictly on that side.
    When valid, the moment preimage of the open half-space is an
    equivariantly embedded ball."""

    fixed_point: RationalVector
    normal: tuple[int, ...]
    side: Side
    differences_span_codim_one: bool
    unique_fixed_point_on_side: bool

    @property
    def valid(self) -> bool:
        return self.differences_span_codim_one and self.unique_fixed_point_on_side


def ball_certificate(
    orbit: RootSystemOrbit, p: Sequence, normal: Sequence[int], side: Side
) -> BallCertificate:
    """Check the half-space ball conditions at fixed point p."""
    if orbit.complexity != 1:
        raise ComplexityNotOne(
            f"orbit has complexity {orbit.complexity}; certificates require 1"
        )
    p = ratvec(p)
    if p not in set(orbit.fixed_points):
        raise PointNotFixed(f"{p} is not a fixed point of this orbit")
    if side not in ("+", "-"):
        raise ValueError("side must be '+' or '-'")
    normal = tuple(int(x) for x in normal)
    k = orbit.system.rank

    wts = orbit.weights_at(p)
    diffs = [
        [Fraction(a[i] - b[i]) for i in range(k)]
        for a, b in itertools.combinations(wts, 2)
    ]
    # the empty span is the codimension-one subspace only on a line
    span_ok = rational_rank(diffs) == k - 1 if diffs else k == 1
    orth_ok = all(dot(d_, normal) == 0 for d_ in diffs)

    sgn = 1 if side == "+" else -1
    on_side = [q for q in orbit.fixed_points if sgn * dot(normal, q) > 0]
    unique_ok = on_side == [p]

    return BallCertificate(
        fixed_point=p,
        normal=normal,
        side=side,
        differences_span_codim_one=span_ok and orth_ok,
        unique_fixed_point_on_side=unique_ok,
    )


@dataclass(frozen=True)
class PackingPairing:
    """Two valid certificates on opposite open sides of one hyperplane,
    exchanged by a Weyl element; the uncovered part of the moment polytope
    is its slice by that hyperplane, a measure-zero set."""

    plus: BallCertificate
    minus: BallCertificate
    weyl_element: WeylElement
    slice_normal: tuple[int, ...]


@dataclass(frozen=True)
class PackingReport:
    complexity: int
    certificates: tuple[BallCertificate, ...]
    pairing: PackingPairing | None

    @property
    def fully_packed(self) -> bool:
        return self.pairing is not None


def _candidate_normals(orbit: RootSystemOrbit, polytope: Polytope) -> list[tuple[int, ...]]:
    """Deterministic candidate list: coordinate axes, then orthogonal
    complements of the weight-difference spans, then facet normals."""
    k = orbit.system.rank
    seen: list[tuple[int, ...]] = []

    def push(v: tuple[int, ...]):
        nz = next((x for x in v if x != 0), 0)
        if nz < 0:
            v = tuple(-x for x in v)
        if v not in seen:
            seen.append(v)

    for i in range(k):
        push(tuple(int(j == i) for j in range(k)))
    for p, wts in zip(orbit.fixed_points, orbit.weights):
        diffs = [
            [a[i] - b[i] for i in range(k)] for a, b in itertools.combinations(wts, 2)
        ]
        if not diffs:
            continue
        kern = lattice_kernel(IntMatrix.from_rows(diffs, k))
        if kern.cols == 1:
            push(primitive_part(kern.column(0)))
    for normal, _ in polytope.facets:
        push(tuple(normal))
    return seen


def full_packing_report(orbit: RootSystemOrbit) -> PackingReport:
    """Search fixed points x candidate hyperplanes for a two-ball packing.

    Returns every valid certificate found and the first pairing (in the
    deterministic candidate order) of opposite-side certificates on one
    hyperplane exchanged by a Weyl element.  Orbits whose complexity is
    not one yield an empty report rather than an error.
    """
    if orbit.complexity != 1:
        return PackingReport(orbit.complexity, (), None)
    polytope = moment_polytope(orbit)
    normals = _candidate_normals(orbit, polytope)

    certificates: list[BallCertificate] = []
    by_key: dict[tuple[tuple[int, ...], Side], BallCertificate] = {}
    for normal in normals:
        for side in ("+", "-"):
            for p in orbit.fixed_points:
                cert = ball_certificate(orbit, p, normal, side)
                if cert.valid:
                    certificates.append(cert)
                    by_key.setdefault((normal, side), cert)

    pairing = None
    group = None
    for normal in normals:
        plus = by_key.get((normal, "+"))
        minus = by_key.get((normal, "-"))
        if plus is None or minus is None:
            continue
        if group is None:
            group = weyl_group_elements(orbit.system)
        neg_normal = tuple(-x for x in normal)
        for w in group:
            if (
                w.apply(plus.fixed_point) == minus.fixed_point
                and w.apply(normal) == neg_normal
            ):
                pairing = PackingPairing(plus, minus, w, normal)
                break
        if pairing is not None:
            break

    return PackingReport(1, tuple(certificates), pairing)
