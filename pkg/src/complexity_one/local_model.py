"""Linear local models: a subtorus representation anchored at a rational
base point, padded by an affine directions block.

A model consists of an ambient torus of dimension d, a subtorus
representation on C^n with dim H = h, a base point alpha in the ambient
dual space, and an integer basis of the (d - h)-dimensional annihilator
subspace.  The weight space embeds into the ambient dual space as the
orthogonal complement of the annihilator (standard dot product); the
canonical saturated kernel basis of the annihilator matrix fixes that
embedding deterministically.

The module computes the moment image cone, classifies moment fibers,
evaluates the trivializing map F = (moment value, monomial value), tests
membership in the exceptional sheet {P = 0}, and runs seeded numeric
verifications: H-invariance and orbit-recovery for F's fibers,
preimage construction for F's surjectivity, and full-rank checks of the
derivative (dPhi, dP) at non-exceptional points with the explicit
annihilating witnesses.

Monte Carlo routines take an explicit seed and are deterministic for a
fixed seed; shards may be merged by summing counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, ExceptionalPoint
from .lattice import ConeMembership, IntMatrix, cone_member, lattice_kernel, ratvec
from .lattice import RationalVector, bezout_vector, rational_rank
from .rep import (
    SubtorusRep,
    defining_polynomial,
    is_proper,
    stabilizer,
)

_MIN_ABS = 1e-3  # rejection threshold for near-zero sampled coordinates


class FiberKind(Enum):
    SINGLE_ORBIT = "single-orbit"
    INFINITELY_MANY_ORBITS = "infinitely-many-orbits"


@dataclass(frozen=True)
class LocalModel:
    """A linear model anchored at ``base_point`` in the ambient dual space.

    ``annihilator_basis`` has d - h integer rows spanning the directions
    along which the moment map is an affine projection.
    """

    torus_dim: int
    rep: SubtorusRep
    base_point: RationalVector
    annihilator_basis: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "base_point", ratvec(self.base_point))
        object.__setattr__(
            self, "annihilator_basis", IntMatrix.coerce(self.annihilator_basis)
        )
        d, h = self.torus_dim, self.rep.h
        if h > d:
            raise ValueError("subtorus dimension exceeds ambient dimension")
        if len(self.base_point) != d:
            raise ValueError("base point has wrong dimension")
        if self.annihilator_basis.cols != d or self.annihilator_basis.rows != d - h:
            raise ValueError("annihilator basis must be (d - h) x d")
        if rational_rank([[Fraction(x) for x in r] for r in self.annihilator_basis.entries]) != d - h:
            raise ValueError("annihilator basis rows must be independent")

    @classmethod
    def linear(cls, rep: SubtorusRep) -> "LocalModel":
        """The model with trivial affine block and base point 0."""
        h = rep.h
        return cls(h, rep, tuple(Fraction(0) for _ in range(h)), IntMatrix.zero(0, h))

    @cached_property
    def embedding(self) -> IntMatrix:
        """d x h integer matrix embedding weight coordinates into the
        ambient dual space (saturated basis of the annihilator's
        orthogonal complement)."""
        return lattice_kernel(self.annihilator_basis)

    @cached_property
    def ambient_weights(self) -> IntMatrix:
        """d x n matrix of the embedded weights."""
        return self.embedding.matmul(self.rep.weights())


@dataclass(frozen=True)
class MomentImage:
    """The cone ``base_point + span(linear rows) + nonneg span(generators)``.

    ``generators`` are the embedded weight columns; membership delegates
    to exact cone membership with the linear rows adjoined in both signs.
    """

    base_point: RationalVector
    generators: tuple[tuple[int, ...], ...]
    linear_part: tuple[tuple[int, ...], ...]

    def _cone_columns(self) -> IntMatrix:
        d = len(self.base_point)
        cols: list[tuple[int, ...]] = list(self.generators)
        for row in self.linear_part:
            cols.append(tuple(row))
            cols.append(tuple(-x for x in row))
        if not cols:
            return IntMatrix.zero(d, 0)
        return IntMatrix(tuple(tuple(c[i] for c in cols) for i in range(d)), len(cols))

    def membership(self, point: Sequence) -> ConeMembership:
        point = ratvec(point)
        if len(point) != len(self.base_point):
            raise DimensionMismatch("point dimension does not match the model")
        shifted = tuple(p - a for p, a in zip(point, self.base_point))
        return cone_member(shifted, self._cone_columns())

    def contains(self, point: Sequence) -> bool:
        return self.membership(point).member


def moment_image(model: LocalModel) -> MomentImage:
    """Generator description of the moment image of the model."""
    gens = tuple(model.ambient_weights.column(j) for j in range(model.rep.n))
    return MomentImage(
        base_point=model.base_point,
        generators=gens,
        linear_part=tuple(model.annihilator_basis.entries),
    )


def classify_fiber(model: LocalModel) -> FiberKind:
    """A moment fiber of the model is a single orbit exactly when the
    moment map of the representation is proper."""
    if is_proper(model.rep):
        return FiberKind.SINGLE_ORBIT
    return FiberKind.INFINITELY_MANY_ORBITS


@dataclass(frozen=True)
class QuotientPoint:
    """Value of the trivializing map: ambient moment value plus the
    monomial value."""

    moment: tuple[float, ...]
    monomial: complex


@dataclass(frozen=True)
class SheetMembership:
    point: tuple[complex, ...]
    on_sheet: bool


def _as_complex(z: Sequence[complex], n: int) -> np.ndarray:
    if len(z) != n:
        raise DimensionMismatch(f"expected {n} coordinates, got {len(z)}")
    return np.array([complex(x) for x in z], dtype=complex)


def trivializing_map(
    model: LocalModel, z: Sequence[complex], nu: Sequence | None = None
) -> QuotientPoint:
    """Evaluate F = (alpha + embedded moment value + nu, P(z)).

    ``nu`` is given in coordinates of the annihilator basis (length d - h,
    default zero).  Requires a non-proper complexity-one representation;
    the preconditions of the monomial's construction propagate.
    """
    dp = defining_polynomial(model.rep)
    zz = _as_complex(z, model.rep.n)
    d, h = model.torus_dim, model.rep.h
    if nu is None:
        nu = [0] * (d - h)
    if len(nu) != d - h:
        raise DimensionMismatch("nu must have one coordinate per annihilator row")
    w = np.array(model.rep.weights().entries, dtype=float).reshape(h, model.rep.n)
    phi = 0.5 * (w @ (np.abs(zz) ** 2))
    emb = np.array(model.embedding.entries, dtype=float).reshape(d, h)
    lin = np.array(model.annihilator_basis.entries, dtype=float).reshape(d - h, d)
    moment = np.array([float(a) for a in model.base_point]) + emb @ phi
    if d - h:
        moment = moment + np.array([float(x) for x in nu]) @ lin
    return QuotientPoint(
        moment=tuple(float(v) for v in moment), monomial=dp.evaluate(tuple(zz))
    )


def exceptional_sheet_member(model: LocalModel, z: Sequence[complex]) -> SheetMembership:
    """Whether z lies on the exceptional sheet {P = 0}; only exact zero
    coordinates count (the sheet has measure zero, so floating fuzz would
    misclassify)."""
    dp = defining_polynomial(model.rep)
    zz = _as_complex(z, model.rep.n)
    on = any(zz[j] == 0 and dp.exponents[j] > 0 for j in range(model.rep.n))
    return SheetMembership(point=tuple(complex(v) for v in zz), on_sheet=on)


# ---------------------------------------------------------------------------
# seeded numeric verification
# ---------------------------------------------------------------------------


def _sample_polydisc(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """Uniform samples from the unit polydisc, rejecting coordinates of
    modulus below the near-zero threshold."""
    sq = rng.random((count, n))
    bad = sq < _MIN_ABS**2
    while bad.any():
        sq[bad] = rng.random(int(bad.sum()))
        bad = sq < _MIN_ABS**2
    phases = rng.random((count, n))
    return np.sqrt(sq) * np.exp(2j * np.pi * phases)


def _weights_float(rep: SubtorusRep) -> np.ndarray:
    return np.array(rep.weights().entries, dtype=float).reshape(rep.h, rep.n)


def _orbit_distance(w: np.ndarray, z: np.ndarray, zp: np.ndarray) -> float:
    """min over the compact group of |lam . z - zp|, by a coarse torus grid
    with multi-start local refinement.

    Refinement is pattern search (step halves only when the center wins)
    followed by a few Gauss-Newton steps on the wrapped coordinate phases,
    which pin the minimizer to machine precision when a basin was found.
    """
    h, n = w.shape
    if h == 0:
        return float(np.linalg.norm(z - zp))

    def dist(ts: np.ndarray) -> np.ndarray:
        lam = np.exp(2j * np.pi * (ts @ w))
        return np.linalg.norm(lam * z - zp, axis=1)

    g = min(1024, max(2, int(round(32768 ** (1.0 / h)))))
    axes = [np.arange(g) / g] * h
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, h)
    d0 = dist(grid)
    best = float(d0.min())
    starts = grid[np.argsort(d0)[:8]].copy()
    offsets = np.stack(
        np.meshgrid(*([np.array([-1.0, 0.0, 1.0])] * h), indexing="ij"), axis=-1
    ).reshape(-1, h)
    center = (3**h - 1) // 2
    widths = np.full(len(starts), 1.0 / g)
    for _ in range(120):
        cand = starts[:, None, :] + widths[:, None, None] * offsets[None, :, :]
        dc = dist(cand.reshape(-1, h)).reshape(len(starts), -1)
        pick = np.argmin(dc, axis=1)
        starts = cand[np.arange(len(starts)), pick]
        widths[pick == center] *= 0.5
        best = min(best, float(dc.min()))
        if widths.max() < 1e-14:
            break

    # polish: least-squares on wrapped phase residuals, weighted by |z_j|
    phases = np.angle(zp / z) / (2 * np.pi)
    weights = np.abs(z)
    a = weights[:, None] * w.T
    for t in starts:
        t = t.copy()
        for _ in range(4):
            residual = (w.T @ t - phases + 0.5) % 1.0 - 0.5
            step, *_ = np.linalg.lstsq(a, weights * residual, rcond=None)
            t = t - step
        best = min(best, float(dist(t[None, :])[0]))
    return best


@dataclass(frozen=True)
class FiberOrbitReport:
    """Outcome of the fiber-equals-orbit verification.

    Invariance trials check F(lam . z) = F(z) for random group elements;
    pair trials build a second point in the same fiber by projecting random
    torus phases onto the subgroup and then re-find the connecting group
    element by discretized minimization.
    """

    trials: int
    invariance_passes: int
    invariance_max_error: float
    pair_trials: int
    pair_passes: int
    pair_max_distance: float
    tolerance: float

    @property
    def checks(self) -> int:
        return self.trials + self.pair_trials

    @property
    def passes(self) -> int:
        return self.invariance_passes + self.pair_passes

    @property
    def pass_fraction(self) -> float:
        return self.passes / self.checks if self.checks else 1.0


def fiber_orbit_check(
    model: LocalModel, trials: int, seed: int = 0, tol: float = 1e-8
) -> FiberOrbitReport:
    """Verify numerically that the fibers of (moment value, monomial value)
    are exactly the subgroup orbits.

    The ambient trivializing map differs from this core by a fixed affine
    embedding, so fiber equality transfers verbatim.  Requires dim H <= 3
    for the orbit-recovery grid.
    """
    dp = defining_polynomial(model.rep)
    rep = model.rep
    if rep.h > 3:
        raise DomainError("orbit recovery is implemented for dim H <= 3")
    n, h = rep.n, rep.h
    w = _weights_float(rep)
    xi = np.array(dp.exponents, dtype=float)
    rng = np.random.default_rng(seed)

    inv_passes, inv_max = 0, 0.0
    if trials:
        z = _sample_polydisc(rng, trials, n)
        t = rng.random((trials, h))
        lam = np.exp(2j * np.pi * (t @ w)) if h else np.ones((trials, n))
        zl = lam * z
        phi0 = 0.5 * (np.abs(z) ** 2) @ w.T
        phi1 = 0.5 * (np.abs(zl) ** 2) @ w.T
        p0 = np.exp(np.log(z) @ xi)
        p1 = np.exp(np.log(zl) @ xi)
        err = np.abs(p1 - p0)
        if h:
            err = np.maximum(err, np.abs(phi1 - phi0).max(axis=1))
        inv_passes = int((err < tol).sum())
        inv_max = float(err.max())

    pair_trials = min(200, max(1, trials // 50)) if trials else 0
    pair_passes, pair_max = 0, 0.0
    a = w.T  # n x h
    proj = a @ np.linalg.pinv(a) if h else np.zeros((n, n))
    for _ in range(pair_trials):
        z = _sample_polydisc(rng, 1, n)[0]
        theta = rng.random(n)
        zp = np.exp(2j * np.pi * (proj @ theta)) * z
        dist = _orbit_distance(w, z, zp)
        pair_max = max(pair_max, dist)
        if dist < tol:
            pair_passes += 1

    return FiberOrbitReport(
        trials=trials,
        invariance_passes=inv_passes,
        invariance_max_error=inv_max,
        pair_trials=pair_trials,
        pair_passes=pair_passes,
        pair_max_distance=pair_max,
        tolerance=tol,
    )


@dataclass(frozen=True)
class SurjectivityReport:
    targets: int
    found: int
    max_error: float
    tolerance: float

    @property
    def all_found(self) -> bool:
        return self.found == self.targets


def surjectivity_check(
    model: LocalModel,
    targets: int,
    seed: int = 0,
    tol: float = 1e-8,
    window: float = 2.0,
) -> SurjectivityReport:
    """For random targets (beta, zeta) in a window of (moment image) x C,
    construct a preimage under (moment value, monomial value).

    Construction: pick a nonnegative radial solution of the moment
    equations, slide it along the exponent direction (which the moment map
    cannot see) until the radial monomial matches |zeta|^2, then fix the
    monomial's phase with an integer combination of coordinate phases.
    """
    dp = defining_polynomial(model.rep)
    rep = model.rep
    n, h = rep.n, rep.h
    w = _weights_float(rep)
    xi = np.array(dp.exponents, dtype=float)
    pos = xi > 0
    _, bez = bezout_vector(dp.exponents)
    bez = np.array(bez, dtype=float)
    rng = np.random.default_rng(seed)

    found, max_err = 0, 0.0
    for _ in range(targets):
        x0 = window * rng.random(n)
        beta = 0.5 * (w @ x0)
        zr = window * np.sqrt(rng.random())
        zphi = 2 * np.pi * rng.random()
        zeta = zr * complex(np.cos(zphi), np.sin(zphi))

        def radial_log(t: float) -> float:
            vals = x0[pos] + t * xi[pos]
            return float(xi[pos] @ np.log(np.maximum(vals, 1e-300)))

        t_floor = float(np.max(-x0[pos] / xi[pos]))
        if zr == 0.0:
            t_sol = t_floor
        else:
            target_log = 2.0 * float(np.log(zr))
            lo_step = 1.0
            while radial_log(t_floor + lo_step) >= target_log and lo_step > 1e-250:
                lo_step *= 0.5
            hi_step = max(lo_step, 1.0)
            while radial_log(t_floor + hi_step) <= target_log and hi_step < 1e250:
                hi_step *= 2.0
            lo, hi = t_floor + lo_step, t_floor + hi_step
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if radial_log(mid) < target_log:
                    lo = mid
                else:
                    hi = mid
            t_sol = 0.5 * (lo + hi)

        x = x0 + t_sol * xi
        x = np.maximum(x, 0.0)
        z = np.sqrt(x).astype(complex)
        if zr > 0.0:
            z = z * np.exp(1j * zphi * bez)
            p_val = complex(np.exp(np.log(z[pos]) @ xi[pos]))
        else:
            p_val = 0j
        phi = 0.5 * (w @ (np.abs(z) ** 2))
        err = abs(p_val - zeta)
        if h:
            err = max(err, float(np.abs(phi - beta).max()))
        max_err = max(max_err, err)
        if err < tol:
            found += 1

    return SurjectivityReport(targets=targets, found=found, max_error=max_err, tolerance=tol)


@dataclass(frozen=True)
class SubmersionReport:
    """Rank of the real derivative of (moment map, monomial) at a point,
    with the explicit witness direction that annihilates the moment
    derivative but not the monomial derivative."""

    rank: int
    full_rank: int
    witness: tuple[complex, ...]
    annihilation_error: float
    monomial_derivative: complex
    boundary_index: int | None

    @property
    def passed(self) -> bool:
        return self.rank == self.full_rank and self.monomial_derivative != 0


def _witness_and_derivative(
    xi: np.ndarray, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray, int | None]:
    """Witness direction and the complex gradient of the monomial at z.

    Interior points (all coordinates nonzero) use zeta_j = xi_j / conj(z_j);
    a single vanishing coordinate with exponent 1 uses the coordinate
    direction itself.
    """
    n = len(z)
    zeros = [j for j in range(n) if z[j] == 0]
    if not zeros:
        zeta = np.where(xi > 0, xi / np.conj(z), 0.0)
        p = complex(np.exp(np.sum(xi[xi > 0] * np.log(z[xi > 0]))))
        grad = np.where(xi > 0, p * xi / z, 0.0)
        return zeta, grad, None
    i = zeros[0]
    zeta = np.zeros(n, dtype=complex)
    zeta[i] = 1.0
    zmasked = z.copy()
    zmasked[i] = 1.0
    rest = complex(np.exp(np.sum(xi[xi > 0] * np.log(zmasked[xi > 0]))))
    grad = np.zeros(n, dtype=complex)
    grad[i] = rest
    return zeta, grad, i


def _real_jacobian(w: np.ndarray, z: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Real (h + 2) x 2n Jacobian of (moment map, Re P, Im P) at z, columns
    ordered (x_1..x_n, y_1..y_n)."""
    h, n = w.shape
    j = np.zeros((h + 2, 2 * n))
    j[:h, :n] = w * z.real[None, :]
    j[:h, n:] = w * z.imag[None, :]
    j[h, :n] = grad.real
    j[h, n:] = -grad.imag
    j[h + 1, :n] = grad.imag
    j[h + 1, n:] = grad.real
    return j


def submersion_check(model: LocalModel, z: Sequence[complex]) -> SubmersionReport:
    """Verify that the derivative of (moment map, monomial) at z has full
    real rank, using the explicit witness direction.

    Raises ``ExceptionalPoint`` when the support pattern of z has a
    nontrivial stabilizer (rank must drop there, and no witness exists).
    """
    dp = defining_polynomial(model.rep)
    rep = model.rep
    zz = _as_complex(z, rep.n)
    support = [j for j in range(rep.n) if zz[j] != 0]
    if not stabilizer(rep, support).is_trivial:
        raise ExceptionalPoint(
            f"support {support} has a nontrivial stabilizer; the derivative "
            "cannot be onto there"
        )
    w = _weights_float(rep)
    xi = np.array(dp.exponents, dtype=float)
    zeta, grad, boundary = _witness_and_derivative(xi, zz)
    cross = zz * np.conj(zeta)
    err_re = float(np.abs(w @ cross.real).max()) if rep.h else 0.0
    err_im = float(np.abs(w @ cross.imag).max()) if rep.h else 0.0
    dp_val = complex(grad @ zeta)
    jac = _real_jacobian(w, zz, grad)
    rank = int(np.linalg.matrix_rank(jac))
    return SubmersionReport(
        rank=rank,
        full_rank=rep.h + 2,
        witness=tuple(complex(v) for v in zeta),
        annihilation_error=max(err_re, err_im),
        monomial_derivative=dp_val,
        boundary_index=boundary,
    )


@dataclass(frozen=True)
class SubmersionScanReport:
    samples: int
    boundary_samples: int
    rank_failures: int
    max_annihilation_error: float
    min_monomial_derivative: float

    @property
    def passed(self) -> bool:
        return self.rank_failures == 0


def submersion_scan(
    model: LocalModel,
    samples: int,
    seed: int = 0,
    include_boundary_patterns: bool = True,
) -> SubmersionScanReport:
    """Batch full-rank verification at sampled non-exceptional points.

    Interior points come from the unit polydisc (near-zero coordinates
    rejected); when requested and available, every eighth sample instead
    zeroes one exponent-1 coordinate to exercise boundary support
    patterns, which are non-exceptional as well.
    """
    dp = defining_polynomial(model.rep)
    rep = model.rep
    n, h = rep.n, rep.h
    w = _weights_float(rep)
    xi = np.array(dp.exponents, dtype=float)
    rng = np.random.default_rng(seed)

    z = _sample_polydisc(rng, samples, n)
    ones_idx = [j for j in range(n) if dp.exponents[j] == 1]
    boundary_rows: list[int] = []
    boundary_cols: list[int] = []
    if include_boundary_patterns and ones_idx and n > 1:
        for k, row in enumerate(range(0, samples, 8)):
            col = ones_idx[k % len(ones_idx)]
            z[row, col] = 0.0
            boundary_rows.append(row)
            boundary_cols.append(col)

    zeta = np.zeros_like(z)
    grad = np.zeros_like(z)
    interior = np.ones(samples, dtype=bool)
    interior[boundary_rows] = False

    zi = z[interior]
    pos = xi > 0
    zeta_i = np.zeros_like(zi)
    zeta_i[:, pos] = xi[pos] / np.conj(zi[:, pos])
    p_i = np.exp(np.log(zi[:, pos]) @ xi[pos])
    grad_i = np.zeros_like(zi)
    grad_i[:, pos] = p_i[:, None] * xi[pos] / zi[:, pos]
    zeta[interior] = zeta_i
    grad[interior] = grad_i

    if boundary_rows:
        zb = z[boundary_rows].copy()
        zb[np.arange(len(boundary_rows)), boundary_cols] = 1.0
        rest = np.exp(np.log(zb[:, pos]) @ xi[pos])
        for k, (r, c) in enumerate(zip(boundary_rows, boundary_cols)):
            zeta[r, c] = 1.0
            grad[r, c] = rest[k]

    cross = z * np.conj(zeta)
    if h:
        err = np.maximum(
            np.abs(cross.real @ w.T).max(axis=1), np.abs(cross.imag @ w.T).max(axis=1)
        )
    else:
        err = np.zeros(samples)
    dp_vals = np.abs(np.sum(grad * zeta, axis=1))

    jac = np.zeros((samples, h + 2, 2 * n))
    jac[:, :h, :n] = w[None, :, :] * z.real[:, None, :]
    jac[:, :h, n:] = w[None, :, :] * z.imag[:, None, :]
    jac[:, h, :n] = grad.real
    jac[:, h, n:] = -grad.imag
    jac[:, h + 1, :n] = grad.imag
    jac[:, h + 1, n:] = grad.real
    sv = np.linalg.svd(jac, compute_uv=False)
    cutoff = sv.max(axis=1, keepdims=True) * max(h + 2, 2 * n) * np.finfo(float).eps
    ranks = (sv > cutoff).sum(axis=1)
    failures = int((ranks != h + 2).sum())

    return SubmersionScanReport(
        samples=samples,
        boundary_samples=len(boundary_rows),
        rank_failures=failures,
        max_annihilation_error=float(err.max()) if samples else 0.0,
        min_monomial_derivative=float(dp_vals.min()) if samples else 0.0,
    )
