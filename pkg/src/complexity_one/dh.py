"""Monte Carlo pushforward of Lebesgue measure under the quadratic moment
map, truncated to a polydisc.

The moment value of a point of the polydisc depends only on the squared
moduli, and the squared modulus of a uniform point of a radius-R disc is
uniform on [0, R^2]; sampling therefore draws squared moduli directly.
Densities are reported per unit Lebesgue volume of the weight space, so a
bin's value is (polydisc volume) * (bin count) / (samples * bin volume).

Estimation is embarrassingly parallel over sample shards: give each shard
seed + shard index and sum the bin counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .errors import DegenerateGrid, DomainError
from .rep import SubtorusRep

MIN_SAMPLES = 10_000


@dataclass(frozen=True)
class DHEstimate:
    """Histogram estimate of the pushforward density on a regular grid.

    ``densities`` has one axis per weight-space dimension; bin (i1, .., ih)
    covers the product of [lo_k + i_k * width_k, lo_k + (i_k + 1) * width_k).
    Samples falling outside the grid are counted, not binned.
    """

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    bins: tuple[int, ...]
    densities: np.ndarray
    samples: int
    radius: float
    out_of_range: int
    seed: int

    @property
    def bin_widths(self) -> tuple[float, ...]:
        return tuple((h - l) / b for l, h, b in zip(self.lo, self.hi, self.bins))

    @property
    def bin_volume(self) -> float:
        return float(np.prod(self.bin_widths))

    def bin_centers(self, axis: int) -> np.ndarray:
        w = self.bin_widths[axis]
        return self.lo[axis] + w * (np.arange(self.bins[axis]) + 0.5)

    def total_mass(self) -> float:
        """Mass captured by the grid (full polydisc mass minus the
        out-of-range share, up to Monte Carlo noise)."""
        return float(self.densities.sum() * self.bin_volume)

    def write_csv(self, stream: TextIO) -> None:
        """One row per bin: center coordinates then density."""
        dim = len(self.bins)
        header = ",".join(f"center_{k}" for k in range(dim)) + ",density"
        stream.write(header + "\n")
        centers = [self.bin_centers(k) for k in range(dim)]
        for idx in np.ndindex(*self.bins):
            coords = [centers[k][idx[k]] for k in range(dim)]
            row = [format(c, ".12g") for c in coords]
            row.append(format(float(self.densities[idx]), ".12g"))
            stream.write(",".join(row) + "\n")


def dh_estimate(
    rep: SubtorusRep,
    radius: float,
    lo: Sequence[float],
    hi: Sequence[float],
    bins: Sequence[int],
    samples: int,
    seed: int = 0,
) -> DHEstimate:
    """Estimate the density of the pushforward of Lebesgue measure on the
    radius-``radius`` polydisc under the quadratic moment map."""
    rep._require_effective()
    h, n = rep.h, rep.n
    if samples < MIN_SAMPLES:
        raise DomainError(f"at least {MIN_SAMPLES} samples required")
    if not radius > 0:
        raise DomainError("truncation radius must be positive")
    lo, hi, bins = tuple(map(float, lo)), tuple(map(float, hi)), tuple(map(int, bins))
    if len(lo) != h or len(hi) != h or len(bins) != h:
        raise DegenerateGrid(f"grid must have {h} dimensions")
    if any(b < 1 for b in bins) or any(u <= l for l, u in zip(lo, hi)):
        raise DegenerateGrid("empty or inverted grid")

    w = np.array(rep.weights().entries, dtype=float).reshape(h, n)
    rng = np.random.default_rng(seed)
    sq = radius * radius * rng.random((samples, n))
    values = 0.5 * sq @ w.T

    counts, _ = np.histogramdd(values, bins=bins, range=list(zip(lo, hi)))
    inside = int(counts.sum())
    polydisc_volume = (math.pi * radius * radius) ** n
    bin_volume = float(np.prod([(u - l) / b for l, u, b in zip(lo, hi, bins)]))
    densities = counts * (polydisc_volume / (samples * bin_volume))
    return DHEstimate(
        lo=lo,
        hi=hi,
        bins=bins,
        densities=densities,
        samples=samples,
        radius=float(radius),
        out_of_range=samples - inside,
        seed=seed,
    )
