# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Outcome distributions: exact step CDFs, empirical samples and kernel densities."""

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import norm

Bandwidth = Union[float, str]


def _exact_weight(value: Union[Fraction, int, float]) -> Fraction:
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    return Fraction(repr(float(value)))


@dataclass(frozen=True)
class StepCdf:
    """
    Right-continuous step CDF with exact rational levels.

    Attributes:
        support: Strictly increasing jump locations
        cum: Cumulative probability at each jump; nondecreasing, last == 1
    """

    support: Tuple[float, ...]
    cum: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        support = tuple(float(y) for y in self.support)
        cum = tuple(Fraction(c) for c in self.cum)
        if not support:
            raise ValueError("StepCdf needs at least one support point")
        if len(support) != len(cum):
            raise ValueError("StepCdf support and cum must have the same length")
        if not all(math.isfinite(y) for y in support):
            raise ValueError("StepCdf support must be finite")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ValueError("StepCdf support must be strictly increasing")
        if any(c <= 0 or c > 1 for c in cum) or any(b < a for a, b in zip(cum, cum[1:])):
            raise ValueError("StepCdf levels must be nondecreasing in (0, 1]")
        if cum[-1] != 1:
            raise ValueError(f"StepCdf must end at exactly 1, got {cum[-1]}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "cum", cum)

    @classmethod
    def from_pmf(cls, masses: Iterable[Tuple[float, Fraction]]) -> "StepCdf":
        """
        Build the CDF of a finite law, merging repeated values.

        Raises:
            ValueError: If the masses are empty, negative or do not sum to 1
        """
        pmf: Dict[float, Fraction] = {}
        for value, mass in masses:
            if mass < 0:
                raise ValueError(f"Negative probability mass {mass} at {value}")
            key = float(value)
            pmf[key] = pmf.get(key, Fraction(0)) + mass
        support = sorted(y for y, mass in pmf.items() if mass > 0)
        if not support:
            raise ValueError("StepCdf needs positive mass somewhere")
        cum: List[Fraction] = []
        running = Fraction(0)
        for y in support:
            running += pmf[y]
            cum.append(running)
        return cls(tuple(support), tuple(cum))

    def __call__(self, y: float) -> Fraction:
        index = bisect.bisect_right(self.support, y)
        return Fraction(0) if index == 0 else self.cum[index - 1]

    def pmf(self) -> Dict[float, Fraction]:
        previous = Fraction(0)
        masses: Dict[float, Fraction] = {}
        for y, level in zip(self.support, self.cum):
            masses[y] = level - previous
            previous = level
        return masses

    def to_rows(self) -> List[Dict[str, float]]:
        """Rows for the ``(y, cdf)`` CSV layout."""
        return [{"y": y, "cdf": float(level)} for y, level in zip(self.support, self.cum)]


@dataclass(frozen=True)
class EmpiricalDist:
    """A finite sample of real outcomes."""

    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=float).reshape(-1)
        if samples.size == 0:
            raise ValueError("EmpiricalDist needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValueError("EmpiricalDist samples must be finite")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)


def mixture_of_pointmasses(
    unit_outcomes: Sequence[float],
    weights: Optional[Sequence[Union[Fraction, int, float]]] = None,
) -> StepCdf:
    """
    Exact CDF of a weighted mixture of per-unit point masses.

    Args:
        unit_outcomes: One outcome per unit
        weights: Mixture weights summing to exactly 1 (default uniform 1/n);
            floats are read by their decimal repr, so pass Fractions for
            thirds and the like

    Returns:
        StepCdf of the mixture

    Raises:
        ValueError: If the input is empty or the weights are invalid
    """
    outcomes = [float(y) for y in unit_outcomes]
    if not outcomes:
        raise ValueError("mixture_of_pointmasses needs at least one outcome")
    if weights is None:
        exact = [Fraction(1, len(outcomes))] * len(outcomes)
    else:
        if len(weights) != len(outcomes):
            raise ValueError(f"Got {len(weights)} weights for {len(outcomes)} outcomes")
        exact = [_exact_weight(w) for w in weights]
        if sum(exact) != 1:
            raise ValueError(f"Mixture weights must sum to 1, got {sum(exact)}")
    return StepCdf.from_pmf(zip(outcomes, exact))


def ecdf(d: EmpiricalDist) -> StepCdf:
    """Empirical CDF with weights k/n."""
    return mixture_of_pointmasses(d.samples.tolist())


def variance(d: EmpiricalDist) -> float:
    """
    Population variance (divide by n).

    Raises:
        ValueError: If fewer than two samples are given
    """
    if len(d) < 2:
        raise ValueError(f"variance needs at least 2 samples, got {len(d)}")
    return float(np.var(d.samples))


def silverman_bandwidth(d: EmpiricalDist) -> float:
    """
    Silverman's rule of thumb, ``0.9 * min(sd, IQR / 1.34) * n^(-1/5)``.

    Raises:
        ValueError: If the sample has no spread
    """
    sd = float(np.std(d.samples, ddof=1)) if len(d) > 1 else 0.0
    q75, q25 = np.percentile(d.samples, [75, 25])
    spread = min(sd, float(q75 - q25) / 1.34)
    if spread <= 0:
        spread = max(sd, float(q75 - q25) / 1.34)
    if spread <= 0:
        raise ValueError("Automatic bandwidth needs a sample with spread; pass a bandwidth")
    return 0.9 * spread * len(d) ** (-0.2)


def resolve_bandwidth(d: EmpiricalDist, bandwidth: Bandwidth) -> float:
    if bandwidth == "auto":
        return silverman_bandwidth(d)
    if isinstance(bandwidth, str):
        raise ValueError(f"Unknown bandwidth rule: {bandwidth}. Use 'auto' or a positive number")
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    return float(bandwidth)


def kde_density(
    d: EmpiricalDist, bandwidth: Bandwidth, grid: Sequence[float]
) -> List[Tuple[float, float]]:
    """
    Gaussian kernel density estimate evaluated on a grid.

    Args:
        d: Sample
        bandwidth: Kernel standard deviation, or ``"auto"`` for Silverman's rule
        grid: Evaluation points

    Returns:
        List of (y, density) pairs

    Raises:
        ValueError: If the grid is empty or the bandwidth invalid
    """
    points = np.asarray(grid, dtype=float).reshape(-1)
    if points.size == 0:
        raise ValueError("kde_density needs a non-empty grid")
    h = resolve_bandwidth(d, bandwidth)
    density = np.empty(points.size)
    # bound the (grid x sample) kernel matrix
    step = max(1, 2_000_000 // len(d))
    for start in range(0, points.size, step):
        chunk = points[start : start + step]
        kernel = norm.pdf((chunk[:, None] - d.samples[None, :]) / h)
        density[start : start + step] = kernel.mean(axis=1) / h
    return list(zip(points.tolist(), density.tolist()))


def density_grid(dists: Sequence[EmpiricalDist], bandwidth: Bandwidth, points: int) -> np.ndarray:
    """
    Shared evaluation grid spanning every sample by five bandwidths on each side.

    Args:
        dists: Samples to be plotted on the same axis
        bandwidth: Bandwidth or ``"auto"`` (the widest resolved value is used)
        points: Number of grid points (>= 2)
    """
    if points < 2:
        raise ValueError(f"A density grid needs at least 2 points, got {points}")
    if not dists:
        raise ValueError("density_grid needs at least one sample")
    h = max(resolve_bandwidth(d, bandwidth) for d in dists)
    low = min(float(d.samples.min()) for d in dists) - 5 * h
    high = max(float(d.samples.max()) for d in dists) + 5 * h
    return np.linspace(low, high, points)
