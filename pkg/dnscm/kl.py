# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""k-nearest-neighbor estimation of Kullback-Leibler divergence between 1-D samples."""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

logger = logging.getLogger(__name__)

ZERO_DISTANCE_FACTOR = 1e-9


@dataclass(frozen=True)
class KlEstimate:
    """
    Divergence estimate in nats.

    Attributes:
        value: Estimated D(p || q); may be negative
        k: Neighbor rank used
        n: Size of the p sample
        m: Size of the q sample
    """

    value: float
    k: int
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.n <= self.k or self.m <= self.k:
            raise ValueError(f"Need n, m > k >= 1, got n={self.n}, m={self.m}, k={self.k}")


def _as_samples(values: Sequence[float], label: str) -> np.ndarray:
    array = np.asarray(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{label} samples must be finite")
    return array


def _check_sizes(p: np.ndarray, q: np.ndarray, k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if p.size <= k or q.size <= k:
        raise ValueError(
            f"k={k} needs more than k samples on both sides, got n={p.size}, m={q.size}"
        )


def knn_distances(p: Sequence[float], q: Sequence[float], k: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    k-th nearest-neighbor distances of every p point.

    ``rho[i]`` is measured within ``p`` without ``p[i]`` itself; ``nu[i]``
    is measured within ``q`` with one copy of ``p[i]`` removed when ``q``
    contains it exactly.

    Returns:
        (rho, nu) arrays of length n
    """
    p_arr, q_arr = _as_samples(p, "p"), _as_samples(q, "q")
    _check_sizes(p_arr, q_arr, k)
    points = p_arr[:, None]
    # Chebyshev distance is |x - y| exactly in one dimension
    rho = cKDTree(points).query(points, k=k + 1, p=np.inf)[0][:, k]
    nu_all = cKDTree(q_arr[:, None]).query(points, k=k + 1, p=np.inf)[0]
    nu = np.where(nu_all[:, 0] == 0.0, nu_all[:, k], nu_all[:, k - 1])
    return rho, nu


def brute_force_knn_distances(
    p: Sequence[float], q: Sequence[float], k: int
) -> Tuple[np.ndarray, np.ndarray]:
    """O(n*m) reference for :func:`knn_distances`."""
    p_arr, q_arr = _as_samples(p, "p"), _as_samples(q, "q")
    _check_sizes(p_arr, q_arr, k)
    rho = np.empty(p_arr.size)
    nu = np.empty(p_arr.size)
    for i, x in enumerate(p_arr):
        within = np.sort(np.abs(np.delete(p_arr, i) - x))
        rho[i] = within[k - 1]
        across = np.sort(np.abs(q_arr - x))
        if across[0] == 0.0:
            across = across[1:]
        nu[i] = across[k - 1]
    return rho, nu


def knn_kl(p_samples: Sequence[float], q_samples: Sequence[float], k: int = 10) -> KlEstimate:
    """
    Estimate D(p || q) from samples with the k-NN divergence estimator.

    ``D = (1/n) * sum_i log(nu_k(i) / rho_k(i)) + log(m / (n - 1))``.
    Zero distances (repeated values) are replaced by the smallest positive
    distance seen times ``ZERO_DISTANCE_FACTOR``. The estimate is not
    truncated at zero.

    Args:
        p_samples: Draws from p
        q_samples: Draws from q
        k: Neighbor rank (default 10)

    Returns:
        KlEstimate

    Raises:
        ValueError: If either sample has k or fewer points
    """
    rho, nu = knn_distances(p_samples, q_samples, k)
    n, m = rho.size, int(np.asarray(q_samples).size)

    distances = np.concatenate([rho, nu])
    positive = distances[distances > 0]
    if positive.size < distances.size:
        floor = (positive.min() if positive.size else 1.0) * ZERO_DISTANCE_FACTOR
        logger.debug("Replacing %d zero neighbor distances", distances.size - positive.size)
        rho = np.where(rho > 0, rho, floor)
        nu = np.where(nu > 0, nu, floor)

    value = float(np.mean(np.log(nu / rho)) + np.log(m / (n - 1)))
    return KlEstimate(value=value, k=k, n=n, m=m)
