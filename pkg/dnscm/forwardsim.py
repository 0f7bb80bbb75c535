# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""
Two-time-step stability study.

A ground-truth generator draws each unit's exogenous mean and two noisy
outcomes around it; the modeler only knows the marginal noise variance and
predicts next-period outcomes after treatment either interventionally
(fresh noise) or as a forward-looking counterfactual (reused noise).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from dnscm.distributions import EmpiricalDist, variance
from dnscm.kl import knn_kl
from dnscm.rng import derive_seed, substream
from dnscm.scm import Sample, Shift, interventional_sample, outcome_scm

logger = logging.getLogger(__name__)

NOISE_SCALES = ("sd", "variance")

# (z0, y0) -> binary w
TreatmentRule = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class StabilityParams:
    """
    Parameters of the stability generator.

    Attributes:
        n: Number of units
        mu_z: Mean of the treatment variable at t=0
        sigma_z: Standard deviation of the treatment variable at t=0
        sigma_u: Within-unit noise scale (stability)
        sigma_mu: Across-unit noise-mean scale (structure)
        delta: Treatment effect added to Z
        seed: Master seed
        noise_scale: ``sd`` reads sigma_u and sigma_mu as standard
            deviations, ``variance`` reads them as variances
    """

    n: int = 1000
    mu_z: float = 0.0
    sigma_z: float = 1.0
    sigma_u: float = 0.0
    sigma_mu: float = 0.0
    delta: float = 1.0
    seed: int = 0
    noise_scale: str = "sd"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        for name in ("sigma_z", "sigma_u", "sigma_mu"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.noise_scale not in NOISE_SCALES:
            raise ValueError(
                f"Unknown noise_scale: {self.noise_scale}. Use one of {', '.join(NOISE_SCALES)}"
            )
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")

    def spread(self, value: float) -> float:
        """Standard deviation of a generator noise under the configured scale."""
        return value if self.noise_scale == "sd" else math.sqrt(value)

    @property
    def var_u(self) -> float:
        return self.spread(self.sigma_u) ** 2

    @property
    def var_mu(self) -> float:
        return self.spread(self.sigma_mu) ** 2

    @property
    def modeler_variance(self) -> float:
        """Noise variance of the modeler's SCM, ``sigma_mu² + sigma_u²``."""
        return self.sigma_mu**2 + self.sigma_u**2

    def with_values(self, **changes: Any) -> "StabilityParams":
        return replace(self, **changes)


def negative_outcome_rule(z0: np.ndarray, y0: np.ndarray) -> np.ndarray:
    """Treat every unit with ``Y0 < 0``."""
    return (np.asarray(y0) < 0).astype(int)


def fixed_assignment_rule(w: Sequence[int]) -> TreatmentRule:
    """Rule that ignores the data and returns ``w``."""
    assignment = np.asarray(w, dtype=int)

    def rule(z0: np.ndarray, y0: np.ndarray) -> np.ndarray:
        if assignment.shape[0] != np.asarray(z0).shape[0]:
            raise ValueError(f"Fixed assignment has {assignment.shape[0]} entries for {len(z0)} units")
        return assignment

    return rule


@dataclass(frozen=True)
class TwoStepData:
    """Ground-truth columns of one simulated population."""

    z0: np.ndarray
    y0: np.ndarray
    w: np.ndarray
    offsets: np.ndarray
    z1: np.ndarray
    y1_true: np.ndarray
    mu_u: np.ndarray
    u0: np.ndarray
    u1: np.ndarray

    @property
    def n(self) -> int:
        return int(self.z0.shape[0])

    def scatter_rows(self) -> List[Dict[str, float]]:
        """Per-unit (y0, y1_true, w) rows."""
        return [
            {"y0": float(a), "y1_true": float(b), "w": int(c)}
            for a, b, c in zip(self.y0, self.y1_true, self.w)
        ]


@dataclass(frozen=True)
class Estimate:
    """Per-unit Y1 predictions and their empirical distribution."""

    values: np.ndarray
    dist: EmpiricalDist


def generate_truth(p: StabilityParams, rule: Optional[TreatmentRule] = None) -> TwoStepData:
    """
    Draw a population and its true next-period outcomes.

    ``mu_u ~ N(0, sigma_mu²)``, ``U0, U1 ~ N(mu_u, sigma_u²)``,
    ``Z0 ~ N(mu_z, sigma_z²)``, ``Y0 = Z0 + U0``, ``w = rule(Z0, Y0)``,
    ``Z1 = Z0 + delta * w`` and ``Y1 = Z1 + U1``. Y1 is evaluated as
    ``Y0 + delta * w + (U1 - U0)`` so that a constant noise gives
    ``Y1 = Y0 + delta * w`` exactly.

    Args:
        p: Generator parameters
        rule: Treatment rule (default :func:`negative_outcome_rule`)
    """
    rule = rule or negative_outcome_rule
    n = p.n
    mu_u = p.spread(p.sigma_mu) * substream(p.seed, "truth", "mu_u").standard_normal(n)
    spread_u = p.spread(p.sigma_u)
    u0 = mu_u + spread_u * substream(p.seed, "truth", "u0").standard_normal(n)
    u1 = mu_u + spread_u * substream(p.seed, "truth", "u1").standard_normal(n)
    z0 = p.mu_z + p.sigma_z * substream(p.seed, "truth", "z0").standard_normal(n)
    y0 = z0 + u0

    w = np.asarray(rule(z0, y0), dtype=int)
    if w.shape != (n,) or np.any((w != 0) & (w != 1)):
        raise ValueError("Treatment rule must return one binary value per unit")
    offsets = np.asarray(Shift.treatment("Z", p.delta, w).offsets)
    z1 = z0 + offsets
    y1_true = (y0 + offsets) + (u1 - u0)
    logger.debug("Generated %d units, %d treated", n, int(w.sum()))
    return TwoStepData(z0=z0, y0=y0, w=w, offsets=offsets, z1=z1, y1_true=y1_true, mu_u=mu_u, u0=u0, u1=u1)


def estimate_interventional(data: TwoStepData, p: StabilityParams) -> Estimate:
    """
    Interventional Y1: shift Z and draw fresh outcome noise.

    Runs the modeler's SCM ``Z = U_Z``, ``Y = Z + U_Y`` with
    ``U_Y ~ N(0, sigma_mu² + sigma_u²)``: Z keeps its abducted value plus the
    shift, U_Y is resampled from its prior.
    """
    scm = outcome_scm(p.mu_z, p.sigma_z, p.modeler_variance)
    base = Sample(n=data.n, values={"Z": data.z0, "Y": data.y0})
    shifted = interventional_sample(
        scm, base, Shift("Z", tuple(data.offsets.tolist())), frozenset({"U_Y"}), p.seed
    )
    values = np.array(shifted["Y"])
    return Estimate(values=values, dist=EmpiricalDist(values))


def estimate_counterfactual(data: TwoStepData, p: StabilityParams) -> Estimate:
    """
    Forward-looking counterfactual Y1: the abducted noise ``Y0 - Z0`` carries over.

    Evaluated as ``Y0 + delta * w``.
    """
    values = data.y0 + data.offsets
    return Estimate(values=values, dist=EmpiricalDist(values))


def regime(p: StabilityParams) -> Tuple[str, str]:
    """
    Stability and structure regime of a parameter point.

    Returns:
        (``A1`` constant exogenous factors | ``A2`` time-varying,
        ``A3`` unstructured | ``A4`` unit-specific)
    """
    return ("A1" if p.sigma_u == 0 else "A2", "A3" if p.sigma_mu == 0 else "A4")


@dataclass(frozen=True)
class AnalyticVariances:
    y0: float
    y1_true: float
    y1_cf: float
    z1: float
    y1_int: float


def analytic_variances(p: StabilityParams) -> AnalyticVariances:
    """
    Population variances under the ``Y0 < 0`` rule.

    With ``s² = Var(Y0)``, ``a = -mu_z / s``, ``P = Φ(a)`` and ``φ = φ(a)``:
    ``Var(Y1 cf) = s² + δ²P(1-P) - 2δsφ``,
    ``Var(Y1 true) = s² + δ²P(1-P) - 2δ(σ_z² + Var μ)φ/s``,
    ``Var(Z1) = σ_z² + δ²P(1-P) - 2δσ_z²φ/s`` and
    ``Var(Y1 int) = Var(Z1) + σ_μ² + σ_U²``.
    """
    s2 = p.sigma_z**2 + p.var_mu + p.var_u
    delta = p.delta
    if s2 == 0:
        prob = 1.0 if p.mu_z < 0 else 0.0
        ratio_s = ratio_true = ratio_z = 0.0
    else:
        s = math.sqrt(s2)
        a = -p.mu_z / s
        prob = float(norm.cdf(a))
        density = float(norm.pdf(a))
        ratio_s = s * density
        ratio_true = (p.sigma_z**2 + p.var_mu) * density / s
        ratio_z = p.sigma_z**2 * density / s
    binary = delta**2 * prob * (1 - prob)
    z1 = p.sigma_z**2 + binary - 2 * delta * ratio_z
    return AnalyticVariances(
        y0=s2,
        y1_true=s2 + binary - 2 * delta * ratio_true,
        y1_cf=s2 + binary - 2 * delta * ratio_s,
        z1=z1,
        y1_int=z1 + p.modeler_variance,
    )


@dataclass(frozen=True)
class GridRow:
    """One grid point of the stability sweep."""

    sigma_u: float
    sigma_mu: float
    delta: float
    n: int
    seed: int
    kl_true_vs_int: float
    kl_true_vs_cf: float
    var_y0: float
    var_y1_true: float
    var_y1_cf: float
    var_y1_int: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


GRID_COLUMNS = list(GridRow.__dataclass_fields__)


def run_point(p: StabilityParams, k: int = 10, rule: Optional[TreatmentRule] = None) -> GridRow:
    """Simulate one parameter point and summarize it."""
    data = generate_truth(p, rule)
    interventional = estimate_interventional(data, p)
    counterfactual = estimate_counterfactual(data, p)
    return GridRow(
        sigma_u=p.sigma_u,
        sigma_mu=p.sigma_mu,
        delta=p.delta,
        n=p.n,
        seed=p.seed,
        kl_true_vs_int=knn_kl(data.y1_true, interventional.values, k).value,
        kl_true_vs_cf=knn_kl(data.y1_true, counterfactual.values, k).value,
        var_y0=variance(EmpiricalDist(data.y0)),
        var_y1_true=variance(EmpiricalDist(data.y1_true)),
        var_y1_cf=variance(counterfactual.dist),
        var_y1_int=variance(interventional.dist),
    )


def point_seed(master_seed: int, sigma_u: float, sigma_mu: float, delta: float) -> int:
    """Seed of a grid point, keyed by its parameter values."""
    return derive_seed(master_seed, "grid", float(sigma_u), float(sigma_mu), float(delta))


def run_grid(
    sigma_u_values: Sequence[float],
    sigma_mu_values: Sequence[float],
    delta_values: Sequence[float],
    p: StabilityParams,
    k: int = 10,
    rule: Optional[TreatmentRule] = None,
    threads: int = 1,
) -> List[GridRow]:
    """
    Sweep the stability study over a parameter grid.

    Rows come in grid order (delta, then sigma_mu, then sigma_u) and each
    point runs under its own seed derived from ``p.seed``, so the output does
    not depend on ``threads``.

    Args:
        sigma_u_values: Within-unit noise scales
        sigma_mu_values: Across-unit noise-mean scales
        delta_values: Treatment effects
        p: Template for the remaining parameters (its seed is the master seed)
        k: Neighbor rank of the KL estimator
        rule: Treatment rule (default :func:`negative_outcome_rule`)
        threads: Worker threads

    Returns:
        One GridRow per grid point

    Raises:
        ValueError: If a grid is empty
    """
    for name, values in (
        ("sigma_u", sigma_u_values),
        ("sigma_mu", sigma_mu_values),
        ("delta", delta_values),
    ):
        if len(values) == 0:
            raise ValueError(f"The {name} grid must be non-empty")
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")

    points = [
        p.with_values(
            sigma_u=float(sigma_u),
            sigma_mu=float(sigma_mu),
            delta=float(delta),
            seed=point_seed(p.seed, sigma_u, sigma_mu, delta),
        )
        for delta in delta_values
        for sigma_mu in sigma_mu_values
        for sigma_u in sigma_u_values
    ]
    logger.info("Running %d grid points on %d thread(s)", len(points), threads)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(lambda point: run_point(point, k, rule), points))
