# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Exogenous noise laws."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

# (value, probability) atoms of a finite law
Atoms = List[Tuple[float, Fraction]]


def _as_fraction(value: float) -> Fraction:
    """Exact rational for a user-supplied probability (0.5 -> 1/2, 0.1 -> 1/10)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(repr(float(value)))


class NoiseLaw(ABC):
    """Abstract base class for the law of an exogenous noise variable."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """
        Draw ``n`` independent values.

        Args:
            rng: Generator of the noise's own substream
            n: Number of units

        Returns:
            Float array of shape (n,)
        """

    def atoms(self) -> Optional[Atoms]:
        """
        Finite support with exact probabilities, or None for continuous laws.

        Returns:
            List of (value, probability) pairs summing to exactly 1
        """
        return None

    @property
    def is_finite(self) -> bool:
        return self.atoms() is not None

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Serialize to the JSON noise schema."""


@dataclass(frozen=True)
class Normal(NoiseLaw):
    """Gaussian law parameterized by mean and variance."""

    mean: float = 0.0
    variance: float = 1.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean):
            raise ValueError(f"Normal mean must be finite, got {self.mean}")
        if not self.variance >= 0:
            raise ValueError(f"Normal variance must be >= 0, got {self.variance}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.mean + math.sqrt(self.variance) * rng.standard_normal(n)

    def to_dict(self) -> Dict[str, Any]:
        return {"law": "normal", "mean": self.mean, "variance": self.variance}


@dataclass(frozen=True)
class Bernoulli(NoiseLaw):
    """Bernoulli law on {0, 1}."""

    p: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Bernoulli p must lie in [0, 1], got {self.p}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return (rng.random(n) < self.p).astype(float)

    def atoms(self) -> Optional[Atoms]:
        p = _as_fraction(self.p)
        return [(value, prob) for value, prob in ((0.0, 1 - p), (1.0, p)) if prob > 0]

    def to_dict(self) -> Dict[str, Any]:
        return {"law": "bernoulli", "p": self.p}


@dataclass(frozen=True)
class DiscreteUniform(NoiseLaw):
    """Uniform law over a finite list of reals."""

    support: Tuple[float, ...] = (0.0,)

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.support)
        if not values:
            raise ValueError("DiscreteUniform support must be non-empty")
        if len(set(values)) != len(values):
            raise ValueError(f"DiscreteUniform support has duplicates: {list(values)}")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("DiscreteUniform support must be finite reals")
        object.__setattr__(self, "support", values)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.asarray(self.support, dtype=float)[rng.integers(0, len(self.support), n)]

    def atoms(self) -> Optional[Atoms]:
        weight = Fraction(1, len(self.support))
        return [(value, weight) for value in self.support]

    def to_dict(self) -> Dict[str, Any]:
        return {"law": "discrete_uniform", "support": list(self.support)}


@dataclass(frozen=True)
class PointMass(NoiseLaw):
    """Degenerate law at a single value."""

    value: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"PointMass value must be finite, got {self.value}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, float(self.value))

    def atoms(self) -> Optional[Atoms]:
        return [(float(self.value), Fraction(1))]

    def to_dict(self) -> Dict[str, Any]:
        return {"law": "point_mass", "value": self.value}


@dataclass(frozen=True)
class NoiseSpec:
    """A named exogenous noise variable and its law."""

    name: str
    law: NoiseLaw

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("Noise name must be non-empty")


LAWS = {
    "normal": Normal,
    "bernoulli": Bernoulli,
    "discrete_uniform": DiscreteUniform,
    "point_mass": PointMass,
}


def law_from_dict(spec: Dict[str, Any]) -> NoiseLaw:
    """
    Build a noise law from its JSON form.

    Args:
        spec: Mapping with a ``law`` key and the law's parameters

    Returns:
        NoiseLaw instance

    Raises:
        ValueError: If the law name is unknown or parameters are invalid
    """
    params = dict(spec)
    name = params.pop("law", None)
    if name not in LAWS:
        raise ValueError(f"Unknown noise law: {name}. Supported laws: {', '.join(LAWS)}")
    if name == "discrete_uniform" and "support" in params:
        params["support"] = tuple(params["support"])
    try:
        return LAWS[name](**params)
    except TypeError as e:
        raise ValueError(f"Invalid parameters for noise law {name}: {e}") from e
