# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Structural mechanisms: f(parents, noise) and its inverse in the noise term."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

ForwardFn = Callable[[Sequence[np.ndarray], np.ndarray], np.ndarray]
InverseFn = Callable[[np.ndarray, Sequence[np.ndarray]], np.ndarray]


class Mechanism(ABC):
    """Abstract base class for a structural mechanism."""

    @abstractmethod
    def evaluate(self, parents: Sequence[np.ndarray], noise: np.ndarray) -> np.ndarray:
        """
        Compute the variable from its parents and its noise.

        Args:
            parents: Parent value arrays, in the equation's parent order
            noise: Noise value array

        Returns:
            Value array of the same shape as ``noise``
        """

    @property
    def invertible(self) -> bool:
        return False

    def invert(self, value: np.ndarray, parents: Sequence[np.ndarray]) -> np.ndarray:
        """
        Recover the noise that produced ``value`` given the parents.

        Raises:
            ValueError: If the mechanism is not invertible in its noise term
        """
        raise ValueError("abduction requires invertible mechanisms")


@dataclass(frozen=True)
class AdditiveLinear(Mechanism):
    """``sum(c_j * parent_j) + noise``, invertible in the noise term."""

    coefficients: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    def _linear_part(self, parents: Sequence[np.ndarray], like: np.ndarray) -> np.ndarray:
        if len(parents) != len(self.coefficients):
            raise ValueError(
                f"AdditiveLinear expects {len(self.coefficients)} parents, got {len(parents)}"
            )
        total = np.zeros(like.shape, dtype=float)
        for coefficient, parent in zip(self.coefficients, parents):
            total = total + coefficient * np.asarray(parent, dtype=float)
        return total

    def evaluate(self, parents: Sequence[np.ndarray], noise: np.ndarray) -> np.ndarray:
        noise = np.asarray(noise, dtype=float)
        return self._linear_part(parents, noise) + noise

    @property
    def invertible(self) -> bool:
        return True

    def invert(self, value: np.ndarray, parents: Sequence[np.ndarray]) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        return value - self._linear_part(parents, value)


@dataclass(frozen=True)
class InvertibleFunction(Mechanism):
    """
    User-supplied mechanism.

    ``forward(parents, noise)`` computes the value; ``inverse(value, parents)``
    recovers the noise. Without an inverse the mechanism can be sampled and
    intervened on but not used for abduction.
    """

    forward: ForwardFn
    inverse: Optional[InverseFn] = None

    def evaluate(self, parents: Sequence[np.ndarray], noise: np.ndarray) -> np.ndarray:
        return np.asarray(self.forward(parents, np.asarray(noise, dtype=float)), dtype=float)

    @property
    def invertible(self) -> bool:
        return self.inverse is not None

    def invert(self, value: np.ndarray, parents: Sequence[np.ndarray]) -> np.ndarray:
        if self.inverse is None:
            raise ValueError("abduction requires invertible mechanisms")
        return np.asarray(self.inverse(np.asarray(value, dtype=float), parents), dtype=float)


@dataclass(frozen=True)
class ShiftedMechanism(Mechanism):
    """A base mechanism plus a per-unit additive offset."""

    base: Mechanism
    offsets: Tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "offsets", tuple(float(o) for o in self.offsets))

    def _offsets_for(self, like: np.ndarray) -> np.ndarray:
        offsets = np.asarray(self.offsets, dtype=float)
        if offsets.shape != like.shape:
            raise ValueError(
                f"Shift has {offsets.size} offsets but is applied to {like.size} units"
            )
        return offsets

    def evaluate(self, parents: Sequence[np.ndarray], noise: np.ndarray) -> np.ndarray:
        value = self.base.evaluate(parents, noise)
        return value + self._offsets_for(value)

    @property
    def invertible(self) -> bool:
        return self.base.invertible

    def invert(self, value: np.ndarray, parents: Sequence[np.ndarray]) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        return self.base.invert(value - self._offsets_for(value), parents)
