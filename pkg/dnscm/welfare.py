# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Social welfare functionals over outcome distributions."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np

from dnscm.distributions import EmpiricalDist, StepCdf, ecdf

logger = logging.getLogger(__name__)

Outcomes = Union[StepCdf, EmpiricalDist]


@dataclass(frozen=True)
class WelfareValue:
    """
    Welfare of an outcome distribution.

    Attributes:
        exact: Rational value, present when the input had rational weights
        approx: Floating point value (equal to ``exact`` when that is present)
    """

    exact: Optional[Fraction]
    approx: float

    @classmethod
    def from_exact(cls, value: Fraction) -> "WelfareValue":
        return cls(exact=value, approx=float(value))

    @property
    def value(self) -> Union[Fraction, float]:
        return self.exact if self.exact is not None else self.approx

    def beats(self, other: "WelfareValue") -> bool:
        """Strictly greater, compared exactly when both sides are exact."""
        return self.value > other.value


def _check_nonnegative(support: Sequence[float]) -> None:
    if support and min(support) < 0:
        raise ValueError(
            f"Gini integral defined on [0,∞); got support down to {min(support)}. "
            "Shift outcomes to be nonnegative first"
        )


def gini_welfare(cdf: StepCdf) -> WelfareValue:
    """
    Gini social welfare ``∫_0^∞ (1 - P(y))² dy`` of a step CDF.

    Below the first jump the integrand is 1; between jumps it is constant at
    ``(1 - cum_j)²``; after the last jump it is 0. Support points are exact
    binary floats, so the result is an exact rational.

    Raises:
        ValueError: If the support contains negative values
    """
    _check_nonnegative(cdf.support)
    points = [Fraction(y) for y in cdf.support]
    total = points[0]
    for j in range(len(points) - 1):
        total += (1 - cdf.cum[j]) ** 2 * (points[j + 1] - points[j])
    return WelfareValue.from_exact(total)


def rank_weighted_gini(outcomes: Sequence[float]) -> Fraction:
    """
    Gini welfare of the uniform mixture of ``outcomes`` in rank-weighted form.

    ``sum_i x_(i) * ((n - i + 1)² - (n - i)²) / n²`` over the sorted values;
    an independent route to :func:`gini_welfare`.
    """
    ordered = sorted(Fraction(float(x)) for x in outcomes)
    if not ordered:
        raise ValueError("rank_weighted_gini needs at least one outcome")
    _check_nonnegative([float(x) for x in ordered])
    n = len(ordered)
    total = sum(
        (x * ((n - i + 1) ** 2 - (n - i) ** 2) for i, x in enumerate(ordered, start=1)),
        Fraction(0),
    )
    return total / n**2


def mean_welfare(outcomes: Outcomes) -> WelfareValue:
    if isinstance(outcomes, StepCdf):
        return WelfareValue.from_exact(
            sum((Fraction(y) * mass for y, mass in outcomes.pmf().items()), Fraction(0))
        )
    return WelfareValue(exact=None, approx=float(np.mean(outcomes.samples)))


def neg_variance_welfare(outcomes: Outcomes) -> WelfareValue:
    if isinstance(outcomes, StepCdf):
        pmf = outcomes.pmf()
        first = sum((Fraction(y) * mass for y, mass in pmf.items()), Fraction(0))
        second = sum((Fraction(y) ** 2 * mass for y, mass in pmf.items()), Fraction(0))
        return WelfareValue.from_exact(-(second - first**2))
    return WelfareValue(exact=None, approx=-float(np.var(outcomes.samples)))


def _gini(outcomes: Outcomes) -> WelfareValue:
    if isinstance(outcomes, EmpiricalDist):
        outcomes = ecdf(outcomes)
    return gini_welfare(outcomes)


WELFARE_FUNCTIONALS: Dict[str, Callable[[Outcomes], WelfareValue]] = {
    "gini": _gini,
    "mean": mean_welfare,
    "neg_variance": neg_variance_welfare,
}


def welfare_functional(name: str, outcomes: Outcomes) -> WelfareValue:
    """
    Evaluate a named welfare functional.

    Args:
        name: One of ``gini``, ``mean`` or ``neg_variance``
        outcomes: Step CDF (exact result) or empirical sample

    Returns:
        WelfareValue

    Raises:
        ValueError: If the functional is unknown
    """
    if name not in WELFARE_FUNCTIONALS:
        raise ValueError(
            f"Unknown welfare functional: {name}. "
            f"Supported functionals: {', '.join(WELFARE_FUNCTIONALS)}"
        )
    return WELFARE_FUNCTIONALS[name](outcomes)


def format_fraction(value: Fraction, denominator: Optional[int] = None) -> str:
    """
    Render a welfare fraction, optionally over a fixed denominator.

    ``format_fraction(Fraction(14, 9), 36)`` gives ``"56/36"``;
    ``format_fraction(Fraction(2), 16)`` gives ``"32/16 = 2"``.
    """
    if denominator is None or (value * denominator).denominator != 1:
        return str(value)
    text = f"{(value * denominator).numerator}/{denominator}"
    if value.denominator == 1 and denominator != 1:
        text += f" = {value.numerator}"
    return text
