# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Treatment rules, budgets and optimizer results."""

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np

from dnscm.scm import Atomic, Intervention, Sample, Shift
from dnscm.welfare import WelfareValue

TREATMENT_KINDS = ("atomic", "shift")


def _format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


@dataclass(frozen=True)
class DecisionSetPolicy:
    """
    Covariate-based treatment rule: treat every unit whose covariate is in ``decision_set``.

    Attributes:
        decision_set: Covariate values that receive treatment
        label: Display name (default ``G_∅``, ``G_0``, ``G_{0,1}``, ...)
    """

    decision_set: FrozenSet[float]
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "decision_set", frozenset(float(x) for x in self.decision_set))
        if not self.label:
            values = [_format_value(x) for x in sorted(self.decision_set)]
            if not values:
                label = "G_∅"
            elif len(values) == 1:
                label = f"G_{values[0]}"
            else:
                label = "G_{" + ",".join(values) + "}"
            object.__setattr__(self, "label", label)

    def treats(self, covariate: np.ndarray) -> np.ndarray:
        """Boolean treatment mask for an array of covariate values."""
        return np.isin(np.asarray(covariate, dtype=float), sorted(self.decision_set))


@dataclass(frozen=True)
class UnitAssignment:
    """Binary treatment vector, one entry per unit of a sample."""

    w: Tuple[int, ...]

    def __post_init__(self) -> None:
        w = tuple(int(wi) for wi in self.w)
        if any(wi not in (0, 1) for wi in w):
            raise ValueError(f"Assignments must be binary, got {list(self.w)}")
        object.__setattr__(self, "w", w)

    @classmethod
    def from_indices(cls, n: int, treated: Iterable[int]) -> "UnitAssignment":
        w = [0] * n
        for i in treated:
            if not 0 <= i < n:
                raise ValueError(f"Unit index {i} out of range for {n} units")
            w[i] = 1
        return cls(tuple(w))

    @classmethod
    def none(cls, n: int) -> "UnitAssignment":
        return cls((0,) * n)

    def __len__(self) -> int:
        return len(self.w)

    @property
    def treated(self) -> int:
        return sum(self.w)

    @property
    def mask(self) -> np.ndarray:
        return np.asarray(self.w, dtype=bool)


@dataclass(frozen=True)
class Budget:
    """At most ``max_treated`` units may be treated."""

    max_treated: int

    def __post_init__(self) -> None:
        if self.max_treated < 0:
            raise ValueError(f"Budget must be nonnegative, got {self.max_treated}")

    def check(self, n: int) -> None:
        if self.max_treated > n:
            raise ValueError(f"Budget {self.max_treated} exceeds the sample size {n}")

    def allows(self, assignment: UnitAssignment) -> bool:
        return assignment.treated <= self.max_treated


@dataclass(frozen=True)
class TreatmentTemplate:
    """
    How "treated" and "untreated" translate into interventions.

    ``atomic`` sets the variable to ``treated_value`` / ``control_value``;
    ``shift`` adds ``treated_value`` to the mechanism of treated units and
    leaves untreated units alone.
    """

    variable: str = "Z"
    kind: str = "atomic"
    treated_value: float = 1.0
    control_value: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in TREATMENT_KINDS:
            raise ValueError(
                f"Unknown treatment kind: {self.kind}. Supported kinds: {', '.join(TREATMENT_KINDS)}"
            )

    def interventions(self, n: int) -> Tuple[Intervention, Intervention]:
        """
        The (control, treated) interventions for ``n`` units.

        Returns:
            Pair of interventions applied to every unit
        """
        if self.kind == "atomic":
            return (
                Atomic(self.variable, self.control_value),
                Atomic(self.variable, self.treated_value),
            )
        return (
            Shift(self.variable, (0.0,) * n),
            Shift(self.variable, (float(self.treated_value),) * n),
        )


@dataclass(frozen=True)
class OptimizerResult:
    """Best unit assignment found by a counterfactual optimizer."""

    assignment: UnitAssignment
    welfare: WelfareValue
    mode: str
    budget: int
    welfare_functional: str
    evaluated: int = 0

    def to_dict(self) -> Dict[str, Any]:
        """JSON-serializable summary."""
        return {
            "assignment": list(self.assignment.w),
            "welfare_exact": None if self.welfare.exact is None else str(self.welfare.exact),
            "welfare_float": self.welfare.approx,
            "mode": self.mode,
            "budget": self.budget,
            "welfare_functional": self.welfare_functional,
        }


def observed_domain(sample: Sample, covariate: str) -> Tuple[float, ...]:
    """Sorted distinct covariate values observed in the sample."""
    return tuple(float(x) for x in np.unique(sample[covariate]))


def decision_set_assignment(
    sample: Sample, covariate: str, g: DecisionSetPolicy
) -> UnitAssignment:
    """Unit assignment a decision set induces on a sample."""
    return UnitAssignment(tuple(int(t) for t in g.treats(sample[covariate])))


def all_decision_sets(values: Sequence[float], max_size: Optional[int] = None) -> Tuple[DecisionSetPolicy, ...]:
    """
    Every decision set over ``values``, smallest first.

    Args:
        values: Covariate domain
        max_size: Largest decision set to include (default: all)
    """
    domain = sorted(set(float(v) for v in values))
    largest = len(domain) if max_size is None else min(max_size, len(domain))
    return tuple(
        DecisionSetPolicy(frozenset(subset))
        for size in range(largest + 1)
        for subset in combinations(domain, size)
    )
