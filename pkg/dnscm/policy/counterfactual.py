# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Counterfactual treatment choice: unit-level assignments on the observed sample."""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from dnscm.distributions import StepCdf, mixture_of_pointmasses
from dnscm.policy.base import Budget, OptimizerResult, TreatmentTemplate, UnitAssignment
from dnscm.scm import Sample, Scm, counterfactual_sample
from dnscm.welfare import WelfareValue, welfare_functional

logger = logging.getLogger(__name__)

CF_MODES = ("exhaustive", "greedy")
MAX_EXHAUSTIVE_ASSIGNMENTS = 10_000_000
CHUNK_SIZE = 4096


@dataclass(frozen=True)
class PotentialOutcomes:
    """Per-unit outcomes under the control and treated interventions."""

    y0: np.ndarray
    y1: np.ndarray

    def __len__(self) -> int:
        return int(self.y0.shape[0])

    def under(self, w: Union[UnitAssignment, Sequence[int]]) -> np.ndarray:
        mask = w.mask if isinstance(w, UnitAssignment) else np.asarray(w, dtype=bool)
        if mask.shape[0] != len(self):
            raise ValueError(f"Assignment has {mask.shape[0]} entries for {len(self)} units")
        return np.where(mask, self.y1, self.y0)

    def treating(self, treated: Sequence[int]) -> np.ndarray:
        outcomes = self.y0.copy()
        index = list(treated)
        outcomes[index] = self.y1[index]
        return outcomes


def potential_outcomes(
    scm: Scm,
    sample: Sample,
    template: TreatmentTemplate = TreatmentTemplate(),
    outcome: str = "Y",
) -> PotentialOutcomes:
    """
    Counterfactual outcome of every unit with and without treatment.

    Raises:
        ValueError: Propagated from abduction
    """
    control, treated = template.interventions(sample.n)
    return PotentialOutcomes(
        y0=np.array(counterfactual_sample(scm, sample, control)[outcome]),
        y1=np.array(counterfactual_sample(scm, sample, treated)[outcome]),
    )


def cf_post_treatment_cdf(
    scm: Scm,
    sample: Sample,
    w: UnitAssignment,
    template: TreatmentTemplate = TreatmentTemplate(),
    outcome: str = "Y",
) -> StepCdf:
    """
    Sample-average counterfactual CDF under a unit assignment.

    Each unit contributes a point mass at its counterfactual outcome under
    ``w``, weighted 1/n.

    Raises:
        ValueError: If ``w`` does not match the sample size, or from abduction
    """
    if len(w) != sample.n:
        raise ValueError(f"Assignment has {len(w)} entries for a sample of {sample.n} units")
    return mixture_of_pointmasses(potential_outcomes(scm, sample, template, outcome).under(w).tolist())


def _evaluate(outcomes: PotentialOutcomes, treated: Sequence[int], welfare: str) -> WelfareValue:
    return welfare_functional(welfare, mixture_of_pointmasses(outcomes.treating(treated).tolist()))


def _chunks(n: int, max_treated: int) -> Iterator[List[Tuple[int, ...]]]:
    """Treated index sets, fewest units first, lexicographic within each size."""
    for size in range(max_treated + 1):
        combos = itertools.combinations(range(n), size)
        while True:
            chunk = list(itertools.islice(combos, CHUNK_SIZE))
            if not chunk:
                break
            yield chunk


def _best_in_chunk(
    outcomes: PotentialOutcomes, chunk: List[Tuple[int, ...]], welfare: str
) -> Tuple[Tuple[int, ...], WelfareValue]:
    best_set = chunk[0]
    best_value = _evaluate(outcomes, best_set, welfare)
    for treated in chunk[1:]:
        value = _evaluate(outcomes, treated, welfare)
        if value.beats(best_value):
            best_set, best_value = treated, value
    return best_set, best_value


def count_assignments(n: int, max_treated: int) -> int:
    """Number of assignments of ``n`` units treating at most ``max_treated``."""
    return sum(math.comb(n, k) for k in range(max_treated + 1))


def _exhaustive(
    outcomes: PotentialOutcomes, max_treated: int, welfare: str, threads: int
) -> Tuple[Tuple[int, ...], WelfareValue]:
    chunks = _chunks(len(outcomes), max_treated)
    best: Optional[Tuple[Tuple[int, ...], WelfareValue]] = None
    # Chunks are reduced in enumeration order, so ties keep the earliest set
    with ThreadPoolExecutor(max_workers=threads) as executor:
        while True:
            window = list(itertools.islice(chunks, threads * 4))
            if not window:
                break
            for candidate in executor.map(lambda c: _best_in_chunk(outcomes, c, welfare), window):
                if best is None or candidate[1].beats(best[1]):
                    best = candidate
    assert best is not None
    return best


def _greedy(
    outcomes: PotentialOutcomes, max_treated: int, welfare: str
) -> Tuple[Tuple[int, ...], WelfareValue, int]:
    treated: List[int] = []
    current = _evaluate(outcomes, treated, welfare)
    evaluated = 1
    for _ in range(max_treated):
        best_unit = None
        best_value = None
        for unit in range(len(outcomes)):
            if unit in treated:
                continue
            value = _evaluate(outcomes, sorted(treated + [unit]), welfare)
            evaluated += 1
            if best_value is None or value.beats(best_value):
                best_unit, best_value = unit, value
        if best_unit is None or best_value is None or not best_value.beats(current):
            break
        treated.append(best_unit)
        current = best_value
        logger.debug("Greedy step treats unit %d, welfare %s", best_unit, current.value)
    return tuple(sorted(treated)), current, evaluated


def cf_optimize(
    scm: Scm,
    sample: Sample,
    budget: Budget,
    welfare: str = "gini",
    template: TreatmentTemplate = TreatmentTemplate(),
    outcome: str = "Y",
    mode: str = "exhaustive",
    threads: int = 1,
) -> OptimizerResult:
    """
    Best unit assignment treating at most ``budget.max_treated`` units.

    ``exhaustive`` scans every feasible assignment and returns a global
    optimum; among equal-welfare assignments it keeps the one with the
    fewest treated units, then the lexicographically smallest index set.
    This is not the lexicographically least 0/1 vector: for tied sets
    ``{0, 2}`` and ``{1, 3}`` it returns ``(1, 0, 1, 0)``, not
    ``(0, 1, 0, 1)``, so a tie always goes to the smaller intervention first.
    ``greedy`` is a heuristic: it adds the unit with the largest welfare gain
    (lowest index on ties) until the budget is spent or no unit improves
    welfare.

    Args:
        scm: Model that generated the sample
        sample: Observed units (the population being treated)
        budget: Treatment budget
        welfare: Welfare functional name
        template: Treated/control interventions
        outcome: Outcome variable
        mode: ``exhaustive`` or ``greedy``
        threads: Worker threads for exhaustive search (result does not depend on it)

    Returns:
        OptimizerResult

    Raises:
        ValueError: For an unknown mode, a budget above n, or an exhaustive
            search larger than the guard
    """
    if mode not in CF_MODES:
        raise ValueError(f"Unknown optimizer mode: {mode}. Supported modes: {', '.join(CF_MODES)}")
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")
    budget.check(sample.n)
    outcomes = potential_outcomes(scm, sample, template, outcome)

    if mode == "exhaustive":
        total = count_assignments(sample.n, budget.max_treated)
        if total > MAX_EXHAUSTIVE_ASSIGNMENTS:
            raise ValueError(
                f"Exhaustive search over {total} assignments exceeds the limit of "
                f"{MAX_EXHAUSTIVE_ASSIGNMENTS}; use mode='greedy'"
            )
        logger.info("Exhaustive CF search over %d assignments", total)
        treated, value = _exhaustive(outcomes, budget.max_treated, welfare, threads)
        evaluated = total
    else:
        treated, value, evaluated = _greedy(outcomes, budget.max_treated, welfare)

    assignment = UnitAssignment.from_indices(sample.n, treated)
    logger.info("CF %s optimum %s with %s welfare %s", mode, list(assignment.w), welfare, value.value)
    return OptimizerResult(
        assignment=assignment,
        welfare=value,
        mode=mode,
        budget=budget.max_treated,
        welfare_functional=welfare,
        evaluated=evaluated,
    )
