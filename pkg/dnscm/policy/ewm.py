# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Empirical welfare maximization over covariate decision sets."""

import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from dnscm.distributions import StepCdf, mixture_of_pointmasses
from dnscm.policy.base import DecisionSetPolicy, TreatmentTemplate, observed_domain
from dnscm.scm import (
    Intervention,
    PointMass,
    Sample,
    Scm,
    apply_intervention,
    interventional_sample,
    sample_observational,
    simulate,
)
from dnscm.welfare import WelfareValue, welfare_functional

logger = logging.getLogger(__name__)

EWM_METHODS = ("exact", "monte_carlo")
MAX_ENUMERATED_ATOMS = 1_000_000


def _check_covariate(scm: Scm, template: TreatmentTemplate, covariate: str, outcome: str) -> None:
    scm.require_variable(covariate)
    scm.require_variable(outcome)
    scm.require_variable(template.variable)
    if covariate == template.variable or covariate in scm.descendants(template.variable):
        raise ValueError(
            f"Covariate {covariate} must not be affected by the treatment variable {template.variable}"
        )
    for variable in {covariate} | scm.ancestors(covariate):
        if not scm.noise_for(variable).law.is_finite:
            raise ValueError(
                f"EWM needs a finite covariate space, but {covariate} depends on the "
                f"continuous noise {scm.equation(variable).noise}"
            )


def _enumerate_noise(scm: Scm) -> Tuple[Dict[str, np.ndarray], List[Fraction]]:
    """Every combination of noise atoms with its exact probability."""
    names = list(scm.noise_names)
    atom_lists = []
    for spec in scm.noises:
        atoms = spec.law.atoms()
        if atoms is None:
            raise ValueError(
                f"Exact EWM needs finite noise laws, but {spec.name} is continuous; "
                "use method='monte_carlo'"
            )
        atom_lists.append(atoms)
    size = math.prod(len(atoms) for atoms in atom_lists)
    if size > MAX_ENUMERATED_ATOMS:
        raise ValueError(
            f"Exact EWM would enumerate {size} noise combinations; use method='monte_carlo'"
        )
    combos = list(itertools.product(*atom_lists))
    noise = {
        name: np.array([combo[j][0] for combo in combos], dtype=float)
        for j, name in enumerate(names)
    }
    probabilities = [math.prod((atom[1] for atom in combo), start=Fraction(1)) for combo in combos]
    return noise, probabilities


def _simulate_under(
    scm: Scm, intervention: Intervention, noise: Dict[str, np.ndarray], size: int
) -> Dict[str, np.ndarray]:
    intervened = apply_intervention(scm, intervention)
    full = dict(noise)
    for spec in intervened.noises:
        if spec.name not in full:
            assert isinstance(spec.law, PointMass)
            full[spec.name] = np.full(size, float(spec.law.value))
    return simulate(intervened, full)


def ewm_post_treatment_cdf(
    scm: Scm,
    sample: Sample,
    g: DecisionSetPolicy,
    template: TreatmentTemplate = TreatmentTemplate(),
    covariate: str = "X",
    outcome: str = "Y",
    method: str = "exact",
    draws: int = 100_000,
    seed: int = 0,
) -> StepCdf:
    """
    Population post-treatment CDF of the outcome under a decision set.

    Units with covariate in ``g`` follow the treated intervention and all
    others the control intervention; the mixture is weighted by the
    covariate's marginal law under ``scm``.

    Args:
        scm: Known model of the population
        sample: Observed units; ``g`` must only contain observed covariate values
        g: Decision set
        template: Treated/control interventions
        covariate: Variable the decision set is defined on
        outcome: Outcome variable
        method: ``exact`` (enumerate every noise atom) or ``monte_carlo``
        draws: Monte Carlo draws
        seed: Monte Carlo seed

    Returns:
        StepCdf of the post-treatment outcome

    Raises:
        ValueError: If the covariate space is not finite, ``g`` holds
            unobserved values, or exact enumeration is impossible
    """
    if method not in EWM_METHODS:
        raise ValueError(f"Unknown EWM method: {method}. Supported methods: {', '.join(EWM_METHODS)}")
    _check_covariate(scm, template, covariate, outcome)
    unobserved = sorted(g.decision_set - set(observed_domain(sample, covariate)))
    if unobserved:
        raise ValueError(
            f"Decision set {g.label} contains values not observed for {covariate}: {unobserved}"
        )

    if method == "exact":
        noise, probabilities = _enumerate_noise(scm)
        size = len(probabilities)
        control, treated = template.interventions(size)
        untreated_values = _simulate_under(scm, control, noise, size)
        treated_values = _simulate_under(scm, treated, noise, size)
        mask = g.treats(untreated_values[covariate])
        outcomes = np.where(mask, treated_values[outcome], untreated_values[outcome])
        return StepCdf.from_pmf(zip(outcomes.tolist(), probabilities))

    if draws < 1:
        raise ValueError(f"draws must be at least 1, got {draws}")
    logger.debug("Monte Carlo EWM CDF for %s with %d draws", g.label, draws)
    base = sample_observational(scm, draws, seed)
    control, treated = template.interventions(draws)
    every_noise = frozenset(scm.noise_names)
    untreated = interventional_sample(scm, base, control, every_noise, seed)
    treated_sample = interventional_sample(scm, base, treated, every_noise, seed)
    mask = g.treats(base[covariate])
    return mixture_of_pointmasses(np.where(mask, treated_sample[outcome], untreated[outcome]).tolist())


def ewm_optimize(
    scm: Scm,
    sample: Sample,
    feasible: Sequence[DecisionSetPolicy],
    welfare: str = "gini",
    template: TreatmentTemplate = TreatmentTemplate(),
    covariate: str = "X",
    outcome: str = "Y",
    method: str = "exact",
    draws: int = 100_000,
    seed: int = 0,
) -> Tuple[DecisionSetPolicy, WelfareValue]:
    """
    Decision set with the highest welfare.

    Ties go to the earliest policy in ``feasible``.

    Raises:
        ValueError: If ``feasible`` is empty
    """
    if not feasible:
        raise ValueError("ewm_optimize needs at least one feasible decision set")
    best_policy = None
    best_value = None
    for policy in feasible:
        cdf = ewm_post_treatment_cdf(
            scm, sample, policy, template, covariate, outcome, method, draws, seed
        )
        value = welfare_functional(welfare, cdf)
        logger.debug("W(%s) = %s", policy.label, value.value)
        if best_value is None or value.beats(best_value):
            best_policy, best_value = policy, value
    assert best_policy is not None and best_value is not None
    logger.info("EWM optimum %s with %s welfare %s", best_policy.label, welfare, best_value.value)
    return best_policy, best_value
