# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Sampling, abduction and counterfactual prediction."""

import logging
from typing import AbstractSet, Dict, Mapping, Optional

import numpy as np

from dnscm.rng import substream
from dnscm.scm.interventions import Intervention, Shift, apply_intervention
from dnscm.scm.model import NoisePosterior, Sample, Scm
from dnscm.scm.noise import PointMass

logger = logging.getLogger(__name__)


def simulate(scm: Scm, noise: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
    """
    Evaluate every equation in topological order.

    Args:
        scm: Model to evaluate
        noise: Noise name -> value array for every noise of ``scm``

    Returns:
        Variable name -> value array
    """
    values: Dict[str, np.ndarray] = {}
    for variable in scm.order:
        equation = scm.equation(variable)
        values[variable] = equation.mechanism.evaluate(
            [values[parent] for parent in equation.parents], noise[equation.noise]
        )
    return values


def sample_observational(scm: Scm, n: int, seed: int) -> Sample:
    """
    Draw ``n`` units from the observational distribution.

    Each noise is drawn from its own substream of ``seed``, so the output is a
    pure function of ``(scm, n, seed)``.

    Args:
        scm: Model to sample
        n: Number of units (>= 1)
        seed: Master seed

    Returns:
        Sample with the realized noise record attached
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    noise = {spec.name: spec.law.sample(substream(seed, "noise", spec.name), n) for spec in scm.noises}
    return Sample(n=n, values=simulate(scm, noise), noise=noise)


def abduct(scm: Scm, sample: Sample) -> NoisePosterior:
    """
    Recover each unit's noise from its observed values.

    Only full conditioning on every variable is supported; every mechanism must
    be invertible in its noise term, so the posterior is a point mass per unit.

    Raises:
        ValueError: If a variable is unobserved or a mechanism is not invertible
    """
    sample.require_variables(scm.variables)
    posterior: Dict[str, np.ndarray] = {}
    for variable in scm.order:
        equation = scm.equation(variable)
        if not equation.mechanism.invertible:
            raise ValueError(
                f"abduction requires invertible mechanisms (variable {variable} is not)"
            )
        posterior[equation.noise] = equation.mechanism.invert(
            sample[variable], [sample[parent] for parent in equation.parents]
        )
    return NoisePosterior(posterior)


def _predict(
    scm: Scm,
    base: Sample,
    intervention: Intervention,
    posterior: Optional[NoisePosterior],
    resample: AbstractSet[str],
    seed: Optional[int],
) -> Sample:
    if isinstance(intervention, Shift) and len(intervention.offsets) != base.n:
        raise ValueError(
            f"Shift on {intervention.variable} has {len(intervention.offsets)} offsets "
            f"for a sample of {base.n} units"
        )
    intervened = apply_intervention(scm, intervention)
    introduced = set(intervened.noise_names) - set(scm.noise_names)

    noise: Dict[str, np.ndarray] = {}
    for spec in intervened.noises:
        if spec.name in resample:
            assert seed is not None
            noise[spec.name] = spec.law.sample(substream(seed, "noise", spec.name), base.n)
        elif posterior is not None and spec.name in posterior:
            noise[spec.name] = np.asarray(posterior[spec.name])
        elif isinstance(spec.law, PointMass):
            noise[spec.name] = np.full(base.n, float(spec.law.value))
        elif spec.name in introduced and seed is not None:
            # New noise from a replacement has no posterior; it comes from the prior
            noise[spec.name] = spec.law.sample(substream(seed, "noise", spec.name), base.n)
        elif spec.name in introduced:
            raise ValueError(
                f"Noise {spec.name} is introduced by the intervention and has no posterior "
                "value; use interventional_sample with a seed to draw it from its prior"
            )
        else:
            raise ValueError(f"Noise {spec.name} has no posterior value")

    values: Dict[str, np.ndarray] = {}
    for variable in intervened.order:
        equation = intervened.equation(variable)
        computed = equation.mechanism.evaluate(
            [values[parent] for parent in equation.parents], noise[equation.noise]
        )
        # Unchanged mechanism, abducted noise and unchanged parents: keep the factual value
        if equation == scm.equation(variable) and equation.noise not in resample:
            unchanged = np.ones(base.n, dtype=bool)
            for parent in equation.parents:
                unchanged &= values[parent] == base[parent]
            computed = np.where(unchanged, base[variable], computed)
        values[variable] = computed
    return Sample(n=base.n, values=values, noise=noise)


def counterfactual_sample(scm: Scm, sample: Sample, intervention: Intervention) -> Sample:
    """
    Abduction, action, prediction.

    Noise is abducted from ``sample``, the intervention is applied, and the
    posterior noise is pushed through the intervened model. The result is
    deterministic given the observed sample.

    Args:
        scm: Model that generated the sample
        sample: Observed units (all variables observed)
        intervention: Intervention to apply

    Returns:
        Counterfactual values for every unit

    Raises:
        ValueError: Propagated from :func:`abduct`, for an unknown target, or
            when the intervention introduces a noise with no point-mass law
    """
    posterior = abduct(scm, sample)
    return _predict(scm, sample, intervention, posterior, frozenset(), None)


def interventional_sample(
    scm: Scm,
    base: Sample,
    intervention: Intervention,
    resample: AbstractSet[str],
    seed: int,
) -> Sample:
    """
    Intervene with a chosen subset of noises drawn fresh from their priors.

    Noises named in ``resample`` come from their prior (seeded substreams);
    every other noise keeps its value abducted from ``base``. A noise that only
    exists in the intervened model (a :class:`Replace` with a new noise term)
    has no posterior and is always drawn from its prior. An empty
    ``resample`` reproduces :func:`counterfactual_sample`; resampling every
    noise under a null intervention is a fresh observational draw.

    Args:
        scm: Model that generated ``base``
        base: Observed units
        intervention: Intervention to apply
        resample: Names of noises to draw from the prior
        seed: Master seed for the resampled noises

    Returns:
        Interventional values for every unit

    Raises:
        ValueError: For unknown noise names, or propagated from :func:`abduct`
    """
    resample = frozenset(resample)
    known = list(scm.noise_names)
    known += [name for name in apply_intervention(scm, intervention).noise_names if name not in known]
    unknown = sorted(resample - set(known))
    if unknown:
        raise ValueError(f"Unknown noise: {', '.join(unknown)}. Noises: {', '.join(known)}")
    posterior = None
    if not resample >= set(scm.noise_names):
        posterior = abduct(scm, base)
    logger.debug("Interventional sample of %d units, resampling %s", base.n, sorted(resample))
    return _predict(scm, base, intervention, posterior, resample, seed)
