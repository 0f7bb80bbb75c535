# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Structural causal models: definition, sampling, interventions, counterfactuals."""

from dnscm.scm.catalog import equality_example_sample, equality_example_scm, outcome_scm
from dnscm.scm.inference import (
    abduct,
    counterfactual_sample,
    interventional_sample,
    sample_observational,
    simulate,
)
from dnscm.scm.interventions import Atomic, Intervention, Replace, Shift, apply_intervention
from dnscm.scm.loader import load_scm, scm_from_dict, scm_to_dict
from dnscm.scm.mechanisms import (
    AdditiveLinear,
    InvertibleFunction,
    Mechanism,
    ShiftedMechanism,
)
from dnscm.scm.model import NoisePosterior, Sample, Scm, StructuralEquation
from dnscm.scm.noise import (
    Bernoulli,
    DiscreteUniform,
    NoiseLaw,
    NoiseSpec,
    Normal,
    PointMass,
)

__all__ = [
    "AdditiveLinear",
    "Atomic",
    "Bernoulli",
    "DiscreteUniform",
    "Intervention",
    "InvertibleFunction",
    "Mechanism",
    "NoiseLaw",
    "NoisePosterior",
    "NoiseSpec",
    "Normal",
    "PointMass",
    "Replace",
    "Sample",
    "Scm",
    "Shift",
    "ShiftedMechanism",
    "StructuralEquation",
    "abduct",
    "apply_intervention",
    "counterfactual_sample",
    "equality_example_sample",
    "equality_example_scm",
    "interventional_sample",
    "load_scm",
    "outcome_scm",
    "sample_observational",
    "scm_from_dict",
    "scm_to_dict",
    "simulate",
]
