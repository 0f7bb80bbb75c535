# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Interventions: replacing structural mechanisms."""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from dnscm.scm.mechanisms import AdditiveLinear, ShiftedMechanism
from dnscm.scm.model import Scm, StructuralEquation
from dnscm.scm.noise import NoiseSpec, PointMass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atomic:
    """``do(variable = value)`` for every unit."""

    variable: str
    value: float

    @property
    def noise_name(self) -> str:
        return f"do({self.variable})"


@dataclass(frozen=True)
class Shift:
    """Add ``offsets[i]`` to the variable's mechanism for unit ``i``."""

    variable: str
    offsets: Tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "offsets", tuple(float(o) for o in self.offsets))

    @classmethod
    def treatment(cls, variable: str, delta: float, w: Sequence[int]) -> "Shift":
        """The shift ``delta * w(i)`` used for binary treatment assignments."""
        return cls(variable, tuple(delta * int(wi) for wi in w))

    @property
    def is_null(self) -> bool:
        return all(o == 0.0 for o in self.offsets)


@dataclass(frozen=True)
class Replace:
    """
    Swap in a new equation and noise for ``variable``.

    If ``noise.name`` equals the variable's current noise name, counterfactual
    prediction keeps that noise's abducted value.
    """

    variable: str
    equation: StructuralEquation
    noise: NoiseSpec

    def __post_init__(self) -> None:
        if self.equation.target != self.variable:
            raise ValueError(
                f"Replacement equation targets {self.equation.target}, expected {self.variable}"
            )
        if self.equation.noise != self.noise.name:
            raise ValueError(
                f"Replacement equation uses noise {self.equation.noise} but {self.noise.name} was given"
            )


Intervention = Union[Atomic, Shift, Replace]


def apply_intervention(scm: Scm, intervention: Intervention) -> Scm:
    """
    Build the intervened model.

    Atomic interventions replace the equation by a constant and its noise by a
    point mass; shifts wrap the mechanism with a per-unit offset; replacements
    install the given equation and noise. The input model is not modified.

    Args:
        scm: Model to intervene on
        intervention: Atomic, Shift or Replace

    Returns:
        The intervened model

    Raises:
        ValueError: If the target variable is unknown
    """
    scm.require_variable(intervention.variable)
    logger.debug("Applying %s", intervention)

    if isinstance(intervention, Atomic):
        noise = NoiseSpec(intervention.noise_name, PointMass(float(intervention.value)))
        equation = StructuralEquation(
            target=intervention.variable,
            parents=(),
            mechanism=AdditiveLinear(()),
            noise=noise.name,
        )
        return scm.replace(equation, noise)

    if isinstance(intervention, Shift):
        current = scm.equation(intervention.variable)
        equation = StructuralEquation(
            target=current.target,
            parents=current.parents,
            mechanism=ShiftedMechanism(current.mechanism, intervention.offsets),
            noise=current.noise,
        )
        return scm.replace(equation, scm.noise_for(intervention.variable))

    if isinstance(intervention, Replace):
        return scm.replace(intervention.equation, intervention.noise)

    raise ValueError(f"Unsupported intervention: {intervention!r}")
