# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Built-in models used by the experiments."""

from dnscm.scm.mechanisms import AdditiveLinear
from dnscm.scm.model import Sample, Scm, StructuralEquation
from dnscm.scm.noise import Bernoulli, DiscreteUniform, Normal, NoiseSpec

# Observed (X, Z, Y) of the four units in the equality-minded treatment example
EQUALITY_EXAMPLE_UNITS = (
    {"X": 0.0, "Z": 0.0, "Y": 1.0},
    {"X": 0.0, "Z": 0.0, "Y": 2.0},
    {"X": 1.0, "Z": 0.0, "Y": 1.0},
    {"X": 1.0, "Z": 0.0, "Y": 2.0},
)


def equality_example_scm() -> Scm:
    """X = U_X, Z = U_Z, Y = X + Z + U_Y with U_X, U_Z ~ Bern(1/2), U_Y ~ U({0, 1, 2})."""
    return Scm(
        equations=[
            StructuralEquation("X", (), AdditiveLinear(())),
            StructuralEquation("Z", (), AdditiveLinear(())),
            StructuralEquation("Y", ("X", "Z"), AdditiveLinear((1.0, 1.0))),
        ],
        noises=[
            NoiseSpec("U_X", Bernoulli(0.5)),
            NoiseSpec("U_Z", Bernoulli(0.5)),
            NoiseSpec("U_Y", DiscreteUniform((0.0, 1.0, 2.0))),
        ],
    )


def equality_example_sample() -> Sample:
    return Sample.from_records(list(EQUALITY_EXAMPLE_UNITS))


def outcome_scm(mu_z: float, sigma_z: float, noise_variance: float) -> Scm:
    """
    Treatment/outcome model ``Z = U_Z``, ``Y = Z + U_Y``.

    Args:
        mu_z: Mean of U_Z
        sigma_z: Standard deviation of U_Z
        noise_variance: Variance of U_Y
    """
    return Scm(
        equations=[
            StructuralEquation("Z", (), AdditiveLinear(())),
            StructuralEquation("Y", ("Z",), AdditiveLinear((1.0,))),
        ],
        noises=[
            NoiseSpec("U_Z", Normal(mu_z, sigma_z**2)),
            NoiseSpec("U_Y", Normal(0.0, noise_variance)),
        ],
    )
