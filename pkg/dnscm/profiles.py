# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Profile definitions and factory for DNSCM."""

from typing import Any, Dict, Optional

from dnscm.config import ExperimentConfig, get_profile_config


def create_config_from_profile(
    profile_name: str, overrides: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """
    Create an ExperimentConfig from a profile with optional overrides.

    Args:
        profile_name: Name of the profile
        overrides: Configuration values to override (config file, then flags)

    Returns:
        ExperimentConfig instance

    Raises:
        ValueError: If the profile name or an override key is unknown
    """
    profile_dict = get_profile_config(profile_name)

    if overrides:
        unknown = sorted(set(overrides) - set(ExperimentConfig.__dataclass_fields__))
        if unknown:
            raise ValueError(f"Unknown configuration keys: {', '.join(unknown)}")
        profile_dict.update(overrides)

    return ExperimentConfig(**profile_dict)


# Profile descriptions for documentation
PROFILE_DESCRIPTIONS: Dict[str, str] = {
    "ewm-example": (
        "Exact worked example on the four-unit equality sample. "
        "Needs no randomness; budget 2, Gini welfare, exhaustive search."
    ),
    "densities": (
        "Density curves and (Y0, Y1) scatter for every (sigma_u, sigma_mu) in {0, 0.5, 5}², "
        "n=1000, delta=1."
    ),
    "sweep-kl": (
        "KL of the interventional and counterfactual estimates against the truth, "
        "sigma_u from 0 to 5 in steps of 0.1, sigma_mu in {0, 0.5, 1, 5}, delta=1."
    ),
    "sweep-kl-delta5": (
        "Same sweep with delta=5 and sigma_u from 0 to 12 in steps of 0.5."
    ),
    "variance-table": (
        "Variances of Y0 and the three Y1 distributions at sigma_u=sigma_mu=5, delta=1, "
        "averaged over 50 seeds next to their analytic values."
    ),
}
