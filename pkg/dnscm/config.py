# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Configuration classes for DNSCM experiments."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Union

WELFARE_NAMES = ("gini", "mean", "neg_variance")
OPTIMIZER_MODES = ("exhaustive", "greedy")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _grid(start: float, step: float, count: int) -> List[float]:
    return [round(start + i * step, 10) for i in range(count)]


@dataclass
class ExperimentConfig:
    """
    Configuration shared by the experiment commands.

    Attributes:
        seed: Master seed (every random draw derives from it)
        out_dir: Output directory for CSV, SVG and manifest files
        threads: Worker threads (results do not depend on it)
        svg: Also write SVG plots
        log_level: Logging level
        n: Units per simulated population
        mu_z: Mean of the treatment variable at t=0
        sigma_z: Standard deviation of the treatment variable at t=0
        delta_values: Treatment effects to run
        sigma_u_values: Within-unit noise scales to run
        sigma_mu_values: Across-unit noise-mean scales to run
        noise_scale: Whether sigma values are standard deviations (sd) or variances
        k: Neighbor rank of the KL estimator
        repetitions: Seeds averaged by the variance table
        grid_points: Evaluation points per density curve
        bandwidth: KDE bandwidth, or "auto" for Silverman's rule
        budget: Treatment budget of the worked example
        welfare: Welfare functional (gini, mean, neg_variance)
        mode: Counterfactual optimizer (exhaustive, greedy)
    """

    seed: int = 0
    out_dir: str = "results"
    threads: int = 1
    svg: bool = False
    log_level: str = "INFO"
    n: int = 1000
    mu_z: float = 0.0
    sigma_z: float = 1.0
    delta_values: List[float] = field(default_factory=lambda: [1.0])
    sigma_u_values: List[float] = field(default_factory=lambda: [0.0, 0.5, 5.0])
    sigma_mu_values: List[float] = field(default_factory=lambda: [0.0, 0.5, 5.0])
    noise_scale: str = "sd"
    k: int = 10
    repetitions: int = 50
    grid_points: int = 512
    bandwidth: Union[float, str] = "auto"
    budget: int = 2
    welfare: str = "gini"
    mode: str = "exhaustive"

    def __post_init__(self) -> None:
        """Validate configuration after initialization."""
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.sigma_z < 0:
            raise ValueError("sigma_z must be >= 0")
        for name in ("delta_values", "sigma_u_values", "sigma_mu_values"):
            values = [float(v) for v in getattr(self, name)]
            if not values:
                raise ValueError(f"{name} must be a non-empty list")
            if name != "delta_values" and any(v < 0 for v in values):
                raise ValueError(f"{name} must all be >= 0")
            setattr(self, name, values)
        if self.noise_scale not in ("sd", "variance"):
            raise ValueError(f"Unknown noise_scale: {self.noise_scale}. Must be one of: sd, variance")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        if isinstance(self.bandwidth, str):
            if self.bandwidth != "auto":
                raise ValueError(f"Unknown bandwidth: {self.bandwidth}. Use 'auto' or a positive number")
        elif not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.welfare not in WELFARE_NAMES:
            raise ValueError(
                f"Unknown welfare: {self.welfare}. Must be one of: {', '.join(WELFARE_NAMES)}"
            )
        if self.mode not in OPTIMIZER_MODES:
            raise ValueError(
                f"Unknown mode: {self.mode}. Must be one of: {', '.join(OPTIMIZER_MODES)}"
            )
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(
                f"Unknown log_level: {self.log_level}. Must be one of: {', '.join(LOG_LEVELS)}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# Profile definitions, one per experiment command. The stability sweeps read
# sigma values as variances, which is the reading the published figures follow.
PROFILES: Dict[str, Dict[str, Any]] = {
    "ewm-example": {
        "budget": 2,
        "welfare": "gini",
        "mode": "exhaustive",
    },
    "densities": {
        "n": 1000,
        "delta_values": [1.0],
        "sigma_u_values": [0.0, 0.5, 5.0],
        "sigma_mu_values": [0.0, 0.5, 5.0],
        "noise_scale": "variance",
    },
    "sweep-kl": {
        "n": 1000,
        "delta_values": [1.0],
        "sigma_u_values": _grid(0.0, 0.1, 51),
        "sigma_mu_values": [0.0, 0.5, 1.0, 5.0],
        "noise_scale": "variance",
    },
    "sweep-kl-delta5": {
        "n": 1000,
        "delta_values": [5.0],
        "sigma_u_values": _grid(0.0, 0.5, 25),
        "sigma_mu_values": [0.0, 0.5, 1.0, 5.0],
        "noise_scale": "variance",
    },
    "variance-table": {
        "n": 1000,
        "delta_values": [1.0],
        "sigma_u_values": [5.0],
        "sigma_mu_values": [5.0],
        "repetitions": 50,
        "noise_scale": "variance",
    },
}


def get_profile_config(profile_name: str) -> Dict[str, Any]:
    """
    Get configuration for a named profile.

    Args:
        profile_name: Name of the profile

    Returns:
        Dictionary of configuration values

    Raises:
        ValueError: If profile name is unknown
    """
    if profile_name not in PROFILES:
        raise ValueError(
            f"Unknown profile: {profile_name}. "
            f"Available profiles: {', '.join(PROFILES.keys())}"
        )
    return {key: list(value) if isinstance(value, list) else value for key, value in PROFILES[profile_name].items()}
