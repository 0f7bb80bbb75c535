# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""
DNSCM - DNAi Structural Causal Models

A Python library and CLI for comparing interventional and forward-looking
counterfactual treatment choice on structural causal models.
"""

from dnscm.__version__ import __version__
from dnscm.config import ExperimentConfig
from dnscm.core import ExperimentResult, run_experiment

__all__ = [
    "__version__",
    "run_experiment",
    "ExperimentConfig",
    "ExperimentResult",
]
