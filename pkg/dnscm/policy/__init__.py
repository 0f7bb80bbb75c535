# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Treatment choice: interventional (EWM) and counterfactual (CF) policies."""

from dnscm.policy.base import (
    Budget,
    DecisionSetPolicy,
    OptimizerResult,
    TreatmentTemplate,
    UnitAssignment,
    all_decision_sets,
    decision_set_assignment,
    observed_domain,
)
from dnscm.policy.counterfactual import (
    PotentialOutcomes,
    cf_optimize,
    cf_post_treatment_cdf,
    count_assignments,
    potential_outcomes,
)
from dnscm.policy.ewm import ewm_optimize, ewm_post_treatment_cdf

__all__ = [
    "Budget",
    "DecisionSetPolicy",
    "OptimizerResult",
    "PotentialOutcomes",
    "TreatmentTemplate",
    "UnitAssignment",
    "all_decision_sets",
    "cf_optimize",
    "cf_post_treatment_cdf",
    "count_assignments",
    "decision_set_assignment",
    "ewm_optimize",
    "ewm_post_treatment_cdf",
    "observed_domain",
    "potential_outcomes",
]
