"""Tests for unit-level counterfactual treatment choice."""

from fractions import Fraction

import numpy as np
import pytest

from dnscm.policy import (
    Budget,
    DecisionSetPolicy,
    OptimizerResult,
    TreatmentTemplate,
    UnitAssignment,
    all_decision_sets,
    cf_optimize,
    cf_post_treatment_cdf,
    count_assignments,
    decision_set_assignment,
    observed_domain,
    potential_outcomes,
)
from dnscm.scm import (
    AdditiveLinear,
    Bernoulli,
    DiscreteUniform,
    NoiseSpec,
    Sample,
    Scm,
    StructuralEquation,
    sample_observational,
)
from dnscm.welfare import welfare_functional


def random_instance(rng):
    """A discrete SCM with nonnegative outcomes and a sample of at most 12 units."""
    covariate_support = tuple(float(v) for v in range(int(rng.integers(2, 4))))
    outcome_support = tuple(
        float(v) for v in sorted(rng.choice(6, size=int(rng.integers(2, 4)), replace=False))
    )
    scm = Scm(
        equations=[
            StructuralEquation("X", (), AdditiveLinear(())),
            StructuralEquation("Z", (), AdditiveLinear(())),
            StructuralEquation(
                "Y",
                ("X", "Z"),
                AdditiveLinear((float(rng.integers(0, 3)), float(rng.integers(0, 4)))),
            ),
        ],
        noises=[
            NoiseSpec("U_X", DiscreteUniform(covariate_support)),
            NoiseSpec("U_Z", Bernoulli(0.5)),
            NoiseSpec("U_Y", DiscreteUniform(outcome_support)),
        ],
    )
    n = int(rng.integers(2, 13))
    sample = sample_observational(scm, n, seed=int(rng.integers(0, 2**31)))
    budget = int(rng.integers(0, min(4, n) + 1))
    return scm, sample, budget


class TestUnitAssignment:
    def test_binary_only(self):
        with pytest.raises(ValueError, match="binary"):
            UnitAssignment((0, 2))

    def test_from_indices(self):
        w = UnitAssignment.from_indices(4, [0, 2])
        assert w.w == (1, 0, 1, 0)
        assert w.treated == 2
        assert len(w) == 4

    def test_budget(self):
        assert Budget(2).allows(UnitAssignment((1, 0, 1, 0)))
        assert not Budget(1).allows(UnitAssignment((1, 0, 1, 0)))
        with pytest.raises(ValueError, match="nonnegative"):
            Budget(-1)


class TestPotentialOutcomes:
    def test_table_columns(self, equality_scm, equality_sample):
        outcomes = potential_outcomes(equality_scm, equality_sample)
        assert list(outcomes.y0) == [1.0, 2.0, 1.0, 2.0]
        assert list(outcomes.y1) == [2.0, 3.0, 2.0, 3.0]

    def test_under_assignment(self, equality_scm, equality_sample):
        outcomes = potential_outcomes(equality_scm, equality_sample)
        assert list(outcomes.under(UnitAssignment((1, 1, 0, 0)))) == [2.0, 3.0, 1.0, 2.0]
        assert list(outcomes.treating([0, 2])) == [2.0, 2.0, 2.0, 2.0]

    def test_unknown_treatment_kind(self):
        with pytest.raises(ValueError, match="Unknown treatment kind"):
            TreatmentTemplate(kind="dose")


class TestCfPostTreatmentCdf:
    def test_treat_first_two(self, equality_scm, equality_sample):
        cdf = cf_post_treatment_cdf(equality_scm, equality_sample, UnitAssignment((1, 1, 0, 0)))
        assert cdf.support == (1.0, 2.0, 3.0)
        assert cdf.cum == (Fraction(1, 4), Fraction(3, 4), Fraction(1))
        assert welfare_functional("gini", cdf).exact == Fraction(26, 16)

    def test_equalizing_assignment(self, equality_scm, equality_sample):
        cdf = cf_post_treatment_cdf(equality_scm, equality_sample, UnitAssignment((1, 0, 1, 0)))
        assert cdf.support == (2.0,)
        assert welfare_functional("gini", cdf).exact == 2

    def test_null_assignment_is_factual(self, equality_scm, equality_sample):
        cdf = cf_post_treatment_cdf(equality_scm, equality_sample, UnitAssignment.none(4))
        assert cdf.support == (1.0, 2.0)
        assert cdf.cum == (Fraction(1, 2), Fraction(1))

    def test_length_checked(self, equality_scm, equality_sample):
        with pytest.raises(ValueError, match="3 entries"):
            cf_post_treatment_cdf(equality_scm, equality_sample, UnitAssignment((1, 0, 0)))

    def test_permutation_equivariant(self, equality_scm):
        sample = sample_observational(equality_scm, 8, seed=21)
        w = (1, 0, 0, 1, 1, 0, 1, 0)
        order = [3, 7, 0, 5, 1, 6, 2, 4]
        permuted = Sample(n=8, values={k: sample[k][order] for k in sample.variables})
        a = cf_post_treatment_cdf(equality_scm, sample, UnitAssignment(w))
        b = cf_post_treatment_cdf(equality_scm, permuted, UnitAssignment(tuple(w[i] for i in order)))
        assert a == b


class TestCfOptimize:
    def test_exhaustive_budget_two(self, equality_scm, equality_sample):
        result = cf_optimize(equality_scm, equality_sample, Budget(2))
        assert result.assignment.w == (1, 0, 1, 0)
        assert result.welfare.exact == 2
        assert result.evaluated == count_assignments(4, 2) == 11

    def test_greedy_budget_two(self, equality_scm, equality_sample):
        result = cf_optimize(equality_scm, equality_sample, Budget(2), mode="greedy")
        assert result.assignment.w == (1, 0, 1, 0)
        assert result.welfare.exact == 2

    def test_beats_ewm_policy_as_assignment(self, equality_scm, equality_sample):
        best = cf_optimize(equality_scm, equality_sample, Budget(2))
        ewm_w = decision_set_assignment(equality_sample, "X", DecisionSetPolicy(frozenset({0.0})))
        ewm_value = welfare_functional(
            "gini", cf_post_treatment_cdf(equality_scm, equality_sample, ewm_w)
        )
        assert ewm_value.exact == Fraction(26, 16)
        assert best.welfare.beats(ewm_value)

    def test_zero_budget(self, equality_scm, equality_sample):
        result = cf_optimize(equality_scm, equality_sample, Budget(0))
        assert result.assignment.w == (0, 0, 0, 0)
        assert result.welfare.exact == Fraction(5, 4)

    def test_uniformly_beneficial_treatment(self, equality_scm, equality_sample):
        for mode in ("exhaustive", "greedy"):
            result = cf_optimize(equality_scm, equality_sample, Budget(4), "mean", mode=mode)
            assert result.assignment.w == (1, 1, 1, 1)

    def test_ties_go_to_smallest_index_set(self, equality_scm):
        identical = Sample(
            n=4, values={"X": np.zeros(4), "Z": np.zeros(4), "Y": np.ones(4)}
        )
        for mode in ("exhaustive", "greedy"):
            result = cf_optimize(equality_scm, identical, Budget(2), "mean", mode=mode)
            assert result.assignment.w == (1, 1, 0, 0)

    def test_monotone_in_budget(self, equality_scm):
        sample = sample_observational(equality_scm, 9, seed=4)
        values = [cf_optimize(equality_scm, sample, Budget(b)).welfare.exact for b in range(5)]
        assert values == sorted(values)

    def test_thread_count_does_not_change_result(self, equality_scm):
        sample = sample_observational(equality_scm, 12, seed=5)
        single = cf_optimize(equality_scm, sample, Budget(4), threads=1)
        many = cf_optimize(equality_scm, sample, Budget(4), threads=4)
        assert single == many

    def test_budget_above_n(self, equality_scm, equality_sample):
        with pytest.raises(ValueError, match="exceeds the sample size"):
            cf_optimize(equality_scm, equality_sample, Budget(5))

    def test_exhaustive_guard(self, equality_scm):
        sample = sample_observational(equality_scm, 100, seed=0)
        with pytest.raises(ValueError, match="mode='greedy'"):
            cf_optimize(equality_scm, sample, Budget(5))

    def test_unknown_mode(self, equality_scm, equality_sample):
        with pytest.raises(ValueError, match="Unknown optimizer mode"):
            cf_optimize(equality_scm, equality_sample, Budget(1), mode="annealing")

    def test_result_to_dict(self, equality_scm, equality_sample):
        result = cf_optimize(equality_scm, equality_sample, Budget(2))
        assert isinstance(result, OptimizerResult)
        assert result.to_dict() == {
            "assignment": [1, 0, 1, 0],
            "welfare_exact": "2",
            "welfare_float": 2.0,
            "mode": "exhaustive",
            "budget": 2,
            "welfare_functional": "gini",
        }


class TestOptimizerOracle:
    def test_random_discrete_instances(self):
        rng = np.random.default_rng(2024)
        gaps = []
        for index in range(100):
            scm, sample, budget = random_instance(rng)
            exhaustive = cf_optimize(scm, sample, Budget(budget))
            greedy = cf_optimize(scm, sample, Budget(budget), mode="greedy")
            assert exhaustive.assignment.treated <= budget
            assert greedy.assignment.treated <= budget
            assert greedy.welfare.exact <= exhaustive.welfare.exact
            if greedy.welfare.exact < exhaustive.welfare.exact:
                gaps.append((index, exhaustive.welfare.exact - greedy.welfare.exact))

            for policy in all_decision_sets(observed_domain(sample, "X")):
                w = decision_set_assignment(sample, "X", policy)
                if w.treated > budget:
                    continue
                value = welfare_functional("gini", cf_post_treatment_cdf(scm, sample, w))
                assert exhaustive.welfare.exact >= value.exact

        # Greedy reaches the exhaustive optimum on every seeded instance
        assert gaps == []
