"""Tests for the JSON SCM format and the built-in models."""

import json

import pytest

from dnscm.scm import (
    Bernoulli,
    DiscreteUniform,
    InvertibleFunction,
    NoiseSpec,
    Normal,
    Scm,
    StructuralEquation,
    equality_example_scm,
    load_scm,
    outcome_scm,
    scm_from_dict,
    scm_to_dict,
)

EQUALITY_DOCUMENT = {
    "variables": [
        {"name": "X", "noise": {"law": "bernoulli", "p": 0.5}},
        {"name": "Z", "noise": {"law": "bernoulli", "p": 0.5}},
        {
            "name": "Y",
            "noise": {"law": "discrete_uniform", "support": [0, 1, 2]},
            "parents": ["X", "Z"],
            "coeffs": [1, 1],
        },
    ]
}


class TestScmFromDict:
    def test_equality_document(self):
        scm = scm_from_dict(EQUALITY_DOCUMENT)
        assert scm.order == ("X", "Z", "Y")
        assert scm.noise_for("X").law == Bernoulli(0.5)
        assert scm.noise_for("Y").law == DiscreteUniform((0.0, 1.0, 2.0))
        assert scm.equation("Y").parents == ("X", "Z")

    def test_matches_built_in_model(self):
        assert scm_to_dict(scm_from_dict(EQUALITY_DOCUMENT)) == scm_to_dict(equality_example_scm())

    def test_serialized_form(self):
        document = scm_to_dict(outcome_scm(0.0, 1.0, 2.0))
        assert document["variables"][1] == {
            "name": "Y",
            "noise_name": "U_Y",
            "noise": {"law": "normal", "mean": 0.0, "variance": 2.0},
            "parents": ["Z"],
            "coeffs": [1.0],
        }

    def test_custom_noise_name(self):
        document = {"variables": [{"name": "A", "noise_name": "eps", "noise": {"law": "normal"}}]}
        assert scm_from_dict(document).noise_names == ("eps",)

    def test_missing_variables(self):
        with pytest.raises(ValueError, match="non-empty 'variables'"):
            scm_from_dict({})

    def test_coefficient_count_checked(self):
        document = {
            "variables": [
                {"name": "A", "noise": {"law": "normal"}},
                {"name": "B", "noise": {"law": "normal"}, "parents": ["A"], "coeffs": []},
            ]
        }
        with pytest.raises(ValueError, match="1 parents but 0 coeffs"):
            scm_from_dict(document)

    def test_unknown_law(self):
        document = {"variables": [{"name": "A", "noise": {"law": "cauchy"}}]}
        with pytest.raises(ValueError, match="Unknown noise law: cauchy"):
            scm_from_dict(document)

    def test_bad_law_parameters(self):
        document = {"variables": [{"name": "A", "noise": {"law": "normal", "sd": 1}}]}
        with pytest.raises(ValueError, match="Invalid parameters"):
            scm_from_dict(document)


class TestScmToDict:
    def test_custom_mechanism_not_serializable(self):
        scm = Scm(
            equations=[StructuralEquation("Y", (), InvertibleFunction(lambda p, u: u))],
            noises=[NoiseSpec("U_Y", Normal())],
        )
        with pytest.raises(ValueError, match="Only AdditiveLinear"):
            scm_to_dict(scm)


class TestLoadScm:
    def test_load_from_file(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps(EQUALITY_DOCUMENT), encoding="utf-8")
        assert load_scm(str(path)).variables == ("X", "Z", "Y")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_scm(str(tmp_path / "absent.json"))
