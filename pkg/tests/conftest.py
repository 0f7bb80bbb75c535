"""Shared fixtures for the DNSCM test suite."""

import pytest
from hypothesis import settings

from dnscm.config import ExperimentConfig
from dnscm.scm import equality_example_sample, equality_example_scm

settings.register_profile("ci", max_examples=50, deadline=None)
settings.register_profile("debugger", max_examples=5, report_multiple_bugs=False, deadline=None)
settings.load_profile("ci")


@pytest.fixture
def equality_scm():
    return equality_example_scm()


@pytest.fixture
def equality_sample():
    return equality_example_sample()


@pytest.fixture
def small_config(tmp_path):
    """A fast configuration writing into a temporary directory."""
    return ExperimentConfig(
        out_dir=str(tmp_path / "out"),
        n=200,
        sigma_u_values=[0.0, 0.5],
        sigma_mu_values=[0.0, 5.0],
        delta_values=[1.0],
        repetitions=3,
        grid_points=64,
    )
