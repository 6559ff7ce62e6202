import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def default_curve():
    """Rows of the full default learning-curve experiment, computed once per session."""
    from ovorank.harness import ExperimentConfig, run_experiment, summarize

    rows = list(run_experiment(ExperimentConfig()))
    return rows, summarize(rows)
