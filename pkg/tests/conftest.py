"""Shared, session-scoped branch computations (each takes a few seconds)."""
import pytest

from gardner_ostrovsky.model import CriticalGardner, ModelParams
from gardner_ostrovsky.solver import ContinuationSettings, continue_branch


@pytest.fixture(scope="session")
def reduced_branch():
    return continue_branch(ModelParams.gardner(0.0, 1.0, 0.0), 1, 0.01, 0.01)


@pytest.fixture(scope="session")
def modified_branch():
    return continue_branch(ModelParams.gardner(0.0, 0.0, 1.0), 1, 0.01, 0.01)


@pytest.fixture(scope="session")
def smooth_branch():
    settings = ContinuationSettings(eps_max=0.3)
    return continue_branch(ModelParams.gardner(0.25, 1.0, 0.0), 1, 0.01, 0.05, settings)


@pytest.fixture(scope="session")
def cusp_branch():
    settings = ContinuationSettings(max_n=2048, slack_floor=1e-4)
    return continue_branch(CriticalGardner(0.0, 1.0), 1, 0.01, 0.02, settings)
