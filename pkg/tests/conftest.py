from __future__ import annotations

import pytest

from ddsearch import Trace, get_objective, run
from ddsearch.objective import ObjectiveSpec

from helpers import counterexample_config


@pytest.fixture(scope="session")
def counterexample_objective() -> ObjectiveSpec:
    return get_objective("counterexample")


@pytest.fixture(scope="session")
def vanilla_trace_52(counterexample_objective) -> Trace:
    """The 52-iteration run of the dyadic trap without the revealing poll."""
    return run(counterexample_config(), counterexample_objective)


@pytest.fixture(scope="session")
def vanilla_trace_30(counterexample_objective) -> Trace:
    return run(counterexample_config(max_iterations=30), counterexample_objective)
