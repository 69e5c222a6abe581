"""Shared test machinery: config factories, a counting objective wrapper, a
randomized config generator, and the engine invariant checks reused by the
property suite and the acceptance gate."""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from ddsearch import AlgoConfig, ObjectiveSpec, Trace
from ddsearch.engine import POLL, REVEALING_POLL, SEARCH
from ddsearch.steps import get_forcing


def counterexample_config(**overrides) -> AlgoConfig:
    """The dyadic-trap instance: x0=5/4, alpha0=1/4, halve on failure."""
    base = AlgoConfig(
        x0=(1.25,),
        alpha0=0.25,
        beta1=0.5,
        beta2=0.5,
        gamma=1.0,
        search_schedule="counterexample",
        poll_directions="pm1",
        forcing="zero",
        seed=0,
        max_iterations=52,
        alpha_min=0.0,
    )
    return dataclasses.replace(base, **overrides)


def revealing_config(**overrides) -> AlgoConfig:
    """The repaired instance: same trap plus a radius-2 revealing poll."""
    base = counterexample_config(
        revealing_radius=2.0,
        revealing_count=1,
        max_iterations=500,
        alpha_min=1e-9,
        seed=42,
    )
    return dataclasses.replace(base, **overrides)


class CountingObjective:
    """Wrap an ObjectiveSpec and count evaluator calls."""

    def __init__(self, inner: ObjectiveSpec):
        self.calls = 0
        self._inner = inner
        self.spec = ObjectiveSpec(
            name=inner.name,
            dimension=inner.dimension,
            evaluator=self._evaluate,
            domain_oracle=inner.domain_oracle,
        )

    def _evaluate(self, point):
        self.calls += 1
        return self._inner.evaluator(point)


def random_config(rng: np.random.Generator) -> tuple[AlgoConfig, str]:
    """Draw one valid config over the bundled 1-D objectives."""
    objective_name = str(rng.choice(["counterexample", "neg_abs", "abs", "quadratic_1d"]))
    beta1 = float(rng.uniform(0.05, 0.9))
    beta2 = float(rng.uniform(beta1, 0.95))
    revealing = bool(rng.random() < 0.5)
    config = AlgoConfig(
        x0=(float(rng.uniform(-3.0, 3.0)),),
        alpha0=float(rng.uniform(0.01, 2.0)),
        beta1=beta1,
        beta2=beta2,
        gamma=float(rng.uniform(1.0, 2.0)),
        revealing_radius=float(rng.uniform(0.5, 3.0)) if revealing else None,
        revealing_count=int(rng.integers(1, 5)) if revealing else 1,
        search_schedule=str(rng.choice(["none", "counterexample"])),
        poll_directions=str(rng.choice(["pm1", "coordinate"])),
        forcing=str(rng.choice(["zero", "quadratic"])),
        seed=int(rng.integers(0, 2**63)),
        max_iterations=int(rng.integers(1, 25)),
        alpha_min=float(rng.choice([0.0, 1e-6])),
    )
    return config, objective_name


def check_trace_invariants(trace: Trace, config: AlgoConfig) -> None:
    """Assert the engine contracts on one finished trace."""
    forcing = get_forcing(config.forcing)
    revealing_enabled = config.revealing_radius is not None

    for i, record in enumerate(trace.records):
        kinds = [o.kind for o in record.outcomes]

        # Execution order and skip semantics: search always executes; the
        # revealing poll follows unless search succeeded; the poll follows
        # unless an earlier step succeeded.
        assert kinds[0] == SEARCH
        successes = [o.success for o in record.outcomes]
        assert sum(successes) <= 1
        if any(successes):
            assert successes[-1], "only the last executed step may succeed"
        search_outcome = record.outcomes[0]
        if search_outcome.success:
            assert kinds == [SEARCH]
        elif revealing_enabled:
            assert kinds[1] == REVEALING_POLL
            if record.outcomes[1].success:
                assert kinds == [SEARCH, REVEALING_POLL]
            else:
                assert kinds == [SEARCH, REVEALING_POLL, POLL]
        else:
            assert kinds == [SEARCH, POLL]

        assert record.success == any(successes)

        for outcome in record.outcomes:
            if outcome.success:
                assert outcome.winner is not None
                best = outcome.trials[outcome.winner]
                assert best.in_domain and math.isfinite(best.value)
                dist = math.dist(best.point, record.x)
                assert best.value < record.f_x - forcing(dist)
            if outcome.winner is not None:
                assert outcome.trials[outcome.winner].in_domain
            for trial in outcome.trials:
                if not trial.in_domain:
                    assert trial.value == math.inf

        # Step-size bracketing, using the deterministic endpoint updates.
        ratio = record.alpha_next / record.alpha
        if record.success:
            assert 1.0 <= ratio <= config.gamma * (1.0 + 1e-15)
        else:
            assert config.beta1 * (1.0 - 1e-15) <= ratio <= config.beta2 * (1.0 + 1e-15)

        # Monotone incumbents, strict exactly at successes.
        if record.success:
            winning = record.outcomes[-1]
            assert winning.trials[winning.winner].point == record.x_next
            assert winning.trials[winning.winner].value < record.f_x
        else:
            assert record.x_next == record.x

        if i + 1 < len(trace.records):
            nxt = trace.records[i + 1]
            assert nxt.x == record.x_next
            assert nxt.alpha == record.alpha_next
            assert nxt.k == record.k + 1

        assert record.alpha >= config.alpha_min or config.alpha_min == 0.0


def evaluation_count(trace: Trace) -> int:
    """Number of evaluator calls a run performs: one for the starting point
    plus one per in-domain trial point."""
    return 1 + sum(
        sum(1 for t in o.trials if t.in_domain) for r in trace.records for o in r.outcomes
    )
