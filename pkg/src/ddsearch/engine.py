"""The direct-search iteration loop.

Each iteration executes, in order, an optional search step, an optional
revealing poll step (a fixed-radius random ball sample around the incumbent,
independent of the step size), and a directional poll step.  The first step
to produce sufficient decrease wins the iteration and the remaining steps
are skipped.  Disabling the revealing poll recovers the classic directional
direct-search method.

All trial points of a step are evaluated before a candidate is selected
(complete, non-opportunistic polling), every evaluation is logged in the
trace, and update formulas avoid fused operations so that runs on dyadic
data are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import steps
from .objective import ObjectiveSpec, Vector

SEARCH = "search"
REVEALING_POLL = "revealing_poll"
POLL = "poll"

TERMINATED_MAX_ITERATIONS = "max_iterations"
TERMINATED_ALPHA_MIN = "alpha_min"


class ConfigError(ValueError):
    """An algorithm configuration violates its invariants."""


class InitializationError(RuntimeError):
    """The starting point is infeasible or has no finite objective value."""


@dataclass(frozen=True)
class AlgoConfig:
    """Every free parameter of the solver.

    ``revealing_radius`` None disables the revealing poll entirely.  The
    step-size update uses the deterministic endpoint choices ``gamma*alpha``
    on success and ``beta2*alpha`` on failure.
    """

    x0: tuple[float, ...]
    alpha0: float
    beta1: float = 0.5
    beta2: float = 0.5
    gamma: float = 1.0
    revealing_radius: float | None = None
    revealing_count: int = 1
    search_schedule: str = "none"
    poll_directions: str = "coordinate"
    forcing: str = "zero"
    seed: int = 0
    max_iterations: int = 100
    alpha_min: float = 0.0


def validate_config(config: AlgoConfig) -> None:
    """Raise ConfigError naming the offending field(s) if the config is invalid."""
    if len(config.x0) == 0:
        raise ConfigError("x0 must have at least one component")
    if not all(math.isfinite(v) for v in config.x0):
        raise ConfigError("x0 must be finite")
    if not config.alpha0 > 0.0:
        raise ConfigError(f"alpha0 must be > 0, got {config.alpha0}")
    if not 0.0 < config.beta1 <= config.beta2 < 1.0:
        raise ConfigError(
            f"beta1, beta2 must satisfy 0 < beta1 <= beta2 < 1, got beta1={config.beta1}, beta2={config.beta2}"
        )
    if not config.gamma >= 1.0:
        raise ConfigError(f"gamma must be >= 1, got {config.gamma}")
    if config.revealing_radius is not None:
        if not config.revealing_radius > 0.0:
            raise ConfigError(f"revealing_radius must be > 0, got {config.revealing_radius}")
        if config.revealing_count < 1:
            raise ConfigError(f"revealing_count must be >= 1, got {config.revealing_count}")
    if config.seed < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {config.seed}")
    if config.max_iterations < 0:
        raise ConfigError(f"max_iterations must be >= 0, got {config.max_iterations}")
    if not config.alpha_min >= 0.0:
        raise ConfigError(f"alpha_min must be >= 0, got {config.alpha_min}")


@dataclass(frozen=True)
class TrialPoint:
    """One evaluated (or domain-rejected) trial point.

    Out-of-domain points are never passed to the evaluator; their value is
    recorded as +inf and they are ignored during candidate selection.
    """

    point: Vector
    value: float
    in_domain: bool


@dataclass(frozen=True)
class StepOutcome:
    kind: str  # SEARCH, REVEALING_POLL or POLL
    trials: tuple[TrialPoint, ...]
    winner: int | None
    success: bool


@dataclass(frozen=True)
class IterationRecord:
    """Full ledger of one iteration: incumbent, step size, every trial point
    per executed step (in execution order, skipped steps absent), and the
    resulting update."""

    k: int
    x: Vector
    alpha: float
    f_x: float
    outcomes: tuple[StepOutcome, ...]
    success: bool
    x_next: Vector
    alpha_next: float


@dataclass(frozen=True)
class Trace:
    """Immutable record of a complete run; the unit of persistence."""

    config: AlgoConfig
    objective_name: str
    records: tuple[IterationRecord, ...]
    termination: str  # TERMINATED_MAX_ITERATIONS or TERMINATED_ALPHA_MIN

    def final_incumbent(self) -> Vector:
        if not self.records:
            return tuple(self.config.x0)
        return self.records[-1].x_next


def sufficient_decrease(
    f_trial: float, f_incumbent: float, distance: float, forcing: steps.ForcingFunction
) -> bool:
    """Acceptance test: the trial value is finite and strictly below the
    incumbent value minus the forcing term at the step distance."""
    return math.isfinite(f_trial) and f_trial < f_incumbent - forcing(distance)


def select_candidate(trials: list[TrialPoint] | tuple[TrialPoint, ...]) -> int | None:
    """Index of the best eligible trial: minimum finite in-domain value,
    ties broken by generation order.  None if no trial is eligible."""
    best: int | None = None
    for i, trial in enumerate(trials):
        if not trial.in_domain or not math.isfinite(trial.value):
            continue
        if best is None or trial.value < trials[best].value:
            best = i
    return best


def step_size_update(alpha: float, success: bool, config: AlgoConfig) -> float:
    """Deterministic step-size update: expand to ``gamma*alpha`` on success,
    contract to ``beta2*alpha`` on failure."""
    if success:
        return config.gamma * alpha
    return config.beta2 * alpha


def _distance(a: Vector, b: Vector) -> float:
    return math.sqrt(sum((ai - bi) * (ai - bi) for ai, bi in zip(a, b)))


def evaluate(objective: ObjectiveSpec, point: Vector) -> TrialPoint:
    """Apply the domain oracle, then the evaluator; infeasible points get +inf."""
    if not objective.domain_oracle(point):
        return TrialPoint(point=point, value=math.inf, in_domain=False)
    return TrialPoint(point=point, value=float(objective.evaluator(point)), in_domain=True)


def _execute_step(
    objective: ObjectiveSpec,
    kind: str,
    points: list[Vector],
    x: Vector,
    f_x: float,
    forcing: steps.ForcingFunction,
) -> StepOutcome:
    trials = tuple(evaluate(objective, p) for p in points)
    winner = select_candidate(trials)
    success = False
    if winner is not None:
        best = trials[winner]
        success = sufficient_decrease(best.value, f_x, _distance(best.point, x), forcing)
    return StepOutcome(kind=kind, trials=trials, winner=winner, success=success)


def iteration_rng(seed: int, k: int) -> np.random.Generator:
    """Independent substream for iteration k of a run.

    Seeding PCG64 with the entropy pair (run seed, iteration index) decouples
    the revealing poll's draws from whatever other steps consume; toggling
    the search or poll configuration cannot shift them.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=(seed, k))))


def run(config: AlgoConfig, objective: ObjectiveSpec) -> Trace:
    """Execute the solver and return the complete trace.

    Steps run in the order search, revealing poll, poll; a success skips the
    remaining steps of the iteration.  The loop stops after
    ``max_iterations`` iterations or as soon as the step size falls below
    ``alpha_min``.  Identical configs (seed included) produce identical
    traces.
    """
    validate_config(config)
    if objective.dimension != len(config.x0):
        raise ConfigError(
            f"x0 has dimension {len(config.x0)} but objective {objective.name!r} expects {objective.dimension}"
        )
    search = steps.get_search_schedule(config.search_schedule, objective.dimension)
    poll_dirs = steps.get_poll_directions(config.poll_directions, objective.dimension)
    forcing = steps.get_forcing(config.forcing)

    x = tuple(float(v) for v in config.x0)
    start = evaluate(objective, x)
    if not start.in_domain:
        raise InitializationError(f"x0 {x} rejected by the domain oracle")
    if not math.isfinite(start.value):
        raise InitializationError(f"objective value at x0 {x} is not finite")
    f_x = start.value
    alpha = config.alpha0

    records: list[IterationRecord] = []
    termination = TERMINATED_MAX_ITERATIONS
    for k in range(config.max_iterations):
        if alpha < config.alpha_min:
            termination = TERMINATED_ALPHA_MIN
            break
        outcomes: list[StepOutcome] = []

        outcome = _execute_step(objective, SEARCH, search(k, x, alpha), x, f_x, forcing)
        outcomes.append(outcome)

        if not outcome.success and config.revealing_radius is not None:
            rng = iteration_rng(config.seed, k)
            offsets = steps.sample_ball_uniform(
                rng, objective.dimension, config.revealing_radius, config.revealing_count
            )
            # Revealing trial points are incumbent + raw ball offset; the
            # radius is fixed and deliberately independent of alpha.
            points = [tuple(xi + di for xi, di in zip(x, d)) for d in offsets]
            outcome = _execute_step(objective, REVEALING_POLL, points, x, f_x, forcing)
            outcomes.append(outcome)

        if not outcome.success:
            points = [tuple(xi + alpha * di for xi, di in zip(x, d)) for d in poll_dirs(k)]
            outcome = _execute_step(objective, POLL, points, x, f_x, forcing)
            outcomes.append(outcome)

        success = outcome.success
        if success:
            assert outcome.winner is not None
            best = outcome.trials[outcome.winner]
            x_next, f_next = best.point, best.value
        else:
            x_next, f_next = x, f_x
        alpha_next = step_size_update(alpha, success, config)

        records.append(
            IterationRecord(
                k=k,
                x=x,
                alpha=alpha,
                f_x=f_x,
                outcomes=tuple(outcomes),
                success=success,
                x_next=x_next,
                alpha_next=alpha_next,
            )
        )
        x, f_x, alpha = x_next, f_next, alpha_next

    return Trace(
        config=config,
        objective_name=objective.name,
        records=tuple(records),
        termination=termination,
    )
