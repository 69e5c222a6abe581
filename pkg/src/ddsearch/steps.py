"""Pluggable pieces of the search loop: search schedules, poll direction sets,
the uniform-ball sampler behind the revealing poll, and forcing functions.

Everything here is pure except the ball sampler, which owns no state of its
own but advances the generator it is handed.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .objective import UnknownNameError, Vector

SearchSchedule = Callable[[int, Vector, float], list[Vector]]
DirectionGenerator = Callable[[int], list[Vector]]
ForcingFunction = Callable[[float], float]


# --------------------------------------------------------------------------
# Search schedules


def no_search(k: int, x: Vector, alpha: float) -> list[Vector]:
    """The empty schedule: the search step never proposes a point."""
    return []


def counterexample_search(k: int, x: Vector, alpha: float) -> list[Vector]:
    """1-D schedule that proposes ``x - 5*alpha`` at odd iterations only.

    Iteration indices start at 0 and index 0 counts as even, so the first
    search proposal happens at k = 1.  On the dyadic band objective started
    at 5/4 with step 1/4 this lands exactly on the next local minimizer to
    the left each time.
    """
    if k % 2 == 0:
        return []
    return [(x[0] - 5.0 * alpha,)]


# name -> (schedule, required dimension or None for any)
_SEARCH_SCHEDULES: dict[str, tuple[SearchSchedule, int | None]] = {
    "none": (no_search, None),
    "counterexample": (counterexample_search, 1),
}


def search_schedule_names() -> tuple[str, ...]:
    return tuple(sorted(_SEARCH_SCHEDULES))


def get_search_schedule(name: str, dimension: int) -> SearchSchedule:
    try:
        schedule, required = _SEARCH_SCHEDULES[name]
    except KeyError:
        valid = ", ".join(search_schedule_names())
        raise UnknownNameError(f"unknown search schedule {name!r}; valid names: {valid}") from None
    if required is not None and dimension != required:
        raise ValueError(f"search schedule {name!r} requires dimension {required}, got {dimension}")
    return schedule


# --------------------------------------------------------------------------
# Poll direction sets


def pm1_directions(k: int) -> list[Vector]:
    """The 1-D positive spanning set {-1, +1}, -1 first, constant in k."""
    return [(-1.0,), (1.0,)]


def _coordinate_directions(dimension: int) -> DirectionGenerator:
    plus = [tuple(1.0 if j == i else 0.0 for j in range(dimension)) for i in range(dimension)]
    minus = [tuple(-v for v in d) for d in plus]
    dirs = plus + minus

    def generate(k: int) -> list[Vector]:
        return list(dirs)

    return generate


def poll_direction_names() -> tuple[str, ...]:
    return ("coordinate", "pm1")


def get_poll_directions(name: str, dimension: int) -> DirectionGenerator:
    """Return a generator mapping the iteration index to a direction list.

    ``pm1`` is the 1-D set {-1, +1}; ``coordinate`` is {+-e_i} in any
    dimension (all positive axes first, then all negative ones).  Both are
    positive spanning sets of their space.
    """
    if name == "pm1":
        if dimension != 1:
            raise ValueError(f"poll directions 'pm1' require dimension 1, got {dimension}")
        return pm1_directions
    if name == "coordinate":
        return _coordinate_directions(dimension)
    valid = ", ".join(poll_direction_names())
    raise UnknownNameError(f"unknown poll directions {name!r}; valid names: {valid}")


# --------------------------------------------------------------------------
# Uniform sampling in a ball


def sample_ball_uniform(rng: np.random.Generator, dimension: int, radius: float, count: int) -> list[Vector]:
    """Draw ``count`` independent points uniformly from the closed ball of
    ``radius`` around the origin.

    Each draw takes a standard normal vector, normalizes it onto the unit
    sphere, and scales by ``U**(1/n)`` with U uniform on [0, 1]; in dimension
    1 this reduces to the uniform distribution on [-radius, radius].  Points
    are computed in the unit ball and then multiplied by ``radius``, so
    samples at radius R equal R times the samples the same generator state
    yields at radius 1.
    """
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    if not radius > 0.0:
        raise ValueError(f"ball radius must be > 0, got {radius}")
    gauss = rng.standard_normal((count, dimension))
    norms = np.sqrt(np.sum(gauss * gauss, axis=1))
    # A zero normal vector cannot be normalized; redraw those rows.
    degenerate = norms == 0.0
    while degenerate.any():
        gauss[degenerate] = rng.standard_normal((int(degenerate.sum()), dimension))
        norms = np.sqrt(np.sum(gauss * gauss, axis=1))
        degenerate = norms == 0.0
    radial = rng.random(count) ** (1.0 / dimension)
    unit_ball = gauss / norms[:, None] * radial[:, None]
    points = radius * unit_ball
    return [tuple(float(v) for v in row) for row in points]


# --------------------------------------------------------------------------
# Forcing functions


def zero_forcing(t: float) -> float:
    """Simple decrease: no forcing at any distance."""
    return 0.0


def quadratic_forcing(t: float) -> float:
    """Sufficient decrease proportional to the squared step: 1e-4 * t**2."""
    return 1e-4 * t * t


_FORCING: dict[str, ForcingFunction] = {
    "zero": zero_forcing,
    "quadratic": quadratic_forcing,
}


def forcing_names() -> tuple[str, ...]:
    return tuple(sorted(_FORCING))


def get_forcing(name: str) -> ForcingFunction:
    """Look up a forcing function; both bundled choices are continuous,
    nondecreasing on the nonnegative axis, and o(t) as t drops to 0."""
    try:
        return _FORCING[name]
    except KeyError:
        valid = ", ".join(forcing_names())
        raise UnknownNameError(f"unknown forcing function {name!r}; valid names: {valid}") from None
