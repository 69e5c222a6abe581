"""Strict INI-style experiment configuration files.

Three sections: ``[objective]`` (name), ``[algorithm]`` (every solver
parameter), ``[output]`` (trace_path, format).  Unknown sections or keys are
rejected so a typo cannot silently reconfigure an experiment; numeric values
are decimal literals.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass
from pathlib import Path

from .engine import AlgoConfig

TRACE_FORMATS = ("jsonl",)

_OBJECTIVE_KEYS = {"name"}
_ALGORITHM_REQUIRED = {
    "x0",
    "alpha0",
    "beta1",
    "beta2",
    "gamma",
    "search_schedule",
    "poll_directions",
    "forcing",
    "seed",
    "max_iterations",
    "alpha_min",
}
_ALGORITHM_OPTIONAL = {"revealing_radius", "revealing_count"}
_OUTPUT_KEYS = {"trace_path", "format"}


class ConfigFileError(ValueError):
    """An experiment config file is missing, malformed, or inconsistent."""


@dataclass(frozen=True)
class ExperimentConfig:
    objective_name: str
    algo: AlgoConfig
    trace_path: str
    trace_format: str


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigFileError(f"field [{section}] {key}: {raw!r} is not a decimal number") from None


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw, 10)
    except ValueError:
        raise ConfigFileError(f"field [{section}] {key}: {raw!r} is not a decimal integer") from None


def _parse_vector(section: str, key: str, raw: str) -> tuple[float, ...]:
    tokens = [t for t in re.split(r"[,\s]+", raw.strip()) if t]
    if not tokens:
        raise ConfigFileError(f"field [{section}] {key}: empty vector")
    return tuple(_parse_float(section, key, t) for t in tokens)


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate an experiment config file.

    Raises ConfigFileError on structural problems (naming the section and
    field) and lets the algorithm-level validation in ``AlgoConfig`` surface
    through ``engine.validate_config`` at run time.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigFileError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except configparser.Error as exc:
        raise ConfigFileError(f"cannot parse {path}: {exc}") from exc

    sections = set(parser.sections())
    expected = {"objective", "algorithm", "output"}
    unknown = sections - expected
    if unknown:
        raise ConfigFileError(f"unknown section [{sorted(unknown)[0]}] in {path}")
    missing = expected - sections
    if missing:
        raise ConfigFileError(f"missing section [{sorted(missing)[0]}] in {path}")

    def check_keys(section: str, allowed: set[str], required: set[str]) -> None:
        keys = set(parser[section])
        bad = keys - allowed
        if bad:
            raise ConfigFileError(f"unknown field [{section}] {sorted(bad)[0]} in {path}")
        absent = required - keys
        if absent:
            raise ConfigFileError(f"missing field [{section}] {sorted(absent)[0]} in {path}")

    check_keys("objective", _OBJECTIVE_KEYS, _OBJECTIVE_KEYS)
    check_keys("algorithm", _ALGORITHM_REQUIRED | _ALGORITHM_OPTIONAL, _ALGORITHM_REQUIRED)
    check_keys("output", _OUTPUT_KEYS, _OUTPUT_KEYS)

    algo_section = parser["algorithm"]
    revealing_radius = None
    if "revealing_radius" in algo_section:
        revealing_radius = _parse_float("algorithm", "revealing_radius", algo_section["revealing_radius"])
    revealing_count = 1
    if "revealing_count" in algo_section:
        revealing_count = _parse_int("algorithm", "revealing_count", algo_section["revealing_count"])

    algo = AlgoConfig(
        x0=_parse_vector("algorithm", "x0", algo_section["x0"]),
        alpha0=_parse_float("algorithm", "alpha0", algo_section["alpha0"]),
        beta1=_parse_float("algorithm", "beta1", algo_section["beta1"]),
        beta2=_parse_float("algorithm", "beta2", algo_section["beta2"]),
        gamma=_parse_float("algorithm", "gamma", algo_section["gamma"]),
        revealing_radius=revealing_radius,
        revealing_count=revealing_count,
        search_schedule=algo_section["search_schedule"].strip(),
        poll_directions=algo_section["poll_directions"].strip(),
        forcing=algo_section["forcing"].strip(),
        seed=_parse_int("algorithm", "seed", algo_section["seed"]),
        max_iterations=_parse_int("algorithm", "max_iterations", algo_section["max_iterations"]),
        alpha_min=_parse_float("algorithm", "alpha_min", algo_section["alpha_min"]),
    )

    trace_format = parser["output"]["format"].strip()
    if trace_format not in TRACE_FORMATS:
        raise ConfigFileError(
            f"field [output] format: {trace_format!r} unsupported; valid formats: {', '.join(TRACE_FORMATS)}"
        )
    return ExperimentConfig(
        objective_name=parser["objective"]["name"].strip(),
        algo=algo,
        trace_path=parser["output"]["trace_path"].strip(),
        trace_format=trace_format,
    )
