"""Line-delimited trace files.

Layout: a header object carrying the config and objective name, one object
per iteration record, and a trailer carrying the termination reason.  Floats
are serialized as Python's shortest round-trip decimals, so a written trace
re-reads to bit-identical values, and +inf survives as the JSON-extension
token ``Infinity``.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Any, Iterable

from .engine import AlgoConfig, IterationRecord, StepOutcome, Trace, TrialPoint

FORMAT_NAME = "ddsearch-trace"
FORMAT_VERSION = 1


class TraceFormatError(ValueError):
    """A trace file is missing, truncated, or structurally invalid."""


def config_to_dict(config: AlgoConfig) -> dict[str, Any]:
    data = dataclasses.asdict(config)
    data["x0"] = list(config.x0)
    return data


def config_from_dict(data: dict[str, Any]) -> AlgoConfig:
    fields = {f.name for f in dataclasses.fields(AlgoConfig)}
    unknown = set(data) - fields
    if unknown:
        raise TraceFormatError(f"unknown config fields in trace header: {sorted(unknown)}")
    missing = fields - set(data)
    if missing:
        raise TraceFormatError(f"missing config fields in trace header: {sorted(missing)}")
    prepared = dict(data)
    prepared["x0"] = tuple(float(v) for v in data["x0"])
    return AlgoConfig(**prepared)


def _outcome_to_dict(outcome: StepOutcome) -> dict[str, Any]:
    return {
        "step": outcome.kind,
        "trials": [
            {"point": list(t.point), "value": t.value, "in_domain": t.in_domain}
            for t in outcome.trials
        ],
        "winner": outcome.winner,
        "success": outcome.success,
    }


def _outcome_from_dict(data: dict[str, Any]) -> StepOutcome:
    trials = tuple(
        TrialPoint(
            point=tuple(float(v) for v in t["point"]),
            value=float(t["value"]),
            in_domain=bool(t["in_domain"]),
        )
        for t in data["trials"]
    )
    return StepOutcome(kind=data["step"], trials=trials, winner=data["winner"], success=data["success"])


def _record_to_dict(record: IterationRecord) -> dict[str, Any]:
    return {
        "k": record.k,
        "x": list(record.x),
        "alpha": record.alpha,
        "f": record.f_x,
        "outcomes": [_outcome_to_dict(o) for o in record.outcomes],
        "success": record.success,
        "x_next": list(record.x_next),
        "alpha_next": record.alpha_next,
    }


def _record_from_dict(data: dict[str, Any]) -> IterationRecord:
    return IterationRecord(
        k=int(data["k"]),
        x=tuple(float(v) for v in data["x"]),
        alpha=float(data["alpha"]),
        f_x=float(data["f"]),
        outcomes=tuple(_outcome_from_dict(o) for o in data["outcomes"]),
        success=bool(data["success"]),
        x_next=tuple(float(v) for v in data["x_next"]),
        alpha_next=float(data["alpha_next"]),
    )


def trace_lines(trace: Trace) -> Iterable[str]:
    header = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "objective": trace.objective_name,
        "config": config_to_dict(trace.config),
    }
    yield json.dumps(header, separators=(",", ":"))
    for record in trace.records:
        yield json.dumps(_record_to_dict(record), separators=(",", ":"))
    yield json.dumps({"termination": trace.termination}, separators=(",", ":"))


def write_trace(trace: Trace, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for line in trace_lines(trace):
            handle.write(line)
            handle.write("\n")


def read_trace(path: str | Path) -> Trace:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = [line for line in handle.read().splitlines() if line.strip()]
    except OSError as exc:
        raise TraceFormatError(f"cannot read trace file {path}: {exc}") from exc
    if len(lines) < 2:
        raise TraceFormatError(f"trace file {path} is truncated")
    try:
        parsed = [json.loads(line) for line in lines]
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"trace file {path} is not valid line-delimited JSON: {exc}") from exc

    header, body, trailer = parsed[0], parsed[1:-1], parsed[-1]
    if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
        raise TraceFormatError(f"trace file {path} has no {FORMAT_NAME} header")
    if header.get("version") != FORMAT_VERSION:
        raise TraceFormatError(f"unsupported trace version {header.get('version')!r}")
    if not isinstance(trailer, dict) or "termination" not in trailer:
        raise TraceFormatError(f"trace file {path} has no termination trailer")
    try:
        config = config_from_dict(header["config"])
        records = tuple(_record_from_dict(r) for r in body)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TraceFormatError):
            raise
        raise TraceFormatError(f"malformed trace record in {path}: {exc}") from exc
    return Trace(
        config=config,
        objective_name=str(header["objective"]),
        records=records,
        termination=str(trailer["termination"]),
    )
