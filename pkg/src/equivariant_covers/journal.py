"""Append-only JSON-lines journal of runs, and their replay."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .count import counts_by_index, cover_count, specialization
from .errors import MalformedSpec
from .problem import CyclicData, ProblemSpec, enumerate_problems, theta_characteristic, validate_problem
from .solver import ToleranceSet, verify_count
from .util import canonical_json, utc_iso

log = logging.getLogger("equivariant_covers.journal")

REPLAYABLE = ("validate", "count", "enumerate", "theta", "verify")


@dataclass(frozen=True)
class RunRecord:
    timestamp: str
    command: str
    spec: Optional[Dict[str, Any]]
    seed: Optional[int]
    params: Dict[str, Any]
    result: Any
    version: str = __version__

    def to_json(self) -> Dict[str, Any]:
        return {
            "timestamp": self.timestamp,
            "command": self.command,
            "spec": self.spec,
            "seed": self.seed,
            "params": self.params,
            "result": self.result,
            "version": self.version,
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "RunRecord":
        try:
            return cls(
                timestamp=data["timestamp"],
                command=data["command"],
                spec=data["spec"],
                seed=data["seed"],
                params=data["params"],
                result=data["result"],
                version=data["version"],
            )
        except KeyError as e:
            raise MalformedSpec(f"journal record missing {e.args[0]!r}") from e


def new_record(command: str, spec: Optional[ProblemSpec], seed: Optional[int], params: Dict[str, Any], result: Any) -> RunRecord:
    return RunRecord(
        timestamp=utc_iso(),
        command=command,
        spec=spec.to_json() if spec is not None else None,
        seed=seed,
        params=params,
        result=result,
    )


def append_record(path: Path, record: RunRecord) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as f:
        f.write(canonical_json(record.to_json()) + "\n")
    log.info("journal: %s record appended to %s", record.command, path)


def read_records(path: Path) -> List[RunRecord]:
    out: List[RunRecord] = []
    with path.open("r", encoding="utf-8") as f:
        for n, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                out.append(RunRecord.from_json(json.loads(line)))
            except json.JSONDecodeError as e:
                raise MalformedSpec(f"{path}:{n}: not JSON ({e.msg})") from e
    return out


def build_payload(command: str, spec: Optional[ProblemSpec], seed: Optional[int], params: Dict[str, Any]) -> Any:
    """The result payload a command produces; shared by the CLI and replay."""
    if command == "validate":
        return validate_problem(spec).to_json()
    if command == "count":
        out = cover_count(spec).to_json()
        out["by_index"] = {str(b): n for b, n in counts_by_index(spec).items()}
        out["specialization"] = specialization(spec)
        return out
    if command == "theta":
        return theta_characteristic(spec).to_json()
    if command == "enumerate":
        base = CyclicData(params["r"], tuple(params["xi"]))
        return [
            {"d": s.degree, "spec": s.to_json(), "total": str(cover_count(s).total)}
            for s in enumerate_problems(base, params["dmax"])
        ]
    if command == "verify":
        reports = verify_count(spec, params["trials"], seed or 0, ToleranceSet.from_json(params))
        return [r.to_json() for r in reports]
    raise ValueError(f"command {command!r} has no payload")


def _untimed(payload: Any) -> Any:
    if isinstance(payload, list):
        return [_untimed(p) for p in payload]
    if isinstance(payload, dict):
        return {k: v for k, v in payload.items() if k != "wall_time"}
    return payload


def replay(record: RunRecord) -> Any:
    if record.command not in REPLAYABLE:
        raise ValueError(f"{record.command!r} records cannot be replayed")
    spec = ProblemSpec.from_json(record.spec) if record.spec is not None else None
    return build_payload(record.command, spec, record.seed, record.params)


def replay_matches(record: RunRecord) -> bool:
    """Replay and compare; verify wall times are ignored."""
    fresh = replay(record)
    same = canonical_json(_untimed(fresh)) == canonical_json(_untimed(record.result))
    if not same:
        log.warning("replay mismatch for %s record from %s", record.command, record.timestamp)
    return same
