from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any, Dict, List, Mapping, Tuple

import jsonschema

from .errors import MalformedSpec

# Canonical ProblemSpec field order; hashes and journal lines depend on it.
SPEC_FIELDS: List[str] = ["r", "xi", "ord", "B", "t0", "tinf"]

# CSV export of enumerated problems.
CSV_COLUMNS: List[str] = ["d", "r", "xi", "ord", "B", "t0", "tinf", "total"]

# PDF layout: (title, keys) per journal record
PDF_SECTIONS: List[Tuple[str, List[str]]] = [
    ("Run", ["command", "timestamp", "version", "seed"]),
    ("Problem", SPEC_FIELDS),
    ("Parameters", ["params"]),
    ("Result", ["result"]),
]

# Accepted spellings of ProblemSpec keys -> canonical keys.
KEY_ALIASES: Dict[str, str] = {
    "r": "r",
    "order": "r",
    "xi": "xi",
    "ξ": "xi",
    "ord": "ord",
    "a": "ord",
    "exponents": "ord",
    "b": "B",
    "branching": "B",
    "t0": "t0",
    "t_0": "t0",
    "tinf": "tinf",
    "t_inf": "tinf",
    "t_infinity": "tinf",
    "t∞": "tinf",
}

SCHEMA_KINDS: Tuple[str, ...] = (
    "problem",
    "validation",
    "count",
    "theta",
    "enumerate",
    "verify",
    "record",
)


def normalize_key(k: str) -> str:
    return "".join(k.strip().lower().split())


def normalize_spec_keys(raw: Mapping[str, Any]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for k, v in raw.items():
        mapped = KEY_ALIASES.get(normalize_key(str(k)))
        if mapped is None:
            raise MalformedSpec(f"unknown problem field {k!r}")
        if mapped in out:
            raise MalformedSpec(f"field {mapped!r} given twice")
        out[mapped] = v
    return out


@lru_cache(maxsize=None)
def load_schema(kind: str) -> Dict[str, Any]:
    if kind not in SCHEMA_KINDS:
        raise KeyError(f"no schema named {kind!r}")
    path = resources.files("equivariant_covers").joinpath("schemas", f"{kind}.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))


def validate_payload(kind: str, obj: Any) -> None:
    try:
        jsonschema.validate(instance=obj, schema=load_schema(kind))
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise MalformedSpec(f"{kind} payload invalid at {where}: {e.message}") from e
