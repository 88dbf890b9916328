from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from typing import Any


def utc_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z")


def canonical_json(obj: Any) -> str:
    # Key order is whatever the producer built; no sorting, no whitespace.
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True, allow_nan=False)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]
