from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable

from .count import cover_count
from .problem import ProblemSpec
from .schema import CSV_COLUMNS


def _ints(values: Iterable[int]) -> str:
    return " ".join(str(v) for v in values)


def export_problems_csv(specs: Iterable[ProblemSpec], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        w.writeheader()
        for s in specs:
            w.writerow(
                {
                    "d": s.degree,
                    "r": s.base.r,
                    "xi": _ints(s.base.xi),
                    "ord": _ints(s.ord),
                    "B": _ints(s.B),
                    "t0": s.t0,
                    "tinf": s.tinf,
                    "total": cover_count(s).total,
                }
            )
    return path
