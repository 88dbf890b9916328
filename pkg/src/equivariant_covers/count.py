"""Closed-form count of equivariant covers with moving ramification.

total = C(t/r, t0/r) * prod_j (b_j - 1) * k! / prod_l c_l!

All arithmetic is over Python integers.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict

from .problem import ProblemSpec, require_valid


@dataclass(frozen=True)
class CountBreakdown:
    segre: int
    rho: int
    total: int

    def to_json(self) -> Dict[str, str]:
        return {"segre": str(self.segre), "rho": str(self.rho), "total": str(self.total)}

    @classmethod
    def from_json(cls, data: Dict[str, str]) -> "CountBreakdown":
        return cls(int(data["segre"]), int(data["rho"]), int(data["total"]))


def segre_degree(spec: ProblemSpec) -> int:
    require_valid(spec)
    r = spec.base.r
    return math.comb((spec.t0 + spec.tinf) // r, spec.t0 // r)


def rho_degree(spec: ProblemSpec) -> int:
    derived = require_valid(spec)
    out = math.factorial(derived.k)
    for level, c in derived.c.items():
        out = out * level**c // math.factorial(c)
    return out


def cover_count(spec: ProblemSpec) -> CountBreakdown:
    segre = segre_degree(spec)
    rho = rho_degree(spec)
    return CountBreakdown(segre, rho, segre * rho)


def counts_by_index(spec: ProblemSpec) -> Dict[int, int]:
    """Multiplicities keyed by the ramification index b_j rather than b_j - 1."""
    return dict(sorted(Counter(spec.B).items()))


def specialization(spec: ProblemSpec) -> str:
    """Name the classical special case a valid spec falls under, if any."""
    require_valid(spec)
    if all(b == 2 for b in spec.B):
        return "trivial-B"
    base = spec.base
    if (
        base.r == 2
        and spec.tinf == 0
        and all(b == 3 for b in spec.B)
        and all(a < 0 for a in spec.ord)
        and spec.t0 == 2 * len(spec.B)
    ):
        return "hyperelliptic-odd"
    return "general"
