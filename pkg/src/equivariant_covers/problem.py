"""Cyclic cover data, equivariant counting problems and their validity checks.

Conventions: ``ord[i]`` is the exponent of (x - lambda_i) in h'(x) (positive
for a zero, negative for a pole). The ramification index of h at the points
over Q_i is ``ram[i] = |ord[i]| / f[i]``.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    CongruenceViolated,
    HypothesesNotMet,
    InvalidSpec,
    MalformedSpec,
    NegativeGenus,
    NonIntegralGenus,
)
from .schema import SPEC_FIELDS, normalize_spec_keys

log = logging.getLogger("equivariant_covers.problem")


@dataclass(frozen=True)
class CyclicData:
    r: int
    xi: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(self.xi))

    @property
    def m(self) -> int:
        return len(self.xi)


@dataclass(frozen=True)
class DerivedCyclic:
    f: Tuple[int, ...]
    e: Tuple[int, ...]
    genus: int


@dataclass(frozen=True)
class Violation:
    tag: str  # eq1..eq5, congruence, divisibility, shape
    message: str

    def __str__(self) -> str:
        return f"[{self.tag}] {self.message}"

    def to_json(self) -> Dict[str, str]:
        return {"tag": self.tag, "message": self.message}


def cyclic_violations(base: CyclicData) -> List[Violation]:
    out: List[Violation] = []
    r, xi = base.r, base.xi
    if not isinstance(r, int) or r < 2:
        return [Violation("eq1", f"cyclic order r must be an integer >= 2, got {r!r}")]
    if len(xi) < 3:
        out.append(Violation("eq1", f"need m >= 3 branch points, got m = {len(xi)}"))
    for i, x in enumerate(xi):
        if not 1 <= x <= r - 1:
            out.append(Violation("eq1", f"xi_{i + 1} = {x} outside 1..{r - 1}"))
    if sum(xi) % r:
        out.append(Violation("eq1", f"sum(xi) = {sum(xi)} is not divisible by r = {r}"))
    if math.gcd(r, *xi) != 1:
        out.append(Violation("eq1", f"gcd(xi, r) = {math.gcd(r, *xi)} != 1"))
    return out


def derive_invariants(base: CyclicData) -> DerivedCyclic:
    r = base.r
    f = tuple(math.gcd(x, r) for x in base.xi)
    e = tuple(r // fi for fi in f)
    rhs = r * (base.m - 2) - sum(f)
    if rhs % 2:
        raise NonIntegralGenus(f"2g - 2 = {rhs} is odd for r = {r}, xi = {base.xi}")
    if rhs < -2:
        raise NegativeGenus(f"2g - 2 = {rhs} < -2 for r = {r}, xi = {base.xi}")
    return DerivedCyclic(f, e, (rhs + 2) // 2)


@dataclass(frozen=True)
class ProblemSpec:
    base: CyclicData
    ord: Tuple[int, ...]
    B: Tuple[int, ...]
    t0: int
    tinf: int

    def __post_init__(self):
        object.__setattr__(self, "ord", tuple(self.ord))
        object.__setattr__(self, "B", tuple(sorted(self.B)))

    @property
    def s0(self) -> Tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.ord) if a > 0)

    @property
    def sinf(self) -> Tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.ord) if a < 0)

    @property
    def degree(self) -> int:
        return self.t0 + sum(self.ord[i] for i in self.s0)

    def sort_key(self) -> Tuple[Any, ...]:
        return (self.degree, self.ord, self.B, self.t0)

    def to_json(self) -> Dict[str, Any]:
        values = {
            "r": self.base.r,
            "xi": list(self.base.xi),
            "ord": list(self.ord),
            "B": list(self.B),
            "t0": self.t0,
            "tinf": self.tinf,
        }
        return {k: values[k] for k in SPEC_FIELDS}

    @classmethod
    def from_json(cls, raw: Mapping[str, Any]) -> "ProblemSpec":
        if not isinstance(raw, Mapping):
            raise MalformedSpec(f"problem must be a JSON object, got {type(raw).__name__}")
        data = normalize_spec_keys(raw)
        missing = [k for k in SPEC_FIELDS if k not in data]
        if missing:
            raise MalformedSpec(f"missing field(s): {', '.join(missing)}")

        def as_int(name: str, v: Any) -> int:
            if isinstance(v, bool) or not isinstance(v, int):
                raise MalformedSpec(f"{name} must be an integer, got {v!r}")
            return v

        def as_ints(name: str, v: Any) -> Tuple[int, ...]:
            if not isinstance(v, (list, tuple)):
                raise MalformedSpec(f"{name} must be a list of integers, got {v!r}")
            return tuple(as_int(f"{name}[{i}]", x) for i, x in enumerate(v))

        return cls(
            base=CyclicData(as_int("r", data["r"]), as_ints("xi", data["xi"])),
            ord=as_ints("ord", data["ord"]),
            B=as_ints("B", data["B"]),
            t0=as_int("t0", data["t0"]),
            tinf=as_int("tinf", data["tinf"]),
        )


@dataclass(frozen=True)
class DerivedProblem:
    genus: int
    d: int
    t: int
    k: int
    K: int
    b: int
    L: Tuple[int, ...]
    c: Dict[int, int] = field(hash=False)
    ram: Tuple[int, ...]
    f: Tuple[int, ...]
    s0: Tuple[int, ...]
    sinf: Tuple[int, ...]

    def to_json(self) -> Dict[str, Any]:
        return {
            "genus": self.genus,
            "d": self.d,
            "t": self.t,
            "k": self.k,
            "K": self.K,
            "b": self.b,
            "L": list(self.L),
            "c": {str(level): n for level, n in sorted(self.c.items())},
            "ram": list(self.ram),
            "f": list(self.f),
            "S0": [i + 1 for i in self.s0],
            "Sinf": [i + 1 for i in self.sinf],
        }


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: Tuple[Violation, ...] = ()
    derived: Optional[DerivedProblem] = None

    @property
    def tags(self) -> Tuple[str, ...]:
        return tuple(sorted({v.tag for v in self.violations}))

    def to_json(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "derived": self.derived.to_json() if self.derived else None,
        }


def validate_problem(spec: ProblemSpec) -> ValidationResult:
    """Check every constraint on an equivariant counting problem.

    Never raises on bad field values; each violation carries the tag of the
    constraint it breaks.
    """
    base = spec.base
    out = cyclic_violations(base)
    r, m = base.r, base.m
    if out and (not isinstance(r, int) or r < 2):
        return ValidationResult(False, tuple(out))

    genus: Optional[int] = None
    f: Tuple[int, ...] = tuple(math.gcd(x, r) for x in base.xi)
    try:
        derived_base = derive_invariants(base)
        genus = derived_base.genus
    except (NonIntegralGenus, NegativeGenus) as e:
        out.append(Violation("eq1", str(e)))

    shape_ok = len(spec.ord) == m
    if not shape_ok:
        out.append(Violation("shape", f"ord has {len(spec.ord)} entries, expected m = {m}"))
    for i, a in enumerate(spec.ord):
        if a == 0:
            out.append(Violation("shape", f"ord_{i + 1} = 0; every lambda_i is a zero or a pole"))
    if spec.t0 < 0 or spec.tinf < 0:
        out.append(Violation("shape", f"t0 = {spec.t0}, tinf = {spec.tinf} must be >= 0"))
    for j, b in enumerate(spec.B):
        if b < 2:
            out.append(Violation("shape", f"b_{j + 1} = {b} < 2"))

    if shape_ok:
        for i, (a, x) in enumerate(zip(spec.ord, base.xi)):
            if (a - x) % r:
                out.append(
                    Violation("congruence", f"ord_{i + 1} = {a} is not congruent to xi_{i + 1} = {x} mod {r}")
                )
    for name, t in (("t0", spec.t0), ("tinf", spec.tinf)):
        if t % r:
            out.append(Violation("divisibility", f"r = {r} does not divide {name} = {t}"))

    k = len(spec.B)
    if k != m - 2:
        out.append(Violation("eq3", f"k = {k} moving orbits, expected m - 2 = {m - 2}"))

    d = spec.t0 + sum(a for a in spec.ord if a > 0)
    d_inf = spec.tinf + sum(-a for a in spec.ord if a < 0)
    if d != d_inf:
        out.append(Violation("eq2", f"degree over 0 is {d} but degree over infinity is {d_inf}"))

    ram: Tuple[int, ...] = ()
    if shape_ok:
        if all(abs(a) % fi == 0 for a, fi in zip(spec.ord, f)):
            ram = tuple(abs(a) // fi for a, fi in zip(spec.ord, f))
        else:
            out.append(Violation("eq4", "some |ord_i| is not a multiple of f_i = gcd(xi_i, r)"))
    if ram and genus is not None:
        lhs = 2 * genus + 2 * d - 2
        rhs = sum((ri - 1) * fi for ri, fi in zip(ram, f)) + sum(r * (b - 1) for b in spec.B)
        if lhs != rhs:
            out.append(Violation("eq4", f"Riemann-Hurwitz for h: 2g + 2d - 2 = {lhs} but ramification is {rhs}"))

    t = spec.t0 + spec.tinf
    if t != r * sum(b - 2 for b in spec.B):
        out.append(Violation("eq5", f"t = {t} but r * sum(b_j - 2) = {r * sum(b - 2 for b in spec.B)}"))

    if out:
        return ValidationResult(False, tuple(out))

    levels = Counter(b - 1 for b in spec.B)
    derived = DerivedProblem(
        genus=genus if genus is not None else 0,
        d=d,
        t=t,
        k=k,
        K=k * r,
        b=sum(b - 1 for b in spec.B),
        L=tuple(sorted(levels)),
        c=dict(sorted(levels.items())),
        ram=ram,
        f=f,
        s0=spec.s0,
        sinf=spec.sinf,
    )
    return ValidationResult(True, (), derived)


def require_valid(spec: ProblemSpec) -> DerivedProblem:
    result = validate_problem(spec)
    if not result.ok or result.derived is None:
        raise InvalidSpec(result.violations)
    return result.derived


def _partitions(total: int, parts: int, smallest: int = 1) -> Iterator[Tuple[int, ...]]:
    """Nondecreasing tuples of ``parts`` integers >= ``smallest`` summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(smallest, total // parts + 1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def candidate_problems(base: CyclicData, d_max: int) -> Iterator[ProblemSpec]:
    """Problems over ``base`` with degree <= d_max built from Eqs 1-4 and the congruence.

    Orders run over the residue classes xi_i mod r with |ord_i| <= d_max, t0 and
    tinf come from the two sides of Eq 2, and the total moving ramification
    sum(b_j - 1) from Riemann-Hurwitz for h. Eq 5 is not used.
    """
    if d_max < 1:
        return
    derived = derive_invariants(base)
    r, k, g = base.r, base.m - 2, derived.genus
    values = [
        [v for v in range(-d_max, d_max + 1) if v != 0 and (v - x) % r == 0] for x in base.xi
    ]
    for ord_ in itertools.product(*values):
        pos = sum(v for v in ord_ if v > 0)
        neg = sum(-v for v in ord_ if v < 0)
        ram_excess = sum(abs(v) - fi for v, fi in zip(ord_, derived.f))
        for d in range(max(pos, neg, 1), d_max + 1):
            t0, tinf = d - pos, d - neg
            if t0 % r or tinf % r:
                continue
            rhs = 2 * g + 2 * d - 2 - ram_excess
            if rhs % r or rhs // r < k:
                continue
            for parts in _partitions(rhs // r, k):
                yield ProblemSpec(base, ord_, tuple(p + 1 for p in parts), t0, tinf)


def enumerate_problems(base: CyclicData, d_max: int) -> List[ProblemSpec]:
    if d_max < 1:
        return []
    bad = cyclic_violations(base)
    if bad:
        raise InvalidSpec(bad)
    seen = 0
    out: List[ProblemSpec] = []
    for spec in candidate_problems(base, d_max):
        seen += 1
        if validate_problem(spec).ok:
            out.append(spec)
    out.sort(key=ProblemSpec.sort_key)
    log.debug("enumerated r=%s xi=%s d_max=%s: %d candidates, %d valid", base.r, base.xi, d_max, seen, len(out))
    return out


def lift_exponents(spec: ProblemSpec) -> Tuple[int, ...]:
    r = spec.base.r
    out = []
    for i, (a, x) in enumerate(zip(spec.ord, spec.base.xi)):
        if (a - x) % r:
            raise CongruenceViolated(f"ord_{i + 1} = {a} is not congruent to xi_{i + 1} = {x} mod {r}")
        out.append((a - x) // r)
    return tuple(out)


def lift_description(spec: ProblemSpec) -> str:
    """The lift h(x, y) = y * prod (x - lambda_i)^e_i * P_0(x)/P_inf(x) as text."""
    factors = []
    for i, e in enumerate(lift_exponents(spec)):
        if e:
            factors.append(f"(x - lambda_{i + 1})^{e}")
    body = " * ".join(["y"] + factors + ["P_0(x)/P_inf(x)"])
    return f"h(x, y) = {body}"


@dataclass(frozen=True)
class FormalDivisor:
    h_coeff: int
    point_coeffs: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return 2 * self.h_coeff + sum(self.point_coeffs)

    @property
    def is_effective(self) -> bool:
        return self.h_coeff >= 0 and all(c >= 0 for c in self.point_coeffs)

    def to_json(self) -> Dict[str, Any]:
        return {
            "hCoeff": self.h_coeff,
            "pointCoeffs": list(self.point_coeffs),
            "degree": self.degree,
            "effective": self.is_effective,
        }

    def __str__(self) -> str:
        terms = [f"{self.h_coeff}*H"] + [
            f"{c}*P_{i + 1}" for i, c in enumerate(self.point_coeffs) if c
        ]
        return " + ".join(terms)


def theta_characteristic(spec: ProblemSpec) -> FormalDivisor:
    """Theta characteristic of an r = 2 cover with odd fixed and triple moving ramification."""
    base = spec.base
    problems = []
    if base.r != 2:
        problems.append(f"r = {base.r}, need 2")
    if any(x != 1 for x in base.xi):
        problems.append("all xi_i must be 1")
    if any(abs(a) % 2 == 0 for a in spec.ord):
        problems.append("every |ord_i| must be odd")
    if any(b != 3 for b in spec.B):
        problems.append("every b_j must be 3")
    if problems:
        raise HypothesesNotMet("; ".join(problems))
    derived = require_valid(spec)

    w = [(abs(a) - 1) // 2 for a in spec.ord]
    points = tuple(w[i] if a < 0 else -(w[i] + 1) for i, a in enumerate(spec.ord))
    theta = FormalDivisor(derived.k - spec.t0 // 2, points)
    if theta.degree != derived.genus - 1:
        raise HypothesesNotMet(f"theta degree {theta.degree} != g - 1 = {derived.genus - 1}")
    return theta


def hyperelliptic_odd_spec(weights: Sequence[int]) -> ProblemSpec:
    """Hyperelliptic odd-cover problem for Weierstrass weights n_i >= 0 summing to g - 1."""
    m = len(weights)
    if m < 4 or m % 2:
        raise HypothesesNotMet(f"need 2g + 2 >= 4 weights, got {m}")
    g = (m - 2) // 2
    if any(n < 0 for n in weights) or sum(weights) != g - 1:
        raise HypothesesNotMet(f"weights must be >= 0 with sum g - 1 = {g - 1}")
    return ProblemSpec(
        base=CyclicData(2, (1,) * m),
        ord=tuple(-(2 * n + 1) for n in weights),
        B=(3,) * (2 * g),
        t0=4 * g,
        tinf=0,
    )


def theta_to_spec(coeffs: Sequence[int]) -> ProblemSpec:
    """A problem whose theta characteristic is sum c_i P_i (with t0 = 4g, tinf = 0)."""
    m = len(coeffs)
    if m < 4 or m % 2:
        raise HypothesesNotMet(f"need 2g + 2 >= 4 coefficients, got {m}")
    g = (m - 2) // 2
    if sum(coeffs) != g - 1:
        raise HypothesesNotMet(f"coefficients must sum to g - 1 = {g - 1}")
    ord_ = tuple(-(2 * c + 1) if c >= 0 else 2 * (-c - 1) + 1 for c in coeffs)
    return ProblemSpec(CyclicData(2, (1,) * m), ord_, (3,) * (2 * g), 4 * g, 0)
