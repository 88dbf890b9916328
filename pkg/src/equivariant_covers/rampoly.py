"""Ramification polynomial of h'(x) = prod (x - lambda_i)^ord_i * (P_0/P_inf)^r.

``build_psi`` clears the fixed zeros and poles from d/dx h'(x); its roots
away from the lambda_i and the roots of P_0, P_inf are the moving
ramification points. ``build_rho`` builds the target shape prod R_l^l.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import DomainMismatch, PrecisionExhausted
from .poly import (
    EXACT,
    Domain,
    Poly,
    coerce,
    poly_gcd,
    poly_mul,
    poly_product,
    roots_clustered,
    squarefree_decomposition,
    working,
)
from .util import complex_pair

log = logging.getLogger("equivariant_covers.rampoly")

EXTRANEOUS = "extraneous-roots-possible"


@dataclass(frozen=True)
class CoverFunction:
    lam: Tuple[Any, ...]
    ord: Tuple[int, ...]
    p0: Poly
    pinf: Poly
    r: int

    def __post_init__(self):
        if self.p0.domain != self.pinf.domain:
            raise DomainMismatch(f"P_0 in {self.p0.domain}, P_inf in {self.pinf.domain}")
        if len(self.lam) != len(self.ord):
            raise ValueError(f"{len(self.lam)} lambda values for {len(self.ord)} orders")
        if self.p0.is_zero or self.pinf.is_zero:
            raise ValueError("P_0 and P_inf must be nonzero")
        lam = tuple(coerce(v, self.domain) for v in self.lam)
        if len(set(lam)) != len(lam):
            raise ValueError("lambda values must be pairwise distinct")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "ord", tuple(int(a) for a in self.ord))

    @property
    def domain(self) -> Domain:
        return self.p0.domain

    @property
    def m(self) -> int:
        return len(self.lam)

    def to_json(self) -> Dict[str, Any]:
        if self.domain.is_exact:
            lam: List[Any] = [str(v) for v in self.lam]
        else:
            lam = [complex_pair(v) for v in self.lam]
        return {
            "lambda": lam,
            "ord": list(self.ord),
            "p0": self.p0.to_json(),
            "pinf": self.pinf.to_json(),
            "r": self.r,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "CoverFunction":
        p0 = Poly.from_json(data["p0"])
        pinf = Poly.from_json(data["pinf"], p0.domain)
        lam = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else v for v in data["lambda"]]
        return cls(tuple(lam), tuple(data["ord"]), p0, pinf, int(data["r"]))


def _linear_factors(cf: CoverFunction) -> List[Poly]:
    return [Poly.linear(v, cf.domain) for v in cf.lam]


def build_psi(cf: CoverFunction) -> Poly:
    dom = cf.domain
    factors = _linear_factors(cf)
    full = poly_product(factors, dom)
    a = Poly.zero(dom)
    for i, ai in enumerate(cf.ord):
        others = poly_product((f for j, f in enumerate(factors) if j != i), dom)
        a = a + others.scale(ai)
    p0, pinf = cf.p0, cf.pinf
    wronskian = poly_mul(p0.derivative(), pinf) - poly_mul(p0, pinf.derivative())
    return poly_mul(a, poly_mul(p0, pinf)) + poly_mul(full, wronskian).scale(cf.r)


def build_rho(R: Mapping[int, Poly]) -> Poly:
    if not R:
        return Poly.one(EXACT)
    dom = next(iter(R.values())).domain
    out = Poly.one(dom)
    for level in sorted(R):
        out = poly_mul(out, R[level] ** level)
    return out


def evaluate_cover(cf: CoverFunction, x: Any):
    """h'(x); raises ZeroDivisionError at a pole."""
    with working(cf.domain):
        val = (cf.p0(x) / cf.pinf(x)) ** cf.r
        for lam, a in zip(cf.lam, cf.ord):
            val = val * (x - lam) ** a
        return val


@dataclass(frozen=True)
class UTest:
    ok: bool
    reasons: Tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _trim(p: Poly, rel_tol: float) -> Poly:
    """Drop top coefficients that are negligible against the coefficient norm."""
    if p.domain.is_exact or p.is_zero:
        return p
    norm = max(abs(complex(c)) for c in p.coeffs)
    cs = list(p.coeffs)
    while len(cs) > 1 and abs(complex(cs[-1])) <= rel_tol * norm:
        cs.pop()
    return Poly(tuple(cs), p.domain)


def _near(u: Any, v: Any, radius: float) -> bool:
    u, v = complex(u), complex(v)
    return abs(u - v) <= radius * max(1.0, abs(u), abs(v))


def in_U(
    cf: CoverFunction,
    *,
    degrees: Optional[Tuple[int, int]] = None,
    radius: float = 1e-6,
) -> UTest:
    """Membership of (P_0, P_inf) in the open set U.

    ``degrees`` are the nominal degrees t0/r, tinf/r; a shortfall of the actual
    degree counts as roots at x = infinity.
    """
    p0 = _trim(cf.p0, radius)
    pinf = _trim(cf.pinf, radius)
    n0, ni = degrees if degrees is not None else (p0.degree, pinf.degree)
    reasons: List[str] = []

    at_inf0, at_infi = n0 - p0.degree, ni - pinf.degree
    if at_inf0 >= 1 and at_infi >= 1:
        reasons.append("common root at infinity")
    for name, k in (("P_0", at_inf0), ("P_inf", at_infi)):
        if k >= 2:
            reasons.append(f"{name} has a double root at infinity")

    if cf.domain.is_exact:
        if poly_gcd(p0, pinf).degree > 0:
            reasons.append("P_0 and P_inf share a root")
        for name, p in (("P_0", p0), ("P_inf", pinf)):
            for i, lam in enumerate(cf.lam):
                if p(lam) == 0:
                    reasons.append(f"{name} vanishes at lambda_{i + 1}")
            if p.degree > 0 and poly_gcd(p, p.derivative()).degree > 0:
                reasons.append(f"{name} has a double root")
        return UTest(not reasons, tuple(reasons))

    roots: Dict[str, List[complex]] = {}
    for name, p in (("P_0", p0), ("P_inf", pinf)):
        try:
            clusters = roots_clustered(p, radius)
        except PrecisionExhausted:
            reasons.append(f"{name} has nearly coincident roots")
            clusters = []
        if any(c.multiplicity > 1 for c in clusters):
            reasons.append(f"{name} has a double root")
        roots[name] = [c.center for c in clusters]
        for i, lam in enumerate(cf.lam):
            if any(_near(z, lam, radius) for z in roots[name]):
                reasons.append(f"{name} vanishes at lambda_{i + 1}")
    if any(_near(u, v, radius) for u in roots["P_0"] for v in roots["P_inf"]):
        reasons.append("P_0 and P_inf share a root")
    return UTest(not reasons, tuple(reasons))


@dataclass(frozen=True)
class BranchPoint:
    branch_point: Optional[complex]  # value of h'; None when it is 0 or infinity
    index: int
    source: Optional[complex]  # ramification point x; None is x = infinity

    def to_json(self) -> Dict[str, Any]:
        return {
            "branch_point": None if self.branch_point is None else complex_pair(self.branch_point),
            "index": self.index,
            "source": None if self.source is None else complex_pair(self.source),
        }


def _branch_key(p: BranchPoint):
    if p.branch_point is None:
        return (1, 0.0, 0.0, p.index)
    return (0, round(p.branch_point.real, 12), round(p.branch_point.imag, 12), p.index)


@dataclass(frozen=True)
class BranchProfile:
    entries: Tuple[BranchPoint, ...] = ()
    flags: Tuple[str, ...] = ()

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(sorted(p.index for p in self.entries))

    def distinct_away_from_zero_and_infinity(self, radius: float) -> bool:
        values = [p.branch_point for p in self.entries]
        if any(v is None for v in values):
            return False
        scale = max([abs(v) for v in values] + [1e-300])
        if any(abs(v) <= radius * scale for v in values):
            return False
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                if abs(values[i] - values[j]) <= radius * max(abs(values[i]), abs(values[j])):
                    return False
        return True

    def to_json(self) -> Dict[str, Any]:
        return {"entries": [p.to_json() for p in self.entries], "flags": list(self.flags)}


def _multiplicities(clusters) -> List[int]:
    return sorted(c.multiplicity for c in clusters)


def _exact_multiplicities(p: Poly) -> List[int]:
    out: List[int] = []
    for factor, mult in squarefree_decomposition(p):
        out.extend([mult] * factor.degree)
    return sorted(out)


def branch_profile(
    cf: CoverFunction,
    cluster_radius: float = 1e-5,
    *,
    expected_b: Optional[int] = None,
    max_precision: int = 512,
    coeff_error: float = 0.0,
) -> BranchProfile:
    """Branch points of the cover away from the fixed points, with their ramification index.

    ``coeff_error`` is the normwise relative error already carried by the
    coefficients of a numeric cover; a k-fold root of psi splits by about its k-th root.
    """
    psi = build_psi(cf)
    flags: Tuple[str, ...] = () if in_U(cf, radius=cluster_radius).ok else (EXTRANEOUS,)
    b = expected_b if expected_b is not None else cf.m - 2 + cf.p0.degree + cf.pinf.degree
    if psi.is_zero:
        return BranchProfile((), flags)

    if cf.domain.is_exact:
        deg = psi.degree
        want = _exact_multiplicities(psi)
        precision = 53
        while True:
            try:
                clusters = roots_clustered(psi.to_complex(precision), cluster_radius)
                if _multiplicities(clusters) == want:
                    break
                log.debug("cluster multiplicities disagree with exact ones at %d bits", precision)
            except PrecisionExhausted:
                pass
            precision *= 2
            if precision > max_precision:
                raise PrecisionExhausted(f"psi roots unresolved at {max_precision} bits")
    else:
        trimmed = _trim(psi, cluster_radius)
        deg = trimmed.degree
        clusters = roots_clustered(
            trimmed, cluster_radius, max_precision=max_precision, coeff_error=coeff_error
        )

    fixed: List[complex] = [complex(v) for v in cf.lam]
    for p in (cf.p0, cf.pinf):
        p = _trim(p if not p.domain.is_exact else p.to_complex(), cluster_radius)
        if p.degree > 0:
            fixed.extend(c.center for c in roots_clustered(p, cluster_radius, max_precision=max_precision))

    entries: List[BranchPoint] = []
    for cl in clusters:
        if any(_near(cl.center, z, cluster_radius) for z in fixed):
            continue
        value = complex(evaluate_cover(_numeric(cf), cl.center))
        entries.append(BranchPoint(value, cl.multiplicity + 1, cl.center))

    if deg < b:
        exponent = sum(cf.ord) + cf.r * (cf.p0.degree - cf.pinf.degree)
        value = None
        if exponent == 0:
            value = complex(cf.p0.lead) ** cf.r / complex(cf.pinf.lead) ** cf.r
        entries.append(BranchPoint(value, b - deg + 1, None))

    entries.sort(key=_branch_key)
    return BranchProfile(tuple(entries), flags)


def _numeric(cf: CoverFunction) -> CoverFunction:
    if not cf.domain.is_exact and not cf.domain.is_extended:
        return cf
    return CoverFunction(
        tuple(complex(v) for v in cf.lam),
        cf.ord,
        Poly.numeric([complex(c) for c in cf.p0.coeffs]),
        Poly.numeric([complex(c) for c in cf.pinf.coeffs]),
        cf.r,
    )


def leading_overflow(ord_: Sequence[int], r: int, n0: int, ninf: int) -> int:
    """Coefficient of x^(b+1) in psi for P_0, P_inf of exact degrees n0, ninf with unit leads.

    It equals sum(ord) + r*(n0 - ninf) and vanishes exactly when
    sum(ord) = tinf - t0.
    """
    return sum(ord_) + r * (n0 - ninf)
