"""Dense univariate polynomials over exact rationals or complex floats.

Coefficients are stored constant term first. The exact domain uses
``fractions.Fraction``; the complex domain uses Python ``complex`` at the
standard 53-bit precision and ``mpmath.mpc`` above it.
"""

from __future__ import annotations

import contextlib
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, List, NamedTuple, Sequence, Tuple

import mpmath
import numpy as np

from .errors import DomainMismatch, PrecisionExhausted, ZeroInput

log = logging.getLogger("equivariant_covers.poly")

DOUBLE_PRECISION = 53


@dataclass(frozen=True)
class Domain:
    kind: str  # "exact" | "complex"
    precision: int = 0

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def is_extended(self) -> bool:
        return self.kind == "complex" and self.precision > DOUBLE_PRECISION

    def __str__(self) -> str:
        if self.is_exact:
            return "ExactRational"
        return f"ComplexFloat({self.precision})"


EXACT = Domain("exact", 0)
COMPLEX = Domain("complex", DOUBLE_PRECISION)


def complex_domain(precision: int = DOUBLE_PRECISION) -> Domain:
    if precision < DOUBLE_PRECISION:
        raise ValueError(f"precision must be >= {DOUBLE_PRECISION} bits, got {precision}")
    return Domain("complex", int(precision))


def working(domain: Domain):
    """Context manager setting the mpmath precision an extended domain needs."""
    if domain.is_extended:
        return mpmath.workprec(domain.precision)
    return contextlib.nullcontext()


def coerce(value: Any, domain: Domain):
    if domain.is_exact:
        if isinstance(value, complex):
            if value.imag != 0:
                raise DomainMismatch(f"complex value {value!r} in {domain}")
            value = value.real
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)
    if domain.is_extended:
        with working(domain):
            if isinstance(value, Fraction):
                return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)
            return mpmath.mpc(value)
    if isinstance(value, Fraction):
        return complex(float(value))
    if isinstance(value, (mpmath.mpc, mpmath.mpf)):
        return complex(value)
    return complex(value)


@dataclass(frozen=True)
class Poly:
    coeffs: Tuple[Any, ...] = ()
    domain: Domain = field(default=EXACT)

    def __post_init__(self):
        cs = [coerce(c, self.domain) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # construction helpers
    @classmethod
    def exact(cls, coeffs: Iterable[Any]) -> "Poly":
        return cls(tuple(coeffs), EXACT)

    @classmethod
    def numeric(cls, coeffs: Iterable[Any], precision: int = DOUBLE_PRECISION) -> "Poly":
        return cls(tuple(coeffs), complex_domain(precision))

    @classmethod
    def zero(cls, domain: Domain = EXACT) -> "Poly":
        return cls((), domain)

    @classmethod
    def one(cls, domain: Domain = EXACT) -> "Poly":
        return cls((1,), domain)

    @classmethod
    def monomial(cls, n: int, coeff: Any = 1, domain: Domain = EXACT) -> "Poly":
        return cls((0,) * n + (coeff,), domain)

    @classmethod
    def linear(cls, root: Any, domain: Domain = EXACT) -> "Poly":
        """The monic factor (x - root)."""
        with working(domain):
            return cls((-coerce(root, domain), 1), domain)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        if self.is_zero:
            raise ZeroInput("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return coerce(0, self.domain)

    def _check(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.domain != self.domain:
            raise DomainMismatch(f"{self.domain} vs {other.domain}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        with working(self.domain):
            out = [self.coeff(i) + other.coeff(i) for i in range(n)]
        return Poly(tuple(out), self.domain)

    def __neg__(self) -> "Poly":
        with working(self.domain):
            return Poly(tuple(-c for c in self.coeffs), self.domain)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: Any) -> "Poly":
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.one(self.domain)
        base = self
        while n:
            if n & 1:
                out = poly_mul(out, base)
            n >>= 1
            if n:
                base = poly_mul(base, base)
        return out

    def scale(self, c: Any) -> "Poly":
        with working(self.domain):
            c = coerce(c, self.domain)
            return Poly(tuple(a * c for a in self.coeffs), self.domain)

    def shift(self, n: int) -> "Poly":
        """Multiply by x**n."""
        if self.is_zero:
            return self
        return Poly((0,) * n + self.coeffs, self.domain)

    def __call__(self, x: Any):
        with working(self.domain):
            acc = coerce(0, self.domain) if self.domain.is_exact else 0
            if self.domain.is_extended:
                x = mpmath.mpc(x)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc

    def derivative(self) -> "Poly":
        return poly_derivative(self)

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ZeroInput("cannot normalize the zero polynomial")
        with working(self.domain):
            inv = 1 / self.lead
            return Poly(tuple(c * inv for c in self.coeffs), self.domain)

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero:
            raise ZeroInput("division by the zero polynomial")
        with working(self.domain):
            rem = list(self.coeffs)
            dq = len(rem) - len(other.coeffs)
            if dq < 0:
                return Poly.zero(self.domain), self
            quot = [coerce(0, self.domain)] * (dq + 1)
            lead = other.lead
            for k in range(dq, -1, -1):
                q = rem[k + other.degree] / lead
                quot[k] = q
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= q * b
                rem[k + other.degree] = coerce(0, self.domain)
            return Poly(tuple(quot), self.domain), Poly(tuple(rem[: other.degree]), self.domain)

    def to_complex(self, precision: int = DOUBLE_PRECISION) -> "Poly":
        return Poly(self.coeffs, complex_domain(precision))

    def to_numpy(self) -> np.ndarray:
        """Coefficients as complex128, constant term first."""
        return np.array([complex(c) for c in self.coeffs], dtype=np.complex128)

    def to_json(self) -> List[Any]:
        if self.domain.is_exact:
            return [str(c) for c in self.coeffs]
        return [[float(complex(c).real), float(complex(c).imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Any], domain: Domain | None = None) -> "Poly":
        items = list(data)
        if domain is None:
            is_pair = any(isinstance(c, (list, tuple)) for c in items)
            domain = COMPLEX if is_pair or any(isinstance(c, float) for c in items) else EXACT
        if domain.is_exact:
            return cls(tuple(items), domain)
        vals = [complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c) for c in items]
        return cls(tuple(vals), domain)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"({c})" if i == 0 else f"({c})*x^{i}")
        return " + ".join(terms)


def poly_mul(a: Poly, b: Poly) -> Poly:
    a._check(b)
    if a.is_zero or b.is_zero:
        return Poly.zero(a.domain)
    with working(a.domain):
        zero = coerce(0, a.domain)
        out = [zero] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, ai in enumerate(a.coeffs):
            if ai == 0:
                continue
            for j, bj in enumerate(b.coeffs):
                out[i + j] += ai * bj
    return Poly(tuple(out), a.domain)


def poly_derivative(a: Poly) -> Poly:
    with working(a.domain):
        return Poly(tuple(i * c for i, c in enumerate(a.coeffs) if i), a.domain)


def poly_product(factors: Iterable[Poly], domain: Domain = EXACT) -> Poly:
    out = Poly.one(domain)
    for f in factors:
        out = poly_mul(out, f)
    return out


# Exact gcd via a primitive remainder sequence over the integers.


def _integer_primitive(coeffs: Sequence[Fraction]) -> List[int]:
    if not coeffs:
        return []
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def _pseudo_remainder(a: List[int], b: List[int]) -> List[int]:
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while r and len(r) - 1 >= db:
        shift, lr = len(r) - 1 - db, r[-1]
        r = [c * lb for c in r]
        for i, bc in enumerate(b):
            r[i + shift] -= lr * bc
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of two exact polynomials (gcd(0, 0) is 0)."""
    a._check(b)
    if not a.domain.is_exact:
        raise DomainMismatch(f"exact gcd needs ExactRational input, got {a.domain}")
    if a.is_zero:
        return b.monic() if not b.is_zero else b
    if b.is_zero:
        return a.monic()
    x, y = _integer_primitive(a.coeffs), _integer_primitive(b.coeffs)
    if len(x) < len(y):
        x, y = y, x
    while y:
        rem = _pseudo_remainder(x, y)
        x, y = y, (_integer_primitive([Fraction(v) for v in rem]) if rem else [])
    return Poly.exact(x).monic()


def squarefree_part(a: Poly) -> Poly:
    if a.is_zero:
        raise ZeroInput("squarefree part of the zero polynomial")
    g = poly_gcd(a, a.derivative())
    q, _ = a.divmod(g)
    return q.monic()


def squarefree_decomposition(a: Poly) -> List[Tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree factors paired with their multiplicity."""
    if a.is_zero:
        raise ZeroInput("squarefree decomposition of the zero polynomial")
    a = a.monic()
    if a.degree == 0:
        return []
    da = a.derivative()
    c = poly_gcd(a, da)
    w, _ = a.divmod(c)
    y, _ = da.divmod(c)
    z = y - w.derivative()
    out: List[Tuple[Poly, int]] = []
    i = 1
    while w.degree > 0:
        g = poly_gcd(w, z)
        if g.degree > 0:
            out.append((g, i))
        w, _ = w.divmod(g)
        y, _ = z.divmod(g)
        z = y - w.derivative()
        i += 1
    return out


class RootCluster(NamedTuple):
    center: complex
    multiplicity: int
    residual: float


def _raw_roots(a: Poly, precision: int) -> List[Any]:
    if precision <= DOUBLE_PRECISION:
        return list(np.roots(a.to_numpy()[::-1]))
    dom = complex_domain(precision)
    with working(dom):
        cs = [coerce(c, dom) for c in a.coeffs]
        n = len(cs) - 1
        if n == 1:
            return [-cs[0] / cs[1]]
        comp = mpmath.matrix(n, n)
        for i in range(n - 1):
            comp[i + 1, i] = 1
        for i in range(n):
            comp[i, n - 1] = -cs[i] / cs[n]
        return list(mpmath.eig(comp, left=False, right=False))


def _scale(u: Any, v: Any) -> float:
    return max(1.0, abs(complex(u)), abs(complex(v)))


# spread limit in units of the rounding radius
MERGE_SPREAD = 8.0
CERT_SLACK = 16.0
# tight groups with a certificate ratio in (1, AMBIGUOUS_RATIO] are neither merged nor separated
AMBIGUOUS_RATIO = 10.0


def _taylor(cs: Sequence[Any], c: Any, k: int) -> List[Any]:
    """Taylor coefficients b_0..b_k of the polynomial ``cs`` at ``c`` by repeated Horner division."""
    work = list(cs)
    out: List[Any] = []
    for _ in range(k + 1):
        if not work:
            out.append(0)
            continue
        acc: Any = 0
        quotient: List[Any] = []
        for coef in reversed(work):
            acc = acc * c + coef
            quotient.append(acc)
        out.append(quotient.pop())
        work = quotient[::-1]
    return out


class _Candidate(NamedTuple):
    members: Tuple[int, ...]
    spread: float
    noise: float
    ratio: float

    @property
    def tight(self) -> bool:
        return self.spread <= MERGE_SPREAD * self.noise

    @property
    def merge(self) -> bool:
        return self.tight and self.ratio <= 1.0


def _certify(
    cs: Sequence[Any],
    abs_cs: Sequence[float],
    norm: float,
    roots: Sequence[Any],
    members: Tuple[int, ...],
    round_err: float,
    coeff_err: float,
) -> _Candidate:
    """Decide whether ``members`` are the rounded copies of one k-fold root.

    The raw roots of a k-fold root spread by about (err * ||a|| / |b_k|)^(1/k)
    around their mean, and the mean itself is off by the square of that. At the
    mean the coefficients b_0..b_(k-1) must then be of the size this offset and
    the coefficient error explain.
    """
    k = len(members)
    c = sum((roots[i] for i in members), 0) / k
    spread = max(float(abs(roots[i] - c)) for i in members)
    b = [float(abs(v)) for v in _taylor(cs, c, k + 1)]
    if b[k] == 0.0:
        return _Candidate(members, spread, 0.0, math.inf)
    ac = float(abs(c))
    coefwise = _taylor(abs_cs, ac, k)
    normwise = _taylor([norm] * len(abs_cs), ac, k)
    floor = [round_err * coefwise[j] + coeff_err * normwise[j] for j in range(k + 1)]

    noise = ((round_err + coeff_err) * normwise[0] / b[k]) ** (1.0 / k)
    gamma = b[k + 1] / b[k]
    if noise * gamma >= 1.0:
        # the next Taylor term outweighs b_k over the spread
        return _Candidate(members, spread, 0.0, math.inf)
    offset = noise * noise * (1.0 + gamma) + floor[k - 1] / b[k]
    ratio = 0.0
    for j in range(k):
        bound = CERT_SLACK * (math.comb(k, j) * b[k] * offset ** (k - j) + floor[j])
        if bound == 0.0:
            if b[j] > 0.0:
                ratio = math.inf
            continue
        ratio = max(ratio, b[j] / bound)
    return _Candidate(members, spread, noise, ratio)


def _grow(roots: Sequence[Any], groups: List[List[int]]) -> List[Tuple[int, ...]]:
    """Each group joined with its nearest neighbours, one group at a time."""
    centers = [sum((roots[i] for i in g), 0) / len(g) for g in groups]
    out: List[Tuple[int, ...]] = []
    for gi, group in enumerate(groups):
        others = sorted(
            (gj for gj in range(len(groups)) if gj != gi),
            key=lambda gj: float(abs(centers[gj] - centers[gi])),
        )
        acc = list(group)
        for gj in others:
            acc = acc + groups[gj]
            out.append(tuple(sorted(acc)))
    return list(dict.fromkeys(out))


def roots_clustered(
    a: Poly,
    cluster_radius: float = 1e-6,
    *,
    precision: int | None = None,
    max_precision: int | None = None,
    coeff_error: float = 0.0,
) -> List[RootCluster]:
    """All complex roots of ``a`` grouped into clusters with their multiplicity.

    Roots closer than ``cluster_radius`` (relative to ``max(1, |z|)``) are
    merged outright. Wider groups are merged as a k-fold root only when the
    Taylor coefficients of ``a`` at their mean certify it against the rounding
    of the working precision plus ``coeff_error``, a normwise relative error
    already present in the coefficients.

    Groups closer than twice the radius, or whose certificate fails narrowly,
    are ambiguous; the computation is then repeated at double the working
    precision until ``max_precision`` and fails with ``PrecisionExhausted``
    beyond it.
    """
    if a.is_zero:
        raise ZeroInput("roots of the zero polynomial")
    prec = precision or (a.domain.precision if not a.domain.is_exact else DOUBLE_PRECISION)
    if a.degree == 0:
        return []
    roots = _raw_roots(a, prec)
    n = len(roots)

    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dist = [[abs(complex(roots[i] - roots[j])) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] <= cluster_radius * _scale(roots[i], roots[j]):
                parent[find(i)] = find(j)

    groups: dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    members = list(groups.values())

    dom = complex_domain(max(prec, DOUBLE_PRECISION))
    work = a.to_complex(dom.precision)
    round_err = CERT_SLACK * (n + 1) * 2.0**-prec
    ambiguous = False
    with working(dom):
        cs = list(work.coeffs)
        abs_cs = [float(abs(v)) for v in cs]
        norm = max(abs_cs)
        while len(members) > 1:
            tried = [
                _certify(cs, abs_cs, norm, roots, cand, round_err, coeff_error)
                for cand in _grow(roots, members)
            ]
            passed = [t for t in tried if t.merge]
            if not passed:
                ambiguous = any(t.tight and t.ratio <= AMBIGUOUS_RATIO for t in tried)
                break
            taken: set[int] = set()
            fused: List[List[int]] = []
            for t in sorted(passed, key=lambda t: (-len(t.members), t.spread)):
                if taken.isdisjoint(t.members):
                    taken.update(t.members)
                    fused.append(list(t.members))
            members = [g for g in members if taken.isdisjoint(g)] + fused

        for gi in range(len(members)):
            for gj in range(gi + 1, len(members)):
                for i in members[gi]:
                    for j in members[gj]:
                        if dist[i][j] < 2 * cluster_radius * _scale(roots[i], roots[j]):
                            ambiguous = True
        if ambiguous:
            if max_precision and prec * 2 <= max_precision:
                log.debug("ambiguous clusters at %d bits, escalating", prec)
                return roots_clustered(
                    a,
                    cluster_radius,
                    precision=prec * 2,
                    max_precision=max_precision,
                    coeff_error=coeff_error,
                )
            raise PrecisionExhausted(
                f"root clusters not separable at {prec} bits (radius {cluster_radius:g})"
            )

        out: List[RootCluster] = []
        for idx in members:
            center = sum((roots[i] for i in idx), 0) / len(idx)
            residual = float(abs(work(center)))
            out.append(RootCluster(complex(center), len(idx), residual))
    out.sort(key=lambda c: (round(c.center.real, 12), round(c.center.imag, 12)))
    return out
