import random
from fractions import Fraction

import pytest

from equivariant_covers.errors import DomainMismatch, PrecisionExhausted, ZeroInput
from equivariant_covers.poly import (
    Poly,
    poly_derivative,
    poly_gcd,
    poly_mul,
    poly_product,
    roots_clustered,
    squarefree_decomposition,
    squarefree_part,
)


def X(*roots):
    return poly_product([Poly.linear(r) for r in roots])


def rand_poly(rng, deg):
    return Poly.exact(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(deg + 1))


def test_poly_mul_examples():
    assert poly_mul(Poly.exact([-1, 1]), Poly.exact([1, 1])).coeffs == (-1, 0, 1)
    assert poly_mul(Poly.zero(), Poly.exact([1, 2, 3])).is_zero
    assert X(3, -1, -1).coeffs == (-3, -5, -1, 1)


def test_trailing_zeros_are_stripped():
    p = Poly.exact([1, 2, 0, 0])
    assert p.degree == 1
    assert Poly.exact([0, 0]).is_zero and Poly.zero().degree == -1


def test_domain_mismatch():
    with pytest.raises(DomainMismatch):
        poly_mul(Poly.exact([1, 1]), Poly.numeric([1, 1]))


def test_derivative_examples():
    assert poly_derivative(Poly.exact([0, 0, 1])).coeffs == (0, 2)
    assert poly_derivative(Poly.exact([7])).is_zero
    assert poly_derivative(X(3, -1, -1)).coeffs == (-5, -2, 3)


def test_ring_laws_and_leibniz():
    rng = random.Random(1)
    for _ in range(30):
        a, b, c = (rand_poly(rng, rng.randint(0, 5)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if not a.is_zero and not b.is_zero:
            assert (a * b).degree == a.degree + b.degree
        assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


def test_divmod_reconstructs():
    a, b = X(1, 2, 3, 4), Poly.exact([1, 0, 1])
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_gcd():
    assert poly_gcd(X(1, 2), X(1, -3)) == X(1)
    assert poly_gcd(X(1, 2), X(3)).coeffs == (1,)
    assert poly_gcd(X(Fraction(1, 2)) * Poly.exact([4]), X(Fraction(1, 2), 5)) == X(Fraction(1, 2))


def test_squarefree_part_examples():
    assert squarefree_part(X(1, 1)) == X(1)
    assert squarefree_part(Poly.exact([-1, 0, 1])) == X(1, -1)
    assert squarefree_part(X(3, -1, -1)).coeffs == (-3, -2, 1)


def test_squarefree_part_of_powers():
    rng = random.Random(2)
    for _ in range(10):
        roots = rng.sample(range(-6, 7), rng.randint(1, 3))
        a = X(*roots)
        for n in range(1, 5):
            assert squarefree_part(a**n) == a


def test_squarefree_part_zero():
    with pytest.raises(ZeroInput):
        squarefree_part(Poly.zero())


def test_squarefree_decomposition():
    parts = squarefree_decomposition(X(3, -1, -1))
    assert parts == [(X(3), 1), (X(-1), 2)]
    assert squarefree_decomposition(Poly.exact([5])) == []


def test_roots_clustered_examples():
    out = roots_clustered(Poly.exact([-1, 0, 1]), 1e-6)
    assert [c.multiplicity for c in out] == [1, 1]
    assert [round(c.center.real, 9) for c in out] == [-1.0, 1.0]

    (double,) = roots_clustered(X(2, 2), 1e-6)
    assert double.multiplicity == 2 and abs(double.center - 2) < 1e-9

    out = roots_clustered(X(3, -1, -1), 1e-6)
    assert [(round(c.center.real, 6), c.multiplicity) for c in out] == [(-1.0, 2), (3.0, 1)]
    assert all(c.residual < 1e-9 for c in out)


def test_roots_clustered_triple_root():
    out = roots_clustered(X(1, 1, 1, 2), 1e-6)
    assert [(round(c.center.real, 6), c.multiplicity) for c in out] == [(1.0, 3), (2.0, 1)]


def test_roots_clustered_with_coefficient_error():
    # (x - 1)^3 (x + 2) with its coefficients moved by 1e-12
    p = Poly.numeric([-2 + 1e-12, 5 - 1e-12, -3 + 1e-12, -1 + 1e-12, 1])
    out = roots_clustered(p, 1e-6, coeff_error=1e-12)
    assert [c.multiplicity for c in out] == [1, 3]
    assert abs(out[0].center + 2) < 1e-9
    assert abs(out[1].center - 1) < 1e-6


def test_roots_clustered_multiplicities_match_exact_decomposition():
    rng = random.Random(3)
    for _ in range(100):
        roots = rng.sample(range(-3, 4), rng.randint(1, 4))
        mults = [rng.randint(1, 4) for _ in roots]
        while sum(mults) > 12:
            roots.pop()
            mults.pop()
        p = X(*[r for r, k in zip(roots, mults) for _ in range(k)])
        want = sorted(k for f, k in squarefree_decomposition(p) for _ in range(f.degree))
        got = sorted(c.multiplicity for c in roots_clustered(p, 1e-5))
        assert got == want
        assert sum(got) == p.degree


def test_roots_clustered_ambiguous_raises():
    p = X(1, 1 + Fraction(3, 2_000_000))
    with pytest.raises(PrecisionExhausted):
        roots_clustered(p, 1e-6)


def test_roots_clustered_extended_precision():
    out = roots_clustered(Poly.exact([-2, 0, 1]), 1e-20, precision=212)
    assert len(out) == 2
    assert abs(out[1].center.real - 2**0.5) < 1e-15


def test_json_forms():
    assert Poly.exact([Fraction(1, 2), -3]).to_json() == ["1/2", "-3"]
    assert Poly.from_json(["1/2", "-3"]) == Poly.exact([Fraction(1, 2), -3])
    assert Poly.numeric([1j, 2]).to_json() == [[0.0, 1.0], [2.0, 0.0]]
