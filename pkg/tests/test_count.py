import itertools

import pytest

from equivariant_covers.count import (
    CountBreakdown,
    counts_by_index,
    cover_count,
    rho_degree,
    segre_degree,
    specialization,
)
from equivariant_covers.errors import InvalidSpec
from equivariant_covers.problem import (
    CyclicData,
    ProblemSpec,
    enumerate_problems,
    hyperelliptic_odd_spec,
)

ELLIPTIC = CyclicData(2, (1, 1, 1, 1))
CASE_A = ProblemSpec(ELLIPTIC, (-1, -1, -1, -1), (3, 3), 4, 0)
CASE_B = ProblemSpec(ELLIPTIC, (3, -1, -1, -1), (3, 3), 2, 2)
CASE_C = ProblemSpec(CyclicData(3, (1, 1, 2, 2)), (-2, -2, 2, -1), (2, 3), 3, 0)
TRIVIAL_B = ProblemSpec(ELLIPTIC, (1, 1, -1, -1), (2, 2), 0, 0)
TWO_FOUR = ProblemSpec(ELLIPTIC, (-1, -1, -1, -1), (2, 4), 4, 0)


@pytest.mark.parametrize(
    "spec, segre, rho, total",
    [
        (CASE_A, 1, 4, 4),
        (CASE_B, 2, 4, 8),
        (CASE_C, 1, 4, 4),
        (TRIVIAL_B, 1, 1, 1),
        (TWO_FOUR, 1, 6, 6),
    ],
)
def test_cover_count_examples(spec, segre, rho, total):
    got = cover_count(spec)
    assert got == CountBreakdown(segre, rho, total)
    assert segre_degree(spec) == segre
    assert rho_degree(spec) == rho


def test_hyperelliptic_odd_counts():
    for g in range(1, 11):
        spec = hyperelliptic_odd_spec((g - 1,) + (0,) * (2 * g + 1))
        assert cover_count(spec).total == 2 ** (2 * g)
        assert specialization(spec) == "hyperelliptic-odd"


def test_trivial_b_has_unit_rho():
    found = [
        s
        for base in (ELLIPTIC, CyclicData(3, (1, 1, 2, 2)))
        for s in enumerate_problems(base, 6)
        if all(b == 2 for b in s.B)
    ]
    assert found
    for spec in found[:50]:
        got = cover_count(spec)
        # all b_j = 2 forces t0 = tinf = 0
        assert got == CountBreakdown(1, 1, 1)
        assert specialization(spec) == "trivial-B"


def test_negating_orders_swaps_zero_and_pole_degrees():
    mirror = ProblemSpec(ELLIPTIC, (1, 1, 1, 1), (3, 3), 0, 4)
    assert cover_count(mirror) == cover_count(CASE_A)


def test_permuting_branch_points_keeps_the_count():
    specs = enumerate_problems(ELLIPTIC, 5) + enumerate_problems(CyclicData(3, (1, 1, 2, 2)), 5)
    assert specs
    for spec in specs:
        want = cover_count(spec)
        for perm in itertools.permutations(range(spec.base.m)):
            moved = ProblemSpec(
                CyclicData(spec.base.r, tuple(spec.base.xi[i] for i in perm)),
                tuple(spec.ord[i] for i in perm),
                spec.B,
                spec.t0,
                spec.tinf,
            )
            assert cover_count(moved) == want


def test_count_ignores_order_magnitudes():
    spec = ProblemSpec(ELLIPTIC, (1, -3, -1, -1), (3, 3), 4, 0)
    assert cover_count(spec).total == 4


def test_segre_is_one_when_one_side_is_empty():
    for spec in enumerate_problems(ELLIPTIC, 6):
        if spec.t0 == 0 or spec.tinf == 0:
            assert segre_degree(spec) == 1


def test_specialization_names():
    assert specialization(CASE_A) == "hyperelliptic-odd"
    assert specialization(CASE_B) == "general"
    assert specialization(CASE_C) == "general"
    assert specialization(TRIVIAL_B) == "trivial-B"


def test_counts_by_index():
    assert counts_by_index(CASE_C) == {2: 1, 3: 1}
    assert counts_by_index(CASE_A) == {3: 2}


def test_invalid_spec_raises_with_violations():
    bad = ProblemSpec(ELLIPTIC, (-1, -1, -1, -1), (3, 3), 3, 0)
    with pytest.raises(InvalidSpec) as exc:
        cover_count(bad)
    assert "divisibility" in {v.tag for v in exc.value.violations}


def test_breakdown_json_uses_decimal_strings():
    big = CountBreakdown(3, 10**30, 3 * 10**30)
    data = big.to_json()
    assert data == {"segre": "3", "rho": str(10**30), "total": str(3 * 10**30)}
    assert CountBreakdown.from_json(data) == big
