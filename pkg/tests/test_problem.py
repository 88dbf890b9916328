import pytest

from equivariant_covers.errors import (
    CongruenceViolated,
    HypothesesNotMet,
    MalformedSpec,
    NegativeGenus,
    NonIntegralGenus,
)
from equivariant_covers.problem import (
    CyclicData,
    ProblemSpec,
    candidate_problems,
    derive_invariants,
    enumerate_problems,
    hyperelliptic_odd_spec,
    lift_description,
    lift_exponents,
    theta_characteristic,
    theta_to_spec,
    validate_problem,
)

ELLIPTIC = CyclicData(2, (1, 1, 1, 1))
TRIPLE = CyclicData(3, (1, 1, 2, 2))


def case_a(**kw):
    fields = dict(ord=(-1, -1, -1, -1), B=(3, 3), t0=4, tinf=0)
    fields.update(kw)
    return ProblemSpec(ELLIPTIC, **fields)


def case_b():
    return ProblemSpec(ELLIPTIC, (3, -1, -1, -1), (3, 3), 2, 2)


def case_c():
    return ProblemSpec(TRIPLE, (-2, -2, 2, -1), (2, 3), 3, 0)


def test_derive_invariants_examples():
    d = derive_invariants(CyclicData(2, (1,) * 6))
    assert d.f == (1,) * 6 and d.e == (2,) * 6 and d.genus == 2
    assert derive_invariants(ELLIPTIC).genus == 1
    d = derive_invariants(TRIPLE)
    assert d.f == (1, 1, 1, 1) and d.genus == 2


def test_derive_invariants_f_times_e_is_r():
    d = derive_invariants(CyclicData(6, (2, 3, 1)))
    assert d.f == (2, 3, 1)
    assert all(f * e == 6 for f, e in zip(d.f, d.e))


def test_derive_invariants_errors():
    # 2 * 3 - 5 is odd
    with pytest.raises(NonIntegralGenus):
        derive_invariants(CyclicData(2, (1,) * 5))
    # 8 * 1 - 12 = -4
    with pytest.raises(NegativeGenus):
        derive_invariants(CyclicData(8, (4, 4, 4)))


def test_validate_case_a_ok_with_derived_record():
    res = validate_problem(case_a())
    assert res.ok and not res.violations
    d = res.derived
    assert (d.d, d.b, d.k, d.t, d.genus) == (4, 4, 2, 4, 1)
    assert d.L == (2,) and d.c == {2: 2}
    assert d.ram == (1, 1, 1, 1)
    assert d.sinf == (0, 1, 2, 3) and d.s0 == ()


def test_validate_divisibility_violation():
    res = validate_problem(case_a(t0=3))
    assert not res.ok
    assert "divisibility" in res.tags


def test_validate_case_c_ok():
    res = validate_problem(case_c())
    assert res.ok
    assert res.derived.d == 5
    assert res.derived.L == (1, 2)
    assert res.derived.c == {1: 1, 2: 1}
    assert res.derived.genus == 2


def test_validate_reports_every_violation():
    spec = ProblemSpec(ELLIPTIC, (2, -1, -1), (3,), 3, 1)
    res = validate_problem(spec)
    assert not res.ok
    for tag in ("shape", "divisibility", "eq3"):
        assert tag in res.tags


def test_validate_congruence_and_eq2():
    res = validate_problem(case_a(ord=(-2, -1, -1, -1)))
    assert "congruence" in res.tags
    assert "eq2" in res.tags


def test_validate_rejects_bad_base():
    res = validate_problem(ProblemSpec(CyclicData(1, (1, 1, 1)), (1, 1, 1), (2,), 0, 0))
    assert res.tags == ("eq1",)
    res = validate_problem(ProblemSpec(CyclicData(2, (1, 1)), (1, -1), (), 0, 0))
    assert "eq1" in res.tags
    res = validate_problem(ProblemSpec(CyclicData(2, (0, 1, 1)), (2, 1, 1), (2,), 0, 0))
    assert "eq1" in res.tags


def test_validate_never_raises_on_garbage():
    res = validate_problem(ProblemSpec(ELLIPTIC, (0, 0, 0, 0), (1,), -2, -3))
    assert not res.ok
    assert "shape" in res.tags


@pytest.mark.parametrize("base", [ELLIPTIC, TRIPLE])
def test_balance_holds_for_enumerated_specs(base):
    specs = enumerate_problems(base, 8)
    assert specs
    for spec in specs + [case_a(), case_b(), case_c()]:
        assert sum(spec.ord) == spec.tinf - spec.t0, spec


def test_spec_json_round_trip_and_key_order():
    spec = case_c()
    data = spec.to_json()
    assert list(data) == ["r", "xi", "ord", "B", "t0", "tinf"]
    assert ProblemSpec.from_json(data) == spec


def test_spec_from_json_accepts_aliases():
    spec = ProblemSpec.from_json(
        {"r": 2, "xi": [1, 1, 1, 1], "a": [-1, -1, -1, -1], "b": [3, 3], "t_0": 4, "t_inf": 0}
    )
    assert spec == case_a()


@pytest.mark.parametrize(
    "raw",
    [
        {"r": 2, "xi": [1, 1, 1, 1], "ord": [-1, -1, -1, -1], "B": [3, 3], "t0": 4},
        {"r": "2", "xi": [1, 1, 1, 1], "ord": [-1, -1, -1, -1], "B": [3, 3], "t0": 4, "tinf": 0},
        {"r": 2, "xi": [1, 1, 1, 1], "ord": -1, "B": [3, 3], "t0": 4, "tinf": 0},
        {"r": 2, "xi": [1, 1, 1, 1], "ord": [-1] * 4, "B": [3, 3], "t0": True, "tinf": 0},
        {"r": 2, "xi": [1, 1, 1, 1], "ord": [-1] * 4, "B": [3, 3], "t0": 4, "tinf": 0, "x": 1},
        [1, 2, 3],
    ],
)
def test_spec_from_json_malformed(raw):
    with pytest.raises(MalformedSpec):
        ProblemSpec.from_json(raw)


def test_enumerate_contains_known_problems():
    found = enumerate_problems(ELLIPTIC, 4)
    assert case_a() in found
    assert case_b() not in found  # d = 5
    assert case_b() in enumerate_problems(ELLIPTIC, 5)


def test_enumerate_empty_for_zero_degree():
    assert enumerate_problems(ELLIPTIC, 0) == []


def test_enumerate_closed_and_deterministic():
    first = enumerate_problems(TRIPLE, 6)
    assert first == enumerate_problems(TRIPLE, 6)
    assert first == sorted(first, key=ProblemSpec.sort_key)
    assert all(validate_problem(s).ok for s in first)
    assert all(s.degree <= 6 for s in first)
    assert case_c() in first


@pytest.mark.parametrize("base", [ELLIPTIC, TRIPLE])
def test_degree_and_riemann_hurwitz_imply_eq5(base):
    # candidates are built from Eqs 1-4, the congruence and r | t0, tinf only
    candidates = list(candidate_problems(base, 8))
    assert candidates
    for spec in candidates:
        res = validate_problem(spec)
        assert res.ok, (spec, res.violations)


def test_lift_exponents_examples():
    assert lift_exponents(case_a()) == (-1, -1, -1, -1)
    assert lift_exponents(case_b()) == (1, -1, -1, -1)
    assert lift_exponents(case_c()) == (-1, -1, 0, -1)


def test_lift_exponents_inverts():
    spec = case_c()
    r, xi = spec.base.r, spec.base.xi
    assert tuple(r * e + x for e, x in zip(lift_exponents(spec), xi)) == spec.ord


def test_lift_exponents_congruence_error():
    with pytest.raises(CongruenceViolated):
        lift_exponents(case_a(ord=(-2, -1, -1, -1)))


def test_lift_description_mentions_exponents():
    text = lift_description(case_c())
    assert text.startswith("h(x, y) = y")
    assert "(x - lambda_1)^-1" in text
    assert "lambda_3" not in text


def test_theta_examples():
    th = theta_characteristic(case_a())
    assert th.h_coeff == 0 and th.point_coeffs == (0, 0, 0, 0)
    th = theta_characteristic(case_b())
    assert th.h_coeff == 1 and th.point_coeffs == (-2, 0, 0, 0)
    assert th.degree == 0


def test_theta_of_hyperelliptic_odd_cover_is_effective():
    spec = hyperelliptic_odd_spec((1, 0, 0, 0, 0, 0))
    th = theta_characteristic(spec)
    assert th.h_coeff == 0
    assert th.point_coeffs == (1, 0, 0, 0, 0, 0)
    assert th.is_effective and th.degree == 1


def test_theta_hypotheses():
    with pytest.raises(HypothesesNotMet):
        theta_characteristic(case_c())


def test_hyperelliptic_odd_spec_is_valid_for_many_genera():
    for g in range(1, 8):
        spec = hyperelliptic_odd_spec((g - 1,) + (0,) * (2 * g + 1))
        res = validate_problem(spec)
        assert res.ok, res.violations
        assert res.derived.genus == g
        assert spec.t0 == 4 * g and spec.tinf == 0


def test_hyperelliptic_odd_spec_rejects_bad_weights():
    with pytest.raises(HypothesesNotMet):
        hyperelliptic_odd_spec((1, 1, 0, 0))
    with pytest.raises(HypothesesNotMet):
        hyperelliptic_odd_spec((0, 0, 0))


def test_theta_to_spec_round_trip():
    coeffs = (1, -1, 1, 0, 0, 0)
    spec = theta_to_spec(coeffs)
    assert validate_problem(spec).ok
    th = theta_characteristic(spec)
    assert th.h_coeff == 0 and th.point_coeffs == coeffs
