import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mirrorx.errors import BudgetExceeded, NotClassifiable
from mirrorx.latticevoa import (
    CASES,
    D444_SIX,
    E_SL2,
    F_SL2,
    H_SL2,
    FockState,
    beta_current,
    check_current_signs,
    cocycle,
    current_mode,
    dot,
    exponential_mode,
    h_current,
    heisenberg_mode,
    module_tag_of,
    parse_exponential,
    random_basis_state,
    simple_root,
    v_lower,
    v_upper,
    verify_d_nonzero,
    verify_highest_weight_vector,
    x_current,
)

SIMPLE = [simple_root(i) for i in range(1, 20)]
ZERO = (0,) * 20


def bracket(x, m, y, n, state):
    return current_mode(x, m, current_mode(y, n, state)) - current_mode(y, n, current_mode(x, m, state))


def neg(v):
    return tuple(-a for a in v)


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


# -- cocycle -----------------------------------------------------------------


def test_cocycle_with_zero():
    assert all(cocycle(a, ZERO) == cocycle(ZERO, a) == 1 for a in SIMPLE)


def test_cocycle_commutator_exhaustive():
    for a, b in product(SIMPLE, repeat=2):
        assert cocycle(a, b) * cocycle(b, a) == (-1) ** dot(a, b)


def test_cocycle_bimultiplicative_exhaustive():
    for a, b, c in product(SIMPLE, repeat=3):
        assert cocycle(add(a, b), c) == cocycle(a, c) * cocycle(b, c)
        assert cocycle(a, add(b, c)) == cocycle(a, b) * cocycle(a, c)


def test_cocycle_identity_exhaustive():
    for a, b, c in product(SIMPLE, repeat=3):
        assert cocycle(a, b) * cocycle(add(a, b), c) == cocycle(b, c) * cocycle(a, add(b, c))


def test_adjacent_pair():
    a1, a2 = simple_root(1), simple_root(2)
    assert cocycle(a1, a2) * cocycle(a2, a1) == -1


def test_current_signs_consistent():
    assert check_current_signs() == []


# -- modes -------------------------------------------------------------------


def test_exponential_mode_leading_term():
    a = simple_root(1)
    assert exponential_mode(a, -1, FockState.vacuum()) == FockState.exponential(a)


def test_x17_on_v3():
    out = current_mode(x_current(1, 7), 0, FockState.exponential(v_lower(3)))
    assert out.exponentials().keys() == {parse_exponential("-e2-e3-e7+e18+e19+e20")}
    assert abs(out.pure_exponential()[1]) == 1


def test_a_minus_one_v2():
    a = parse_exponential("e3+e4-e17-e18")
    lat, c = exponential_mode(a, -1, FockState.exponential(v_upper(2))).pure_exponential()
    assert lat == v_upper(4) and abs(c) == 1


def test_heisenberg_on_v3():
    v3 = FockState.exponential(v_upper(3))
    assert heisenberg_mode(H_SL2.cartan, 0, v3) == v3.scale(6)
    assert current_mode(beta_current(7), 0, v3) == v3
    assert current_mode(beta_current(3), 0, v3) == v3
    assert not heisenberg_mode(H_SL2.cartan, 1, FockState.vacuum())
    assert not heisenberg_mode(H_SL2.cartan, 0, FockState.vacuum())


def test_e_f_on_v3():
    v3 = FockState.exponential(v_upper(3))
    assert all(not current_mode(E_SL2, n, v3) for n in range(5))
    assert all(not current_mode(F_SL2, n, v3) for n in range(1, 5))


def test_f0_v1():
    out = current_mode(F_SL2, 0, FockState.exponential(v_upper(1)))
    assert out.exponentials() == {
        parse_exponential("e11-e20"): Fraction(1),
        parse_exponential("e1-e10"): Fraction(-1),
    }


def test_grade_budget():
    big = parse_exponential("e1+e2+e3+e4+e5-e16-e17-e18-e19-e20")
    with pytest.raises(BudgetExceeded):
        exponential_mode(big, -11, FockState.exponential(big))


# -- module tags -------------------------------------------------------------


def test_module_tags():
    assert module_tag_of(parse_exponential("e1+e7+e8-e13-e19-e20")) == 6
    assert module_tag_of(ZERO) == 0
    assert module_tag_of(v_upper(4)) == 8


def test_f0_v1_lies_in_tag_two_pattern():
    # e^{ε1-ε10} has both signs inside the first block, so no single tag applies to it alone
    with pytest.raises(NotClassifiable):
        module_tag_of(parse_exponential("e1-e10"))


# -- currents on states of grade <= 3 ---------------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@given(seeds)
def test_sl2_zero_mode_brackets(seed):
    s = random_basis_state(random.Random(seed))
    assert bracket(E_SL2, 0, F_SL2, 0, s) == current_mode(H_SL2, 0, s)
    assert bracket(H_SL2, 0, E_SL2, 0, s) == current_mode(E_SL2, 0, s).scale(2)


@given(seeds)
def test_sl10_serre_type_brackets(seed):
    s = random_basis_state(random.Random(seed), max_grade=2)
    rng = random.Random(seed)
    i = rng.randint(1, 8)
    assert bracket(x_current(i, i + 1), 0, x_current(i + 1, i + 2), 0, s) == current_mode(x_current(i, i + 2), 0, s)


@given(seeds)
def test_levels(seed):
    s = random_basis_state(random.Random(seed))
    assert bracket(E_SL2, 1, F_SL2, -1, s) == current_mode(H_SL2, 0, s) + s.scale(10)
    assert bracket(H_SL2, 1, H_SL2, -1, s) == s.scale(20)
    assert bracket(h_current(1, 2), 1, h_current(1, 2), -1, s) == s.scale(4)
    assert bracket(x_current(1, 2), 1, x_current(2, 1), -1, s) == current_mode(h_current(1, 2), 0, s) + s.scale(2)


@given(seeds, st.sampled_from([(1, 2), (3, 7), (10, 4)]), st.integers(-1, 1), st.integers(-1, 1))
def test_commutant(seed, ij, m, n):
    s = random_basis_state(random.Random(seed), max_grade=2)
    x = x_current(*ij)
    for y in (E_SL2, F_SL2, H_SL2):
        assert not bracket(x, m, y, n, s)


@given(seeds, st.integers(-2, 2))
def test_grading(seed, m):
    s = random_basis_state(random.Random(seed))
    out = current_mode(E_SL2, m, s)
    if out:
        assert out.grade() == s.grade() - m


# -- appendix certificates ---------------------------------------------------


@pytest.mark.parametrize("i", [1, 2, 3, 4, 5])
def test_highest_weight_vectors(i):
    cert = verify_highest_weight_vector(i)
    assert cert.passed and cert.coefficient == 2 * i
    assert verify_highest_weight_vector(i, lowest=True).passed


def test_v3_sl10_weight():
    assert verify_highest_weight_vector(3).details["sl10Weight"] == [0, 0, 1, 0, 0, 0, 1, 0, 0]


def test_d662():
    cert = verify_d_nonzero("D662")
    assert cert.passed
    assert abs(cert.coefficient) == 1


def test_d448():
    cert = verify_d_nonzero("D448")
    assert cert.passed and abs(cert.coefficient) == 1


def test_d446():
    cert = verify_d_nonzero("D446")
    assert cert.passed and cert.coefficient != 0


@pytest.mark.slow
def test_d444():
    cert = verify_d_nonzero("D444")
    assert cert.passed and cert.coefficient != 0
    assert len(D444_SIX) == 6


def test_cases_registered():
    assert set(CASES) == {"D662", "D448", "D444", "D446"}
