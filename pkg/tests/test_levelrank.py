from collections import Counter

import pytest

from mirrorx.levelrank import beta, branching_spectrum, coset_classes, cyclic_act, transpose_partner
from mirrorx.liealg import dominant_weights_at_level, from_fundamentals, sl, weight


def sl2(j):
    return weight(sl(2), j)


def pair_weight(n, j):
    if j == 0:
        return from_fundamentals(sl(n), {})
    if 2 * j == n:
        return from_fundamentals(sl(n), {j: 2})
    return from_fundamentals(sl(n), {j: 1, n - j: 1})


def test_coset_classes():
    q = coset_classes(2, 10)
    assert [w.coords[0] for w in q[0]] == [0, 2, 4, 6, 8, 10]
    assert [w.coords[0] for w in q[1]] == [1, 3, 5, 7, 9]
    assert [w.coords[0] for w in coset_classes(2, 28)[0]] == list(range(0, 29, 2))


def test_branching_rows_2_10():
    spec = branching_spectrum(2, 10)
    assert [(p.lam.coords[0], p.lam_dot) for p in spec.pairs] == [(2 * j, pair_weight(10, j)) for j in range(6)]


def test_branching_rows_2_28():
    spec = branching_spectrum(2, 28)
    assert [(p.lam.coords[0], p.lam_dot) for p in spec.pairs] == [(2 * j, pair_weight(28, j)) for j in range(15)]


@pytest.mark.parametrize("n", [10, 28])
def test_pair_weights_integral(n):
    for p in branching_spectrum(2, n).pairs:
        assert p.grade_shift.denominator == 1 and p.grade_shift >= 0


@pytest.mark.parametrize("n", [10, 28])
def test_lambda_dot_injective(n):
    dots = [p.lam_dot for p in branching_spectrum(2, n).pairs]
    assert len(set(dots)) == len(dots)


def test_cyclic_act():
    assert cyclic_act(0, sl2(3), 10) == sl2(3)
    for j in range(11):
        assert cyclic_act(1, sl2(j), 10) == sl2(10 - j)
    orbits = {frozenset({j, 10 - j}) for j in range(11)}
    assert len(orbits) == 6


def test_beta_lands_in_level_m_weights():
    for n in (10, 28):
        targets = set(dominant_weights_at_level(sl(n), 2))
        for j in range(n + 1):
            assert beta(sl2(j), n) in targets


def test_beta_of_six_up_to_twist():
    b = beta(sl2(6), 10)
    assert from_fundamentals(sl(10), {3: 1, 7: 1}) in {cyclic_act(mu, b, 2) for mu in range(10)}


def test_beta_orbit_bijection_inverse():
    # β followed by β with (m, n) swapped returns the ℤ2-orbit of the starting weight
    for j in range(11):
        back = beta(beta(sl2(j), 10), 2)
        assert back in {sl2(j), sl2(10 - j)}


def test_transpose_partner():
    assert transpose_partner(sl2(6), 10, 0) == from_fundamentals(sl(10), {3: 1, 7: 1})


@pytest.mark.parametrize("m,n,tilde", [(2, 10, 1), (2, 10, 3), (3, 4, 0), (2, 5, 0)])
def test_other_sectors_resolve(m, n, tilde):
    spec = branching_spectrum(m, n, tilde)
    assert Counter(p.lam for p in spec.pairs).most_common(1)[0][1] == 1
