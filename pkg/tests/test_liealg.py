from collections import Counter
from fractions import Fraction

import pytest

from mirrorx.errors import UnsupportedFamily
from mirrorx.liealg import (
    B2,
    G2,
    commutator,
    casimir,
    dominant_weights_at_level,
    dual_weight,
    from_fundamentals,
    gram_matrix,
    inner,
    leading_minors,
    parse_algebra,
    rho,
    sl,
    sl2_rep_matrices,
    tensor_decompose,
    weight,
    weyl_dim,
)


def lam37():
    return from_fundamentals(sl(10), {3: 1, 7: 1})


@pytest.mark.parametrize("n", [2, 10, 20])
def test_rho_is_all_ones(n):
    assert rho(sl(n)).coords == (1,) * (n - 1)


def test_inner_products():
    assert inner(weight(sl(2), 6), weight(sl(2), 6)) == 18
    # (Λi, Λj) = min(i, j) - ij/10
    g = lambda i, j: Fraction(min(i, j)) - Fraction(i * j, 10)
    assert inner(lam37(), lam37()) == g(3, 3) + 2 * g(3, 7) + g(7, 7)
    assert inner(weight(sl(10), *[0] * 9), lam37()) == 0


def test_gram_matrix_closed_form():
    G = gram_matrix(sl(10))
    for i in range(9):
        for j in range(9):
            assert G[i][j] == Fraction(min(i + 1, j + 1)) - Fraction((i + 1) * (j + 1), 10)


@pytest.mark.parametrize("n", [2, 3, 10, 20, 28])
def test_gram_positive_definite(n):
    assert all(m > 0 for m in leading_minors(gram_matrix(sl(n))))


def test_casimir_values():
    assert casimir(weight(sl(2), 0)) == 0
    assert casimir(weight(sl(2), 6)) == 24
    assert casimir(lam37()) == 48


def test_casimir_positive_off_zero():
    for n, k in [(2, 12), (3, 5), (4, 4)]:
        for w in dominant_weights_at_level(sl(n), k):
            assert (casimir(w) == 0) == w.is_zero
            assert casimir(w) >= 0


def test_weyl_dim():
    assert weyl_dim(weight(sl(2), 6)) == 7
    assert weyl_dim(weight(sl(2), 10)) == 11
    assert weyl_dim(from_fundamentals(sl(10), {1: 1, 9: 1})) == 99


def test_tensor_decompose_examples():
    d = tensor_decompose(weight(sl(2), 6), weight(sl(2), 6))
    assert d == Counter({weight(sl(2), j): 1 for j in range(0, 13, 2)})
    lam = from_fundamentals(sl(10), {1: 1})
    mu = from_fundamentals(sl(10), {9: 1})
    assert tensor_decompose(lam, mu) == Counter({weight(sl(10), *[0] * 9): 1, from_fundamentals(sl(10), {1: 1, 9: 1}): 1})
    assert tensor_decompose(lam37(), weight(sl(10), *[0] * 9)) == Counter({lam37(): 1})


def test_sl2_rep_matrices():
    E, F, H = sl2_rep_matrices(0)
    assert E == F == H == [[0]]
    E, F, H = sl2_rep_matrices(6)
    assert [H[i][i] for i in range(7)] == [6, 4, 2, 0, -2, -4, -6]
    E, F, H = sl2_rep_matrices(1)
    # EF + FE + H^2/2 acts as the Casimir 3/2 on each basis vector
    ef = commutator(E, F)
    assert ef == H
    tr = sum((sum(E[i][k] * F[k][i] + F[i][k] * E[k][i] for k in range(2)) + H[i][i] ** 2 / 2) for i in range(2))
    assert tr == 3


@pytest.mark.parametrize("j", [0, 1, 5, 12, 30])
def test_sl2_bracket(j):
    E, F, H = sl2_rep_matrices(j)
    assert commutator(E, F) == H


def test_dual_weight():
    assert dual_weight(from_fundamentals(sl(10), {3: 1})) == from_fundamentals(sl(10), {7: 1})
    assert dual_weight(lam37()) == lam37()


def test_scalar_tables():
    assert (B2.dim, B2.dual_coxeter) == (10, 3)
    assert (G2.dim, G2.dual_coxeter) == (14, 4)
    assert parse_algebra("sl(10)") == sl(10)
    with pytest.raises(UnsupportedFamily):
        B2.require_a()
    with pytest.raises(ValueError):
        parse_algebra("E8")
