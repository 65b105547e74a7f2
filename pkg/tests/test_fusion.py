from collections import Counter

import pytest

from mirrorx.errors import BudgetExceeded
from mirrorx.fusion import FusionRing, fusion_iso, kac_walton, sl2_fusion
from mirrorx.levelrank import BranchingSpectrum, branching_spectrum
from mirrorx.liealg import from_fundamentals, sl


def test_sl2_fusion_examples():
    assert sl2_fusion(10, 6, 6) == [0, 2, 4, 6, 8]
    assert all(sl2_fusion(10, 0, j) == [j] for j in range(11))
    assert all(sl2_fusion(10, 10, j) == [10 - j] for j in range(11))


def test_kac_walton_sl10():
    w = from_fundamentals(sl(10), {3: 1, 7: 1})
    zero = from_fundamentals(sl(10), {})
    assert kac_walton(w, w, 2)[zero] == 1
    assert kac_walton(zero, w, 2) == Counter({w: 1})


def test_kac_walton_sl28_simple_current():
    a = from_fundamentals(sl(28), {5: 1, 23: 1})
    b = from_fundamentals(sl(28), {14: 2})
    assert kac_walton(a, b, 2) == Counter({from_fundamentals(sl(28), {9: 1, 19: 1}): 1})


def test_kac_walton_budget():
    with pytest.raises(BudgetExceeded):
        kac_walton(from_fundamentals(sl(30), {}), from_fundamentals(sl(30), {}), 3)


@pytest.mark.parametrize("n,size", [(10, 6), (28, 15)])
def test_fusion_iso(n, size):
    rep = fusion_iso(branching_spectrum(2, n))
    assert rep.triples_checked == size**3
    assert rep.passed and not rep.mismatches


def test_fusion_iso_vacuum_only():
    spec = branching_spectrum(2, 10)
    rep = fusion_iso(BranchingSpectrum(2, 10, 0, spec.pairs[:1]))
    assert rep.passed and rep.triples_checked == 1


def test_sl2_multiplicities_zero_or_one():
    for k in range(1, 29):
        ring = FusionRing.build(2, k)
        assert all(c in (0, 1) for row in ring.table.values() for c in row.values())


@pytest.mark.parametrize("n,k", [(2, 10), (3, 4), (4, 3), (10, 2)])
def test_ring_axioms(n, k):
    ring = FusionRing.build(n, k)
    assert len(ring.basis) <= 66
    assert ring.is_closed()
    assert ring.check_commutative()
    assert ring.check_unit()
    assert ring.check_duality()


@pytest.mark.parametrize("n,k", [(2, 10), (3, 4), (4, 3)])
def test_ring_associative(n, k):
    assert FusionRing.build(n, k).check_associative() == []


def test_table_output_sorted_and_stable():
    ring = FusionRing.build(2, 3)
    assert ring.to_json() == FusionRing.build(2, 3).to_json()
    assert ring.format_table().splitlines()[0].startswith("0 x 0")
