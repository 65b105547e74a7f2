from fractions import Fraction

import pytest

from mirrorx.affinechar import (
    AffineModuleLabel,
    QSeries,
    WindowPolicy,
    affine_graded_dims,
    central_charge,
    conformal_weight,
    eta_series,
    growth_classify,
    label,
    level1_character_sln,
    partition_power_series,
    sl2_affine_character,
    sl2_extension_character,
    theta_series_a,
)
from mirrorx.errors import BudgetExceeded, IncompatibleOffsets
from mirrorx.liealg import B2, G2, dominant_weights_at_level, dual_weight, from_fundamentals, sl


def test_central_charges():
    assert central_charge(label(sl(2), 10)) == Fraction(5, 2)
    assert central_charge(label(sl(10), 2)) == Fraction(33, 2)
    assert central_charge(label(sl(20), 1)) == 19
    assert central_charge(AffineModuleLabel(G2, 1)) == Fraction(14, 5)
    assert central_charge(AffineModuleLabel(B2, 1)) == Fraction(5, 2)
    assert central_charge(label(sl(28), 2)) == Fraction(261, 5)


def test_conformal_weights():
    assert conformal_weight(AffineModuleLabel(sl(10), 2, from_fundamentals(sl(10), {3: 1, 7: 1}))) == 2
    assert conformal_weight(label(sl(2), 10, 6)) == 1
    assert conformal_weight(label(sl(10), 2)) == 0


def test_conformal_weight_diagram_symmetry():
    for w in dominant_weights_at_level(sl(5), 3):
        assert conformal_weight(AffineModuleLabel(sl(5), 3, w)) == conformal_weight(AffineModuleLabel(sl(5), 3, dual_weight(w)))


def test_eta_series():
    e = eta_series(1, 3)
    assert e.lead_exp == Fraction(1, 24)
    assert list(e.coeffs) == [1, -1, -1, 0]
    assert list(eta_series(0, 4).coeffs) == [1, 0, 0, 0, 0]
    assert eta_series(24, 1).coeffs[1] == -24


def test_theta_series():
    assert list(theta_series_a(2, 0, 4).coeffs) == [1, 2, 0, 0, 2]
    assert theta_series_a(20, 0, 1).coeffs[:2] == (1, 380)


def test_level1_characters():
    assert level1_character_sln(20, 0, 1).integer_coeffs() == [1, 399]
    assert level1_character_sln(2, 0, 1).integer_coeffs() == [1, 3]


def test_sl2_character_values():
    assert sl2_affine_character(10, 0, 2).integer_coeffs()[1] == 3
    assert sl2_affine_character(10, 6, 2).integer_coeffs()[0] == 7


def test_frenkel_kac_cross_oracle():
    a = sl2_affine_character(1, 0, 10)
    b = level1_character_sln(2, 0, 10)
    assert a.lead_exp == b.lead_exp
    assert a.coeffs == b.coeffs


@pytest.mark.parametrize("k", [1, 2, 5, 10])
def test_freudenthal_matches_weyl_kac(k):
    for j in range(k + 1):
        dims = affine_graded_dims(label(sl(2), k, j), 5)
        assert dims == sl2_affine_character(k, j, 5).integer_coeffs()


def test_freudenthal_examples():
    assert affine_graded_dims(label(sl(10), 2), 1) == [1, 99]
    w = from_fundamentals(sl(10), {3: 1, 7: 1})
    # Λ^3 ⊗ Λ^7 = (Λ3+Λ7) ⊕ (Λ2+Λ8) ⊕ (Λ1+Λ9) ⊕ 0, and dim(Λ2+Λ8) = 45² - 99 - 1
    assert affine_graded_dims(AffineModuleLabel(sl(10), 2, w), 0) == [120 * 120 - (45 * 45 - 100) - 99 - 1]


def test_freudenthal_budget():
    with pytest.raises(BudgetExceeded):
        affine_graded_dims(label(sl(2), 10), 50)


def test_incompatible_offsets():
    with pytest.raises(IncompatibleOffsets):
        QSeries(Fraction(0), (Fraction(1),)) + QSeries(Fraction(1, 2), (Fraction(1),))


def test_extension_character_is_integral():
    ch = sl2_extension_character(10, [0, 6], 10)
    assert ch.integer_coeffs()[:4] == [1, 10, 30, 85]


def test_growth_verdicts():
    ch = sl2_extension_character(10, [0, 6], 200)
    base = eta_series(Fraction(5, 2), 200) * ch
    assert growth_classify(base, WindowPolicy(square=True)).classification == "polynomial"
    assert growth_classify(partition_power_series(9, 400)).classification == "super-polynomial"
    assert growth_classify(QSeries(Fraction(0), (Fraction(1),) * 100)).classification == "polynomial"
