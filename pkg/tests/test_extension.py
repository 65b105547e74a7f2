from fractions import Fraction

import pytest

from mirrorx.affinechar import WindowPolicy, eta_series, growth_classify, partition_power_series, sl2_extension_character
from mirrorx.extension import (
    OUT_OF_SCOPE,
    ExtensionInstance,
    central_charge_check,
    character_identity,
    full_certificate,
    get_instance,
    growth_dichotomy,
    integrality_check,
    mirror_pairing,
    preset_instances,
    weight_one_check,
    weight_one_dimension,
)
from mirrorx.liealg import from_fundamentals, sl, weight


def test_presets():
    p = preset_instances()
    assert set(p) == {"B2", "G2", "sl10-mirror", "sl28-mirror"}
    assert [w.coords[0] for w in p["G2"].summands] == [0, 10, 18, 28]
    assert set(p["sl10-mirror"].summands) == {from_fundamentals(sl(10), {}), from_fundamentals(sl(10), {3: 1, 7: 1})}
    assert set(p["sl28-mirror"].summands) == {
        from_fundamentals(sl(28), t) for t in ({}, {5: 1, 23: 1}, {9: 1, 19: 1}, {14: 2})
    }
    for name, inst in p.items():
        assert get_instance(inst.mirror).mirror == name


def test_unknown_preset():
    with pytest.raises(KeyError):
        get_instance("E8")


def test_instance_invariants():
    with pytest.raises(ValueError):
        ExtensionInstance("x", sl(2), 10, (weight(sl(2), 0), weight(sl(2), 6)), (1, -1), "B2")
    with pytest.raises(ValueError):
        ExtensionInstance("x", sl(2), 10, (weight(sl(2), 6),), (1,), "B2")


@pytest.mark.parametrize(
    "name,weights",
    [("sl10-mirror", ["0", "2"]), ("G2", ["0", "1", "3", "7"]), ("B2", ["0", "1"]), ("sl28-mirror", ["0", "4", "6", "7"])],
)
def test_integrality(name, weights):
    rep = integrality_check(get_instance(name))
    assert rep.passed
    assert sorted(rep.details["conformalWeights"].values(), key=Fraction) == weights


def test_integrality_violation():
    inst = ExtensionInstance("x", sl(2), 10, (weight(sl(2), 0), weight(sl(2), 4)), (1, 1), "B2")
    rep = integrality_check(inst)
    assert not rep.passed and rep.status == "fail"


@pytest.mark.parametrize("name,dim", [("B2", 10), ("G2", 14), ("sl10-mirror", 99), ("sl28-mirror", 783)])
def test_weight_one(name, dim):
    inst = get_instance(name)
    assert weight_one_dimension(inst) == dim
    assert weight_one_check(inst).passed


def test_weight_one_mismatch():
    inst = ExtensionInstance("x", sl(2), 10, (weight(sl(2), 0),), (1,), "B2", get_instance("B2").target)
    assert not weight_one_check(inst).passed


@pytest.mark.parametrize("name", ["B2", "G2", "sl10-mirror", "sl28-mirror"])
def test_central_charge_additivity(name):
    assert central_charge_check(get_instance(name)).passed


@pytest.mark.parametrize("name", ["B2", "G2", "sl10-mirror", "sl28-mirror"])
def test_mirror_pairing(name):
    inst = get_instance(name)
    assert set(mirror_pairing(inst).values()) == set(get_instance(inst.mirror).summands)


def test_character_identity_depth_three():
    lhs, rhs = character_identity(2, 10, 3)
    assert lhs == rhs == [1, 399, 36499, 1415500]


def test_growth_dichotomy():
    rep = growth_dichotomy()
    assert rep.passed
    assert rep.details["400"] == {"extension": "polynomial", "heisenberg": "super-polynomial"}


def test_growth_swapped_inputs():
    policy = WindowPolicy(square=True)
    base = eta_series(Fraction(5, 2), 200) * sl2_extension_character(10, [0, 6], 200)
    comp = eta_series(Fraction(5, 2), 200) * partition_power_series(7, 200)
    verdicts = [growth_classify(s, policy).classification for s in (comp, base)]
    assert verdicts == ["super-polynomial", "polynomial"]


@pytest.mark.parametrize("name", ["B2", "G2"])
def test_full_certificate_sl2_side(name):
    cert = full_certificate(name, jobs=1)
    assert cert.passed
    assert cert.to_dict()["kind"] == "certificate"


@pytest.mark.slow
def test_full_certificate_sl28():
    cert = full_certificate("sl28-mirror", jobs=2)
    assert cert.passed
    status = {leg.name: leg.status for leg in cert.legs}
    assert status["lattice"] == status["kz"] == OUT_OF_SCOPE
    assert status["character"] == "pass"


def test_failing_leg_is_reported(monkeypatch):
    import mirrorx.extension as ext

    def boom(inst):
        raise ArithmeticError("broken")

    monkeypatch.setattr(ext, "weight_one_check", boom)
    cert = ext.full_certificate("G2", jobs=1)
    assert not cert.passed
    bad = [leg for leg in cert.legs if not leg.passed]
    assert len(bad) == 1 and "broken" in bad[0].details["error"]
