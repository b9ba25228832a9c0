import json
from fractions import Fraction

import numpy as np
import pytest

import qclone


def test_boolfunc_roundtrip():
    f = qclone.BoolFunc.from_bits("11000011")
    assert f.to_hex() == "c3"
    assert qclone.BoolFunc.from_hex(3, "c3") == f
    assert json.loads(f.to_json()) == {"n": 3, "table_hex": "c3"}
    g = qclone.BoolFunc.from_bits("01000000")
    assert (f ^ g).to_bits() == "10000011"
    assert qclone.overlap(f, g).real == pytest.approx(0.25)


def test_errors():
    with pytest.raises(ValueError):
        qclone.family("A", 2)
    with pytest.raises(qclone.DimensionError):
        qclone.BoolFunc.from_bits("0100") ^ qclone.BoolFunc.from_bits("01000000")
    with pytest.raises(ValueError):
        qclone.simulate("A", trials=0)


def test_family_and_lookup():
    fam = qclone.family("A")
    assert fam["s_f0"] == ["40", "55", "c3"]
    assert qclone.h_set_of("A", qclone.BoolFunc.from_bits("00010101")) is None
    assert qclone.h_set_of("A", qclone.BoolFunc.from_bits("11111111")) == 0


def test_efficiencies():
    rep = qclone.efficiencies("A", 3)
    assert rep["gamma_exact"] == ["7/127", "112/127", "112/127"]
    rep = qclone.efficiencies("B")
    assert [Fraction(x) for x in rep["gamma_exact"]] == [Fraction(1, 7), Fraction(4, 7), Fraction(4, 7)]


def test_generic_optimizer():
    states = np.eye(2, dtype=complex).tolist()
    assert qclone.max_efficiencies(states) == pytest.approx([1.0, 1.0])
    phase = [[(-1) ** int(b) / np.sqrt(8) for b in bits] for bits in ("01000000", "01010101", "11000011")]
    g = qclone.max_efficiencies(phase)
    assert g == pytest.approx([7 / 127, 112 / 127, 112 / 127], abs=1e-9)
    assert abs(qclone.residual_min_eigenvalue(phase, g)) < 1e-9
    avg = qclone.max_efficiencies(phase, objective="average")
    assert sum(avg) > sum(g)


def test_simulation_is_reproducible():
    a = qclone.simulate("B", trials=20_000, seed=3)
    b = qclone.simulate("B", trials=20_000, seed=3)
    assert a == b
    score = a["reports"][1]
    assert abs(score["rate"] - score["analytic"]) < score["ci99"]
