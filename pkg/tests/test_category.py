import json
import math

import numpy as np
import pytest

from quantum3 import builtins
from quantum3.category import (CategoryError, FormatError, FusionRing, ModularData, SphericalData,
                               category_from_json, category_to_json, check_hexagon, check_orthonormality,
                               check_pentagon, check_ribbon, delta_pm, global_dim, is_modular, load_category,
                               s_matrix, save_category, validate, validate_fusion_ring)
from oracles import s_matrix_formula

PHI = (1 + math.sqrt(5)) / 2


def test_fusion_ring_builtins_valid(any_cat):
    assert validate_fusion_ring(any_cat.ring) == []


def test_fusion_ring_detects_broken_unit():
    ring = FusionRing.from_triples(2, [(0, 1, 1), (1, 0, 1), (1, 1, 0)], [0, 1])
    axioms = {v.axiom for v in validate_fusion_ring(ring)}
    assert "unit" in axioms


def test_fusion_ring_detects_bad_dual():
    ring = FusionRing.from_triples(2, [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)], [0, 0])
    assert any(v.axiom == "duality" for v in validate_fusion_ring(ring))


def test_fusion_ring_detects_nonassociative():
    # a a = 1 + b, a b = b a = a, b b = 1 + a: (a a) b != a (a b)
    triples = [(0, i, i) for i in range(3)] + [(i, 0, i) for i in (1, 2)]
    triples += [(1, 1, 0), (1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 2, 0), (2, 2, 1)]
    ring = FusionRing.from_triples(3, triples, [0, 1, 2])
    assert any(v.axiom == "associativity" for v in validate_fusion_ring(ring))


@pytest.mark.parametrize("name,dim", [("vec_z2", 2), ("vec_z3", 3), ("fibonacci", 2 + PHI), ("ising", 4)])
def test_global_dim(name, dim):
    assert abs(global_dim(builtins.builtin(name)) - dim) < 1e-12


def test_validators_pass(any_cat):
    report = validate(any_cat, 1e-10)
    assert report.ok, report.lines()
    assert report.residuals["pentagon"] < 1e-12
    assert report.residuals["orthonormality"] < 1e-12


def test_modular_validators(mod_cat):
    assert check_hexagon(mod_cat) < 1e-12
    assert check_ribbon(mod_cat) < 1e-12


def test_perturbed_sixj_fails_pentagon():
    fib = builtins.fibonacci()
    g = np.array(fib.sixj)
    g[1, 1, 1, 1, 1, 1] *= 1.01
    bad = SphericalData(fib.ring, fib.qdim, g)
    assert check_pentagon(bad) > 1e-4
    assert check_orthonormality(bad) > 1e-4
    report = validate(bad)
    assert not report.ok
    assert any("pentagon" in line and "FAIL" in line for line in report.lines())


def test_wrong_braiding_fails_hexagon():
    fib = builtins.fibonacci()
    r = np.array(fib.rsym)
    r[1, 1, 1] *= -1
    bad = ModularData(fib.base, r, fib.twist)
    assert check_hexagon(bad) > 1e-3
    assert not validate(bad).ok


def test_missing_entry_is_reported():
    fib = builtins.fibonacci()
    mask = np.array(fib.base.sixj_mask)
    mask[1, 1, 1, 1, 1, 1] = False
    base = SphericalData(fib.ring, fib.qdim, fib.sixj, mask)
    with pytest.raises(CategoryError, match="missing"):
        check_pentagon(base)
    assert not validate(base).ok


def test_fibonacci_sixj_golden():
    fib = builtins.fibonacci()
    # stored tetrahedral symbol and the associator entry it comes from
    assert abs(fib.sixj[1, 1, 1, 1, 1, 1] + 1 / PHI ** 2) < 1e-12
    rows, cols, block = fib.base.f_matrix(1, 1, 1, 1)
    assert rows == cols == [0, 1]
    assert abs(block[1, 1] + 1 / PHI) < 1e-12
    assert abs(block[0, 0] - 1 / PHI) < 1e-12


def test_fmove_inverse(any_cat):
    base = any_cat.base if isinstance(any_cat, ModularData) else any_cat
    r = base.rank
    for a, b, c, d in np.ndindex(r, r, r, r):
        rows, cols, m = base.f_matrix(a, b, c, d)
        if rows:
            inv = base.fmove_inverse[a, b, c, d][np.ix_(cols, rows)]
            assert np.allclose(m @ inv, np.eye(len(rows)))


def test_s_matrix_matches_formula(mod_cat):
    expected = s_matrix_formula(mod_cat.ring.fusion, mod_cat.dual, mod_cat.qdim, mod_cat.twist)
    assert np.max(np.abs(s_matrix(mod_cat) - expected)) < 1e-10


def test_s_matrix_unitary_after_normalization(mod_cat):
    s = s_matrix(mod_cat) / math.sqrt(global_dim(mod_cat).real)
    assert np.allclose(s @ s.conj().T, np.eye(mod_cat.rank))


def test_delta_product(mod_cat):
    dp, dm = delta_pm(mod_cat)
    assert abs(dp * dm - global_dim(mod_cat)) < 1e-10


def test_modularity():
    assert is_modular(builtins.fibonacci())
    assert is_modular(builtins.ising())
    assert not is_modular(builtins.vec_zn_symmetric(2))
    assert is_modular(builtins.vec_zn_symmetric(1))


def test_json_round_trip(any_cat, tmp_path):
    path = tmp_path / "cat.json"
    save_category(any_cat, path)
    back = load_category(path)
    assert type(back) is type(any_cat)
    assert np.allclose(back.sixj, any_cat.sixj)
    assert np.allclose(back.qdim, any_cat.qdim)
    if isinstance(any_cat, ModularData):
        assert np.allclose(back.rsym, any_cat.rsym)
        assert np.allclose(back.twist, any_cat.twist)
    assert category_to_json(back) == category_to_json(any_cat)


def _fib_json():
    return category_to_json(builtins.fibonacci())


def test_unknown_field_rejected():
    obj = _fib_json()
    obj["colour"] = 1
    with pytest.raises(FormatError, match="colour"):
        category_from_json(obj, "x.json")


def test_missing_field_names_field():
    obj = _fib_json()
    del obj["qdim"]
    with pytest.raises(FormatError) as exc:
        category_from_json(obj, "x.json")
    assert exc.value.field_name == "qdim"
    assert "x.json" in str(exc.value)


def test_bad_entry_names_index():
    obj = _fib_json()
    obj["sixj"][2] = [0, 0, 0, 0, 0, 0, 1.0]
    with pytest.raises(FormatError) as exc:
        category_from_json(obj, "x.json")
    assert (exc.value.field_name, exc.value.index) == ("sixj", 2)
    assert "index 2" in str(exc.value)


def test_inadmissible_entry_rejected():
    obj = _fib_json()
    obj["sixj"].append([0, 1, 0, 0, 0, 0, 1.0, 0.0])
    with pytest.raises(FormatError, match="not admissible"):
        category_from_json(obj)


def test_label_out_of_range():
    obj = _fib_json()
    obj["fusion"][0] = [0, 0, 5]
    with pytest.raises(FormatError) as exc:
        category_from_json(obj)
    assert exc.value.field_name == "fusion"


def test_rsym_without_twist_rejected():
    obj = _fib_json()
    del obj["twist"]
    with pytest.raises(FormatError, match="together"):
        category_from_json(obj)


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"rank": 2,\n "dual": [0, 1\n')
    with pytest.raises(FormatError, match="line"):
        load_category(path)


def test_spherical_only_file(tmp_path):
    path = tmp_path / "z2.json"
    save_category(builtins.vec_zn(2), path)
    assert "rsym" not in json.loads(path.read_text())
    assert isinstance(load_category(path), SphericalData)


def test_unit_violation_index():
    ring = FusionRing.from_triples(2, [(0, 0, 0), (1, 0, 1), (1, 1, 0)], [0, 1])
    assert any(v.axiom == "unit" and v.indices == (0, 1) for v in validate_fusion_ring(ring))


def test_s_matrix_examples():
    fib = builtins.fibonacci()
    s = s_matrix(fib)
    assert np.allclose(s, [[1, PHI], [PHI, -1]], atol=1e-9)
    assert abs(np.linalg.det(s) - (-1 - PHI ** 2)) < 1e-9
    for cat in (fib, builtins.ising()):
        assert np.allclose(s_matrix(cat)[0], cat.qdim)
    assert np.allclose(s_matrix(builtins.vec_zn_symmetric(2)), np.ones((2, 2)))


def test_delta_examples():
    assert np.allclose(delta_pm(builtins.vec_zn_symmetric(2)), (2, 2))
    dp, dm = delta_pm(builtins.ising())
    assert abs(dp - dm) > 1e-3
    assert abs(dp * dm - 4) < 1e-9


def test_trivial_group():
    z1 = builtins.vec_zn(1)
    assert global_dim(z1) == 1
    assert validate(z1).ok
