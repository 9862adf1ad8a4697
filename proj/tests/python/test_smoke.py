import json

import pytest

import atiyah_lab as al


def test_poly_arithmetic():
    a = al.Poly("x1 + 1", 2)
    b = al.Poly("x1 - 1", 2)
    assert a * b == al.Poly("x1^2 - 1", 2)
    assert str(al.Poly("x2 - x1^2", 2)) == "-x1^2 + x2"
    assert al.Poly("x1^2*x2", 2).diff(0) == al.Poly("2*x1*x2", 2)
    assert (a - a).is_zero()


def test_poly_syntax_error():
    with pytest.raises(ValueError, match="position 3"):
        al.Poly("x1^", 1)


def test_linear_solve():
    ok = al.linear_solve([["1", "0"], ["0", "1"]], ["3", "-2"])
    assert ok == {"solvable": True, "solution": ["3", "-2"]}
    bad = al.linear_solve([["1", "1"], ["2", "2"]], ["1", "3"])
    assert not bad["solvable"]
    y = [int(v) for v in bad["certificate"]]
    assert y[0] + 2 * y[1] == 0 and y[0] + 3 * y[1] != 0
    assert len(al.kernel_basis([["0", "0", "0"]])) == 3


def test_atiyah_pair_heisenberg_center():
    doc = {
        "lie_algebra": {"dim": 3, "brackets": [{"i": 2, "j": 3, "coeffs": [[1, "1"]]}]},
        "subalgebra": {"q": 1},
    }
    code, report = al.run("atiyah-pair", doc)
    assert code == 0
    assert report["verdict"] == "vanishes"
    assert "primitive" in report["certificate"]


def test_catalog_inputs_run():
    names = al.catalog_names()
    assert "tangent_bott_2_1" in names and "sl2_borel" in names
    code, report = al.run("check-iis", al.catalog_input("tangent_bott_2_1"))
    assert code == 0
    assert (report["iis1"], report["iis2"], report["iis3"]) == ("pass", "pass", "pass")
    code, report = al.run("rho-star-check", al.catalog_input("action_aff1_line"))
    assert code == 0 and report["identity_holds"]
    code, report = al.run("atiyah-iis", al.catalog_input("abelian_bundle"), degree_bound=0)
    assert code == 3 and report["verdict"] == "none_up_to_degree"


def test_schema_error_names_field():
    doc = {"lie_algebra": {"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": [[2, {"numerator": 1, "denominator": 0}]]}]}}
    with pytest.raises(ValueError, match="denominator"):
        al.run_task("validate", doc)


def test_search_dimension_two_is_empty():
    assert al.search_nonvanishing_pair(2, ["-1", "0", "1"]) is None
    found = json.loads(al.search_nonvanishing_pair(3, ["-1", "0", "1"]))
    code, report = al.run("atiyah-pair", found)
    assert code == 0 and report["verdict"] == "nonzero"
