import json
from fractions import Fraction

import pytest

from nodalmirror.bside import cubic_w, cubic_y, cubic_z, extend_field, sections_vanishing_on
from nodalmirror.cech import build_complex, is_global_section
from nodalmirror.curves import build_mirror
from nodalmirror.ratfun import RatFun
from nodalmirror.verify import CheckSpec, check_bmodel_theorems, check_closed_string, check_homogeneous


def test_named_functions_in_other_coordinates():
    # with the puncture at q = 2 the coordinate is u = -x/2; at x = -1, u = 1/2
    assert cubic_y(2).value(-1) == Fraction(2, 9)
    assert cubic_z(2).value(-1) == Fraction(2, 27)
    assert cubic_y(-1) * RatFun.linear(-1) ** 2 == RatFun.x(1)
    w = cubic_w(-1)
    assert w.value(0) == 0 and w.coeff_at_infinity(0) == 1


def test_extension_of_rotation_field():
    cfg = build_mirror(3, "nodal")[0]
    cx = build_complex(cfg, "Tbal", 8)
    tau = extend_field(cx, {"D1a": RatFun.x(1)})
    assert tau.on("D1a") == RatFun.x(1)
    assert is_global_section(cx, tau)
    assert len(sections_vanishing_on(cx, ["D1a"])) == 2


def test_spec_validation():
    with pytest.raises(ValueError):
        CheckSpec(2, "punctured")
    with pytest.raises(ValueError):
        CheckSpec(2, N=10, N2=10)
    with pytest.raises(ValueError):
        CheckSpec(2, "sideways")


def test_closed_string_genus_two():
    rep = check_closed_string(CheckSpec(2))
    assert rep.passed, rep.to_text()
    assert rep.find("even:dims").dims_target == [1, 0, 1, 1, 1, 1, 1, 1, 1]
    assert rep.find("odd:filtered_dims").dims_b == [3, 3, 4, 5, 6, 7, 8, 9, 10]


def test_closed_string_punctured_even_leg():
    rep = check_closed_string(CheckSpec(2, "punctured", punctures=1), legs=("even",))
    assert rep.passed, rep.to_text()
    assert rep.find("even:dims").dims_b == [1, 1, 2, 2, 2, 2, 2, 2, 2]


def test_punctured_odd_leg_b_side_matches_model():
    rep = check_closed_string(CheckSpec(2, "punctured", punctures=1), legs=("odd",))
    b_side = [c for c in rep.checks if c.name.startswith("odd:B:")]
    assert b_side and all(c.passed for c in b_side)
    assert rep.find("odd:filtered_dims").passed
    assert [c.name for c in rep.failures()] == ["odd:A:action"]


def test_multi_twist_odd_leg_reports_disagreement():
    rep = check_closed_string(CheckSpec(3, "multi", circles=2))
    assert all(c.passed for c in rep.checks if c.name.startswith("even:"))
    failed = {c.name for c in rep.failures()}
    assert "odd:A:action" in failed and "odd:B:action" in failed
    dims = rep.find("odd:filtered_dims")
    # both computed sides agree from weight 1 on; only the model's weight-0 count differs
    assert dims.dims_a[1:] == dims.dims_b[1:] == dims.dims_target[1:]


def test_homogeneous_power_one():
    rep = check_homogeneous(2, 1, 8)
    assert rep.passed, rep.to_text()
    assert rep.find("even:dims").dims_b == [2, 1, 2, 3, 4, 5, 6, 7, 8]
    assert rep.find("odd:dims").dims_b[0] == 4


def test_homogeneous_power_two():
    rep = check_homogeneous(2, 2, 8, legs=("even",))
    assert rep.passed, rep.to_text()
    assert "renaming" in rep.provenance


@pytest.mark.parametrize("g,variant,expect", [(2, "nodal", 1), (3, "nodal", 2), (2, "open", 1)])
def test_bmodel_statements(g, variant, expect):
    rep = check_bmodel_theorems(g, variant)
    assert rep.passed, rep.to_text()
    assert rep.find("h1_O").dims_b == [expect]


def test_reports_are_deterministic():
    a = check_closed_string(CheckSpec(2), legs=("even",)).to_json()
    b = check_closed_string(CheckSpec(2), legs=("even",)).to_json()
    assert a == b
    assert json.loads(a)["verdict"] == "pass"
