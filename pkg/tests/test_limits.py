import pytest

from nodalmirror.floer import E, F_, FloerClass, Scenario, StageOverflow, U
from nodalmirror.limits import (A_RING, R2_RING, R_RING, closed_odd_model, element, limit_eq,
                                limit_product, punctured_odd_model, push, scenario_ring, unit,
                                verify_graded_module, verify_graded_ring, verify_module_structure,
                                verify_ring_presentation)

S2 = Scenario(2)


def test_push_examples():
    assert push(element(S2, F_(), 1), 1) == element(S2, E(1), 2, 2) + element(S2, F_(), 2)
    assert push(element(S2, E(1), 2), 1).cls == (element(S2, E(1), 3) + element(S2, E(2), 3)).cls
    x = element(S2, E(1), 2)
    assert push(x, 0) == x
    with pytest.raises(StageOverflow):
        push(x, 20)


def test_limit_equality():
    x = element(S2, E(1), 3)
    assert limit_eq(x, push(x, 1), 6)
    assert not limit_eq(element(S2, F_(), 1), element(S2, E(1), 2), 6)
    y, z = element(S2, E(1), 2), element(S2, E(1), 3)
    rel = limit_product(y, z) - limit_product(limit_product(y, y), y) - limit_product(z, z)
    assert limit_eq(rel, rel.scale(0), 6)
    assert limit_eq(rel, element(S2, F_(), 6).scale(0), 6)


def test_limit_products():
    assert limit_product(element(S2, E(1), 2), element(S2, E(1), 3)) == element(S2, E(2), 5)
    sp = Scenario(2, punctures=1)
    assert limit_product(element(sp, U(1), 1), element(sp, U(1), 1)) == element(sp, U(2), 2)
    x = element(S2, E(1), 3)
    assert limit_eq(limit_product(x, element(S2, F_(), 1)), push(x, 1), 4)
    assert limit_product(unit(S2), x) == x


@pytest.mark.parametrize("s", [Scenario(2), Scenario(3), Scenario(2, punctures=1),
                               Scenario(2, punctures=2), Scenario(3, circles=2)],
                         ids=["closed2", "closed3", "punct1", "punct2", "multi"])
def test_even_limit_presentations(s):
    target, gens = scenario_ring(s)
    rep = verify_ring_presentation(s, target, gens, 8, 4)
    assert rep.passed, rep.to_text()
    assert rep.provenance["certified_at_stage"] == 12


def test_even_limit_needs_slack():
    target, gens = scenario_ring(S2)
    with pytest.raises(StageOverflow):
        verify_ring_presentation(S2, target, gens, 8, 0)


def test_wrong_target_is_rejected():
    target, gens = scenario_ring(S2)
    bad = type(A_RING)((("Y", 2), ("Z", 3)), ("Y*Z - Y^3 + Z^2",))
    rep = verify_ring_presentation(S2, bad, gens, 8, 4)
    assert not rep.find("relations").passed


@pytest.mark.parametrize("g", [2, 3])
def test_closed_odd_module(g):
    s = Scenario(g)
    rep = verify_module_structure(s, closed_odd_model(s, 8), 8, 4)
    assert rep.passed, rep.to_text()
    assert rep.find("spanning").dims_a == [1 + 2 * g - 2, 0, 1, 1, 1, 1, 1, 1, 1]


def test_punctured_model_action_example():
    s = Scenario(2, punctures=1)
    m = punctured_odd_model(s, 8)
    i = m.labels.index("(W^1,-e1)")
    res = m.action("Y", i)
    # Y*(W, -1) = (W^2 - W^3, 0), rewritten in the tuple basis
    assert {m.labels[j]: c for j, c in res.items()} == {"(W^2,-e1)": 1, "(W^3,-e1)": -1}


@pytest.mark.parametrize("k", [1, 2])
def test_punctured_odd_module_only_disagrees_on_t_times_base(k):
    """Every check passes except T_j * (1,0): the Floer side gives v_{1,j}, the model 0."""
    s = Scenario(2, punctures=k)
    rep = verify_module_structure(s, punctured_odd_model(s, 8), 8, 4)
    failing = rep.failures()
    assert [c.name for c in failing] == ["action"]
    assert {w["element"] for w in failing[0].witnesses} == {"(1,0)"}
    assert {w["generator"] for w in failing[0].witnesses} == ({"T"} if k == 1 else {"T1", "T2"})


def test_graded_rings():
    s = Scenario(2)
    gens = {"X": FloerClass.of(s, F_(), 1), "Y": FloerClass.of(s, E(1), 2), "Z": FloerClass.of(s, E(1), 3)}
    rep = verify_graded_ring(s, R_RING, gens, 10)
    assert rep.passed, rep.to_text()
    assert verify_graded_module(s, R_RING, gens, 8).passed
    s16 = Scenario(2, max_stage=16)
    gens2 = {"X": FloerClass.of(s16, F_(), 2), "Y": FloerClass.of(s16, E(1), 2),
             "Z": FloerClass.of(s16, E(1), 4)}
    assert verify_graded_ring(s16, R2_RING, gens2, 8, step=2).passed
