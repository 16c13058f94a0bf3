import json
from fractions import Fraction as F

import pytest

from nodalmirror.curves import (INF, Component, ConfigError, Configuration, Node, build_mirror,
                                chi_O_oracle, parse_builder, parse_point, single_line, validate)


def theta():
    comps = tuple(Component(c, (), (0, INF)) for c in ("P", "Q", "R"))
    nodes = (Node("a", (("P", 0), ("Q", 0), ("R", 0))), Node("b", (("P", INF), ("Q", INF), ("R", INF))))
    return Configuration(comps, nodes)


def test_theta_is_valid():
    assert validate(theta()) == []
    assert theta().betti1() == 2


def test_two_branch_node_rejected():
    c = theta()
    bad = Configuration(c.components, (Node("a", (("P", 0), ("Q", 0))),) + c.nodes[1:])
    assert any("not trivalent" in e for e in validate(bad))


def test_mark_on_puncture_rejected():
    comps = (Component("P", (-1,), (0, -1)),)
    errs = validate(Configuration(comps, ()))
    assert any("repeated point" in e for e in errs)


def test_unattached_mark_and_unknown_component():
    c = Configuration((Component("P", (), (0,)),), (Node("n", (("P", 0), ("Q", 0), ("P", 1))),))
    errs = validate(c)
    assert any("unknown component Q" in e for e in errs)
    assert any("not a mark" in e for e in errs)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_closed_mirror_counts(g):
    c, bundle = build_mirror(g)
    assert len(c.components) == 3 * g - 3
    assert len(c.nodes) == 2 * g - 2
    assert c.betti1() == g
    assert bundle == {"D1a": 1}


def test_genus_two_closed_nodes_meet_every_component():
    c, _ = build_mirror(2)
    for n in c.nodes:
        assert sorted(b for b, _ in n.branches) == ["D1a", "D1b", "E1"]


def test_nodal_puncture_placement():
    c, _ = build_mirror(2, "nodal")
    assert c.component("D1a").punctures == (F(-1),)
    c3, _ = build_mirror(3, "nodal", ell=2)
    assert [x.id for x in c3.components if x.punctures] == ["D1a", "D2a"]
    with pytest.raises(ConfigError):
        build_mirror(2, "nodal", ell=2)


def test_open_builder_counts():
    c, _ = build_mirror(2, "open", k=1)
    lines = [x for x in c.components if x.is_affine_line]
    assert len(c.components) == 5 and len(lines) == 1 and len(c.nodes) == 3
    assert validate(c) == []


def test_builder_strings():
    assert parse_builder("nodal:g=3,l=1").label == "nodal:g=3,l=1"
    assert parse_builder("open:g=2,k=2").label == "open:g=2,k=2"
    for bad in ("nodal:l=1", "nodal:g=x", "weird:g=2", "closed:g=2,q=1"):
        with pytest.raises(ConfigError):
            parse_builder(bad)


def test_euler_oracle():
    assert chi_O_oracle(build_mirror(2)[0]) == -1
    assert chi_O_oracle(build_mirror(3)[0]) == -2
    assert chi_O_oracle(single_line()) == 1
    with pytest.raises(ConfigError):
        chi_O_oracle(build_mirror(2, "nodal")[0])


def test_json_round_trip():
    c, _ = build_mirror(3, "open", k=2)
    again = Configuration.from_json(c.to_json())
    assert again == c
    assert json.loads(c.to_json())["bundle"] == {"D1a": 1}
    with pytest.raises(ConfigError):
        Configuration.from_dict({"nodes": []})


def test_points():
    assert parse_point("oo") == INF and parse_point("-1/2") == F(-1, 2)
    with pytest.raises(ConfigError):
        parse_point("zz")
