from fractions import Fraction as F
from itertools import product

import pytest

from nodalmirror.limits import A_RING, R2_RING, R_RING
from nodalmirror.linalg import Mat, rank
from nodalmirror.polys import (Poly, Presentation, TruncatedAlgebra, fiber_product_oracle,
                               fiber_product_presentation, glued_at_origin, ideal_truncation,
                               monomials_up_to, parse_poly, presentations_isomorphic_via,
                               quotient_dims, tuple_element)

T_RING = Presentation((("T", 1),))


def brute_quotient_dims(p: Presentation, relation: Poly, W: int, graded: bool):
    """Monomials minus the span of monomial multiples of one relation, by direct counting."""
    monos = [e for e in product(*(range(W + 1),) * len(p.generators)) if p.weight(e) <= W]
    idx = {e: i for i, e in enumerate(monos)}
    rows = []
    for m in monos:
        if p.weight(m) + relation.top_weight() > W:
            continue
        row = {}
        for e, c in relation.terms.items():
            row[idx[tuple(a + b for a, b in zip(e, m))]] = c
        rows.append((p.weight(m) + relation.top_weight(), row))
    out = []
    for w in range(W + 1):
        if graded:
            cols = [i for i, e in enumerate(monos) if p.weight(e) == w]
            span = [r for t, r in rows if t == w]
        else:
            cols = [i for i, e in enumerate(monos) if p.weight(e) <= w]
            span = [r for t, r in rows if t <= w]
        pos = {c: j for j, c in enumerate(cols)}
        m = Mat(len(span), len(cols), {(i, pos[c]): v for i, r in enumerate(span) for c, v in r.items()})
        out.append(len(cols) - (rank(m) if span else 0))
    if not graded:
        out = [out[0]] + [out[w] - out[w - 1] for w in range(1, W + 1)]
    return out


def test_monomial_enumeration():
    assert monomials_up_to(A_RING, 5) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1)]
    assert len([e for e in monomials_up_to(R_RING, 6) if R_RING.weight(e) == 6]) == 7
    assert monomials_up_to(T_RING, 3) == [(0,), (1,), (2,), (3,)]


def test_ideal_truncation_of_cubic():
    it = ideal_truncation(R_RING, 7)
    assert it[5] == []
    assert [p.render() for p in it[6]] == ["X*Y*Z - Y^3 - Z^2"]
    assert [p.render() for p in it[7]] == ["X^2*Y*Z - X*Y^3 - X*Z^2"]


@pytest.mark.parametrize("ring,graded", [(R_RING, True), (R2_RING, True), (A_RING, False)])
def test_quotient_dims_against_brute_force(ring, graded):
    assert quotient_dims(ring, 9) == brute_quotient_dims(ring, ring.relations[0], 9, graded)


def test_quotient_dims_values():
    assert quotient_dims(R_RING, 6) == [1, 1, 2, 3, 4, 5, 6]
    # normal forms Y^a and Y^a*Z: one monomial per weight except weight 1
    assert quotient_dims(A_RING, 6) == [1, 0, 1, 1, 1, 1, 1]
    assert quotient_dims(T_RING, 5) == [1] * 6


def test_fiber_product_oracle_and_presentation_agree():
    desc = glued_at_origin([A_RING, T_RING])
    fp = fiber_product_oracle(desc, 8)
    assert fp.dims()[:5] == [1, 1, 2, 2, 2]
    assert fp.mul(tuple_element(fp, ["Y", None]), tuple_element(fp, [None, "T"])) == {}
    pres = fiber_product_presentation(desc.factors)
    assert set(pres.relations) == {pres.poly(t) for t in ("Y*Z - Y^3 - Z^2", "Y*T", "Z*T")}
    emb = {"Y": tuple_element(fp, ["Y", None]), "Z": tuple_element(fp, ["Z", None]),
           "T": tuple_element(fp, [None, "T"])}
    assert presentations_isomorphic_via(pres, fp, emb, 8).passed
    assert quotient_dims(pres, 8) == fp.dims()


def test_double_fiber_product():
    a2 = Presentation((("Y2", 2), ("Z2", 3)), ("Y2*Z2 - Y2^3 - Z2^2",))
    a1 = Presentation((("Y1", 2), ("Z1", 3)), ("Y1*Z1 - Y1^3 - Z1^2",))
    desc = glued_at_origin([a1, a2])
    assert fiber_product_oracle(desc, 8).dims() == [1, 0, 2, 2, 2, 2, 2, 2, 2]
    assert quotient_dims(fiber_product_presentation(desc.factors), 8) == [1, 0, 2, 2, 2, 2, 2, 2, 2]


def test_identity_isomorphism():
    alg = TruncatedAlgebra.from_presentation(R_RING, 8)
    assert presentations_isomorphic_via(R_RING, alg, {n: alg.element(n) for n in R_RING.names}, 8).passed


def test_missing_relation_is_caught_with_witness():
    alg = TruncatedAlgebra.from_presentation(A_RING, 8)
    free = Presentation((("Y", 2), ("Z", 3)))
    rep = presentations_isomorphic_via(free, alg, {n: alg.element(n) for n in free.names}, 8)
    inj = rep.find("injective")
    assert not inj.passed and inj.witnesses[0]["weight"] == 6
    assert rep.find("surjective").passed


def test_poly_arithmetic():
    v = R_RING.generators
    p = parse_poly("X*Y*Z - Y^3 - Z^2", v)
    assert p.top_weight() == 6 and p.is_homogeneous()
    assert (p - p) == Poly(v) and not (p - p)
    assert p.evaluate({"X": 1, "Y": 1, "Z": 1}) == -1
    q = parse_poly("(X + 2)^2", v)
    assert q.evaluate({"X": F(1, 2), "Y": 0, "Z": 0}) == F(25, 4)
    with pytest.raises(ValueError):
        parse_poly("X ** Y", v)


def test_presentation_json_round_trip():
    assert Presentation.from_json(R_RING.to_json()) == R_RING
