import pytest

from nodalmirror.floer import (CVAN, E, F_, G, H, K_, MORSE, U, V, VARPHI, FloerClass, IndexOverflow,
                               Scenario, StageOverflow, basis, check_product_laws, graded_dims, product,
                               product_table, seidel_class)

S2 = Scenario(2)


def cls(s, gen, d, c=1):
    return FloerClass.of(s, gen, d, c)


def test_bases():
    assert basis(S2, 3, 0) == [F_(), E(1), E(2)]
    assert basis(S2, 3, 1) == [G(1), H(1), H(2), MORSE(1), MORSE(2)]
    sp = Scenario(2, punctures=1, index_cutoff=4)
    assert basis(sp, 2, 0) == [F_(), E(1), U(1), U(2), U(3), U(4)]
    assert basis(S2, 0, 0) == [F_(), K_()]
    assert basis(S2, 0, 1) == [G(1), CVAN(), MORSE(1), MORSE(2)]


@pytest.mark.parametrize("g", [2, 3])
def test_closed_dimensions(g):
    s = Scenario(g, max_stage=10)
    assert graded_dims(s, 0) == (2, 2 * g)
    for d in range(1, 11):
        assert graded_dims(s, d) == (d, d + 2 * g - 2)


def test_dimension_examples():
    assert graded_dims(S2, 1) == (1, 3)
    assert graded_dims(Scenario(3), 4) == (4, 8)


def test_product_examples():
    assert product(cls(S2, E(1), 2), cls(S2, E(1), 2)) == cls(S2, E(2), 4)
    assert product(cls(S2, F_(), 1), cls(S2, F_(), 1)) == cls(S2, E(1), 2, 2) + cls(S2, F_(), 2)
    assert not product(cls(S2, H(1), 2), cls(S2, H(1), 3))
    assert not product(cls(S2, K_(), 0), cls(S2, E(1), 2))
    sp = Scenario(2, punctures=1)
    assert product(cls(sp, U(1), 1), cls(sp, VARPHI(1), 1)) == -cls(sp, V(1), 2)


def test_seidel_class_is_f_at_stage_one():
    for s in (S2, Scenario(2, punctures=2), Scenario(3, circles=2)):
        assert seidel_class(s) == cls(s, F_(), 1)


def test_stage_and_index_cutoffs():
    with pytest.raises(StageOverflow):
        basis(Scenario(2, max_stage=4), 5, 0)
    sp = Scenario(2, punctures=1, index_cutoff=3)
    with pytest.raises(IndexOverflow):
        product(cls(sp, U(3), 1), cls(sp, U(2), 1))
    with pytest.raises(ValueError):
        basis(sp, 0, 0)


def test_scenario_validation():
    for kw in ({"genus": 1}, {"genus": 2, "circles": 3}, {"genus": 3, "circles": 2, "punctures": 1}):
        with pytest.raises(ValueError):
            Scenario(**kw)


def test_product_table_rows():
    rows = product_table(S2, 2)
    assert ("f^1", "f^1", "f^2 + 2*e_1^2") in rows
    assert ("K", "K", "0") in rows
    assert len(rows) == len(set(rows))


@pytest.mark.parametrize("s", [
    Scenario(2, max_stage=8), Scenario(3, max_stage=8),
    Scenario(2, punctures=1, index_cutoff=6, max_stage=8),
    Scenario(2, punctures=2, index_cutoff=6, max_stage=8),
    Scenario(3, circles=2, max_stage=8)], ids=["closed2", "closed3", "punct1", "punct2", "multi"])
def test_product_laws(s):
    report = check_product_laws(s, 8)
    assert report.passed, report.to_text()
