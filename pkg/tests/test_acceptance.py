"""End-to-end acceptance run: twelve criteria, exact arithmetic, one verdict line each."""
import functools

import pytest

from conftest import ACCEPTANCE_LINES
from nodalmirror.cech import build_complex, cohomology
from nodalmirror.curves import build_mirror, chi_O_oracle
from nodalmirror.floer import E, F_, FloerClass, Scenario, check_product_laws, graded_dims
from nodalmirror.limits import R_RING, scenario_ring, verify_graded_ring, verify_ring_presentation
from nodalmirror.polys import quotient_dims
from nodalmirror.report import CheckRecord, Report
from nodalmirror.verify import CheckSpec, check_bmodel_theorems, check_closed_string, check_homogeneous


def floer_dims() -> Report:
    rep = Report("Floer dimensions")
    for g in (2, 3):
        s = Scenario(g)
        got = [graded_dims(s, d) for d in range(11)]
        want = [(2, 2 * g)] + [(d, d + 2 * g - 2) for d in range(1, 11)]
        rec = rep.add(CheckRecord(f"genus_{g}", side="A", dims_a=[list(x) for x in got],
                                  dims_target=[list(x) for x in want]))
        for d, (a, b) in enumerate(zip(got, want)):
            if a != b:
                rec.fail({"stage": d, "dims": list(a), "expected": list(b)})
    return rep


def product_laws() -> Report:
    rep = Report("product laws up to total stage 8")
    cases = {"closed_g2": Scenario(2), "closed_g3": Scenario(3),
             "punctured_k1": Scenario(2, punctures=1, index_cutoff=6),
             "punctured_k2": Scenario(2, punctures=2, index_cutoff=6),
             "multi_g3_l2": Scenario(3, circles=2)}
    for name, s in cases.items():
        rep.extend(check_product_laws(s, 8), prefix=f"{name}:")
    return rep


def graded_ring() -> Report:
    s = Scenario(2)
    gens = {"X": FloerClass.of(s, F_(), 1), "Y": FloerClass.of(s, E(1), 2),
            "Z": FloerClass.of(s, E(1), 3)}
    rep = verify_graded_ring(s, R_RING, gens, 10)
    rec = rep.add(CheckRecord("quotient_dims", side="A", dims_target=quotient_dims(R_RING, 10)))
    rec.dims_a = rep.find("surjective").dims_a
    if rec.dims_a != rec.dims_target:
        rec.fail({"dims": rec.dims_a})
    return rep


def limit_ring() -> Report:
    rep = Report("even limit, closed")
    for g in (2, 3):
        s = Scenario(g)
        target, gens = scenario_ring(s)
        rep.extend(verify_ring_presentation(s, target, gens, 8, 4), prefix=f"g{g}:")
    return rep


def _both_legs(specs: dict, legs=("even", "odd")) -> Report:
    rep = Report("closed-string comparison")
    for name, spec in specs.items():
        rep.extend(check_closed_string(spec, legs=legs), prefix=f"{name}:")
    return rep


def limit_module() -> Report:
    return _both_legs({f"g{g}": CheckSpec(g, "closed") for g in (2, 3)}, legs=("odd",))


PUNCTURED = {f"k{k}": CheckSpec(2, "punctured", punctures=k) for k in (1, 2)}


def punctured_even() -> Report:
    return _both_legs(PUNCTURED, legs=("even",))


def punctured_odd() -> Report:
    return _both_legs(PUNCTURED, legs=("odd",))


def multi_even() -> Report:
    return _both_legs({"g3_l2": CheckSpec(3, "multi", circles=2)}, legs=("even",))


def bside_nodal() -> Report:
    rep = Report("B-side, nodal")
    for g in (2, 3):
        rep.extend(check_bmodel_theorems(g, "nodal", ell=1, N=10, N2=13), prefix=f"g{g}:")
    return rep


def euler_oracle() -> Report:
    rep = Report("Euler characteristic")
    for g in (2, 3, 4):
        cfg = build_mirror(g, "closed")[0]
        h = cohomology(build_complex(cfg, "O", 10))
        rec = rep.add(CheckRecord(f"genus_{g}", side="B", dims_b=[h.h0_dim, h.h1_dim],
                                  dims_target=[chi_O_oracle(cfg)]))
        if h.h0_dim - h.h1_dim != chi_O_oracle(cfg):
            rec.fail({"h0": h.h0_dim, "h1": h.h1_dim})
    return rep


def homogeneous() -> Report:
    rep = Report("homogeneous rings")
    rep.extend(check_homogeneous(2, 1, 8), prefix="power1:")
    rep.extend(check_homogeneous(2, 2, 8, legs=("even",)), prefix="power2:")
    return rep


def bside_open() -> Report:
    return check_bmodel_theorems(2, "open", k=1, N=10, N2=13)


CRITERIA = {
    "1": ("Floer dims HF^0 = d, HF^1 = d+2g-2, (2, 2g) at d=0", floer_dims),
    "2": ("graded commutativity and associativity, 5 scenarios", product_laws),
    "3": ("graded ring C[X,Y,Z]/(XYZ-Y^3-Z^2) up to weight 10", graded_ring),
    "4": ("even limit C[Y,Z]/(YZ-Y^3-Z^2), g=2,3", limit_ring),
    "5": ("odd limit A + C^(2g-2), both sides, g=2,3", limit_module),
    "6-even": ("punctured even limit and fiber-product oracle, k=1,2", punctured_even),
    "6-odd": ("punctured odd module with balancing and action, k=1,2", punctured_odd),
    "7": ("multi-twist even limit A x_C A, g=3", multi_even),
    "8": ("B-side nodal cohomology and stabilization, g=2,3", bside_nodal),
    "9": ("Euler characteristic oracle, g=2,3,4", euler_oracle),
    "10": ("homogeneous rings, powers 1 and 2", homogeneous),
    "11": ("open surface B-side, g=2, k=1", bside_open),
}


@functools.cache
def run_criterion(key: str) -> Report:
    return CRITERIA[key][1]()


def _record(key: str, ok: bool, detail: str = "") -> None:
    title = CRITERIA[key][0] if key in CRITERIA else detail
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {title}"
    if key in CRITERIA and detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LINES.append(line)
    print(line)


def _check(key: str) -> Report:
    rep = run_criterion(key)
    failed = [c.name for c in rep.failures()]
    _record(key, rep.passed, "failing: " + ", ".join(failed) if failed else "")
    return rep


@pytest.mark.parametrize("key", [k for k in CRITERIA if k != "6-odd"])
def test_criterion(key):
    rep = _check(key)
    assert rep.passed, rep.to_text()
    if key == "6-even":
        names = [c.name for c in rep.checks]
        for k in PUNCTURED:
            assert any(n.startswith(f"{k}:even:A:oracle_agreement:") for n in names)
    if key == "8":
        for g in (2, 3):
            assert rep.find(f"g{g}:h1_O").dims_b[0] == g - 1
    if key == "10":
        rec = rep.find("power1:B:line_bundle_dims")
        assert rec.dims_a == [1] + list(range(1, 9))
        assert rec.dims_b[1:] == [1] * 8
        assert rec.dims_target == [1] + [0] * 8


@pytest.mark.xfail(strict=True, reason=(
    "the explicit odd module model for the punctured surface is not closed under the "
    "action of T_j: the Floer product T_j*(1,0) is a nonzero class of stage 12 while the "
    "model assigns it zero; all dimension and B-side checks agree"))
def test_criterion_6_odd():
    rep = _check("6-odd")
    assert rep.passed, rep.to_text()


def test_criterion_12_determinism():
    mismatched = []
    for key in CRITERIA:
        first = run_criterion(key).to_json()
        if CRITERIA[key][1]().to_json() != first:
            mismatched.append(key)
    ok = not mismatched
    _record("12", ok, "byte-identical reruns of criteria 1-11" if ok else f"differs: {mismatched}")
    assert ok
