"""Three-way comparisons: A-side limits and B-side Čech data against a shared target."""
from __future__ import annotations

from dataclasses import dataclass, asdict
from fractions import Fraction

from . import bside
from .bside import BModule, OddElement, extend_field, sections_vanishing_on, verify_b_module, verify_b_ring
from .cech import (Sheaf, build_complex, cohomology, rotation_number, VectorField,
                   c0_to_section, section_to_c0, stabilization_check)
from .curves import INF, Configuration, build_mirror
from .floer import E, F_, FloerClass, Scenario, basis
from .limits import (A_RING, R2_RING, R_RING, closed_odd_model, multi_twist_odd_model,
                     punctured_odd_model, scenario_ring, std_monomial, verify_graded_module,
                     verify_graded_ring, verify_module_structure, verify_ring_presentation)
from .linalg import Mat, kernel_basis, rank
from .polys import (FiberProductDescription, Presentation, TruncatedAlgebra, fiber_product_oracle,
                    fiber_product_presentation, quotient_dims)
from .ratfun import RatFun
from .report import CheckRecord, Report


@dataclass
class CheckSpec:
    genus: int
    scenario: str = "closed"     # closed | punctured | multi
    circles: int = 1
    punctures: int = 0
    max_weight: int = 8
    slack: int = 4
    N: int = 10
    N2: int = 13
    index_cutoff: int = 12

    def __post_init__(self):
        if self.scenario not in ("closed", "punctured", "multi"):
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if min(self.max_weight, self.N, self.index_cutoff) < 1 or self.slack < 0:
            raise ValueError("cutoffs must be positive")
        if self.N2 <= self.N:
            raise ValueError("stability truncation must exceed the working truncation")
        if self.scenario == "punctured" and self.punctures < 1:
            raise ValueError("punctured scenario needs k >= 1")
        if self.scenario == "multi" and self.circles < 2:
            raise ValueError("multi-twist scenario needs at least two circles")

    def a_scenario(self) -> Scenario:
        stage = self.max_weight + self.slack
        if self.scenario == "punctured":
            return Scenario(self.genus, punctures=self.punctures, max_stage=stage, index_cutoff=self.index_cutoff)
        return Scenario(self.genus, circles=self.circles if self.scenario == "multi" else 1,
                        max_stage=stage, index_cutoff=self.index_cutoff)

    def b_configuration(self) -> Configuration:
        if self.scenario == "punctured":
            return build_mirror(self.genus, "open", k=self.punctures)[0]
        return build_mirror(self.genus, "nodal", ell=self.circles if self.scenario == "multi" else 1)[0]

    def to_dict(self) -> dict:
        return asdict(self)


# -- B-side images for the odd module models ------------------------------------------

def _odd_extras(cx, fixed: list[str], h1) -> list[OddElement]:
    # classes on which the ring acts through evaluation at the origin
    out = [OddElement(cocycle=p) for p in h1.h1_representative_parts()]
    out += [OddElement(field=s) for s in sections_vanishing_on(cx, fixed)]
    return out


def b_module_for(spec: CheckSpec, model, cfg: Configuration) -> BModule:
    """B-side images aligned with the labels of an A-side module model."""
    N = spec.N
    cx = build_complex(cfg, "Tbal", N)
    h1 = cohomology(build_complex(cfg, "O", N))
    gens = bside.ring_generators(cfg)
    punct = bside.punctured_components(cfg)
    lines = bside.affine_lines(cfg)
    x = RatFun.x(1)
    notes = []
    images: list[OddElement] = []
    if spec.scenario == "punctured":
        w = bside.cubic_w(bside._finite_puncture(cfg, punct[0]))
        for i, tup in enumerate(model.extra["tuples"][:model.extra["n_tuple"]]):
            if model.weights[i] > spec.max_weight:
                images.append(OddElement())  # above the compared range
                continue
            fw = RatFun()
            for d, c in tup.w.items():
                fw = fw + (w ** d).scale(c)
            fixed = {punct[0]: fw * x}
            for j, part in enumerate(tup.t):
                gt = RatFun()
                for d, c in part.items():
                    gt = gt + RatFun.x(d + 1).scale(-c)
                fixed[lines[j]] = gt
            images.append(OddElement(field=extend_field(cx, fixed)))
        fixed_comps = [punct[0]] + lines
    else:
        taus = [extend_field(cx, {c: (x if c == p else RatFun()) for c in punct}) for p in punct]
        if spec.scenario == "closed":
            alg = TruncatedAlgebra.from_presentation(A_RING, spec.max_weight)
            for i in range(len(alg)):
                f = taus[0]
                for name, a in zip(A_RING.names, std_monomial(alg, i)):
                    for _ in range(a):
                        f = gens[name] * f
                images.append(OddElement(field=f))
        else:
            desc, _ = scenario_ring(spec.a_scenario())
            fp = fiber_product_oracle(desc, spec.max_weight)
            tau_sum = taus[0]
            for t in taus[1:]:
                tau_sum = tau_sum + t
            for i in range(len(fp.labels)):
                vec = fp.tuples[i]
                f = None
                for n, (alg, off) in enumerate(zip(fp.factor_algebras, fp.offsets)):
                    names = desc.factors[n].names
                    for k in range(len(alg)):
                        c = vec[off + k]
                        if not c:
                            continue
                        mono = std_monomial(alg, k)
                        if not any(mono):
                            if n:
                                continue
                            term = tau_sum
                        else:
                            term = taus[n]
                            for name, a in zip(names, mono):
                                for _ in range(a):
                                    term = gens[name] * term
                        term = term.scale(c)
                        f = term if f is None else f + term
                images.append(OddElement(field=f if f is not None else tau_sum.scale(0)))
        fixed_comps = punct
    n_a = len(images)
    extras = _odd_extras(cx, fixed_comps, h1)
    if spec.scenario == "multi":
        extras = [OddElement(field=taus[0] - t) for t in taus[1:]] + extras
    want = len(model.labels) - n_a
    if len(extras) != want:
        notes.append(f"B-side offers {len(extras)} classes killed by the ring for {want} model labels")
    while len(extras) < want:
        extras.append(OddElement())
    images += extras[:want]
    ring_gens = {n: (w, gens[n]) for n, (w, _) in model.ring_gens.items()}
    return BModule(model.labels, model.weights, images, model.action, ring_gens, filtered=True, notes=notes)


def _dims_agree(report: Report, name: str, dims_a, dims_b, dims_t, start: int = 0) -> CheckRecord:
    rec = report.add(CheckRecord(name, side="A/B", dims_a=dims_a, dims_b=dims_b, dims_target=dims_t))
    for w in range(start, len(dims_t)):
        if not (dims_a[w] == dims_b[w] == dims_t[w]):
            rec.fail({"weight": w, "a": dims_a[w], "b": dims_b[w], "target": dims_t[w]})
    if start:
        rec.notes.append(f"compared from weight {start}")
    return rec


def _even_target(spec: CheckSpec):
    target, _ = scenario_ring(spec.a_scenario())
    if isinstance(target, FiberProductDescription):
        return target, fiber_product_presentation(target.factors)
    return target, target


def _odd_model(spec: CheckSpec, s: Scenario):
    return {"closed": closed_odd_model, "punctured": punctured_odd_model,
            "multi": multi_twist_odd_model}[spec.scenario](s, spec.max_weight)


def check_closed_string(spec: CheckSpec, legs=("even", "odd")) -> Report:
    """Even and odd legs: A-side limit and B-side Čech data against one target each."""
    s = spec.a_scenario()
    cfg = spec.b_configuration()
    report = Report("closed-string comparison", provenance={
        "spec": spec.to_dict(), "configuration": cfg.label, "bundle": dict(cfg.bundle)})
    W = spec.max_weight
    if "even" in legs:
        target, source = _even_target(spec)
        a_gens = scenario_ring(s)[1]
        ra = verify_ring_presentation(s, target, a_gens, W, spec.slack)
        report.extend(ra, prefix="even:A:")
        b_gens = bside.ring_generators(cfg)
        report.provenance["b_generators"] = {n: g.render() for n, g in sorted(b_gens.items())}
        for rec in verify_b_ring(cfg, source, b_gens, W, spec.N):
            rec.name = f"even:B:{rec.name}"
            report.add(rec)
        stab = stabilization_check(cfg, "O", spec.N, spec.N2, max_weight=W)
        srec = report.add(CheckRecord("even:B:stabilization", side="B"))
        for d in stab.details:
            srec.fail(d)
        dims_t = quotient_dims(source, W)
        dims_a = report.find("even:A:surjective").dims_target
        dims_b = report.find("even:B:surjective").dims_target
        _dims_agree(report, "even:dims", dims_a, dims_b, dims_t)
    if "odd" in legs:
        model = _odd_model(spec, s)
        ma = verify_module_structure(s, model, W, spec.slack)
        report.extend(ma, prefix="odd:A:")
        bm = b_module_for(spec, model, cfg)
        mb = verify_b_module(cfg, bm, W, spec.N)
        report.extend(mb, prefix="odd:B:")
        if bm.notes:
            report.find("odd:B:independent").notes.extend(bm.notes)
        stab = stabilization_check(cfg, "Tbal", spec.N, spec.N2, max_weight=W)
        srec = report.add(CheckRecord("odd:B:stabilization", side="B"))
        for d in stab.details:
            srec.fail(d)
        # filtered dimensions; the model may start above weight 0
        _dims_agree(report, "odd:filtered_dims", _cumulative(report.find("odd:A:spanning").dims_a),
                    _cumulative(report.find("odd:B:spanning").dims_b), _cumulative(model.dims(W)),
                    start=min(model.weights))
    return report


def _cumulative(dims):
    out, acc = [], 0
    for d in dims:
        acc += d
        out.append(acc)
    return out


# -- homogeneous coordinate rings ------------------------------------------------------

def _a_homogeneous_generators(s: Scenario, power: int) -> dict:
    if power == 1:
        return {"X": FloerClass.of(s, F_(), 1), "Y": FloerClass.of(s, E(1), 2), "Z": FloerClass.of(s, E(1), 3)}
    return {"X": FloerClass.of(s, F_(), 2), "Y": FloerClass.of(s, E(1), 2), "Z": FloerClass.of(s, E(1), 4)}


def _homogeneous_b_module(cfg: Configuration, ring: Presentation, gens: dict, W: int, N: int,
                          step: int, labels, weights, action) -> BModule:
    cx0 = build_complex(cfg, "Tbal", N)
    h0 = cohomology(build_complex(cfg, "O", N))
    h1x = cohomology(build_complex(cfg, Sheaf(False, step), N))
    X = gens[ring.names[0]]
    reps = h0.h1_representative_parts()
    xcols = [h1x.project(h1x.complex.c1_vector({c: X.on(c) * f for c, f in r.items()})) for r in reps]
    ker = kernel_basis(Mat.from_columns(xcols, rows=h1x.h1_dim)) if reps else []
    if len(ker) != 1:
        raise ArithmeticError(f"multiplication by X on H^1(O) has a {len(ker)}-dimensional kernel")

    def combo(coeffs):
        out: dict = {}
        for r, c in zip(reps, coeffs):
            for comp, f in r.items():
                out[comp] = out.get(comp, RatFun()) + f.scale(c)
        return out
    c_class = combo(ker[0])
    chosen = [list(ker[0])]
    eta = []
    for i in range(len(reps)):
        e = [Fraction(int(i == j)) for j in range(len(reps))]
        if rank(Mat.from_rows(chosen + [e])) > len(chosen):
            chosen.append(e)
            eta.append(reps[i])
    dist = cfg.distinguished
    tau = extend_field(cx0, {dist: RatFun.x(1)})
    nus = sections_vanishing_on(cx0, [dist])
    base = [OddElement(cocycle=p) for p in eta] + [OddElement(field=v) for v in nus]
    alg = TruncatedAlgebra.from_presentation(ring, W)
    images = []
    for i in range(len(alg)):
        el = OddElement(field=tau)
        for name, a in zip(ring.names, std_monomial(alg, i)):
            for _ in range(a):
                el = el.times(gens[name], step)
        images.append(el)
    for lab in labels[len(alg):]:
        if lab == "c":
            images.append(OddElement(cocycle=c_class))
            continue
        n, r = lab.split("*e")
        el = base[int(r) - 1] if int(r) <= len(base) else OddElement()
        for _ in range(int(n.split("^")[1])):
            el = el.times(X, step)
        images.append(el)
    ring_gens = {n: (w, gens[n]) for n, w in ring.generators}
    return BModule(labels, weights, images, action, ring_gens, filtered=False, step=step)


def check_homogeneous(genus: int, power: int = 1, max_weight: int = 8, N: int = 10, N2: int = 13,
                      legs=("even", "odd")) -> Report:
    """Graded rings of twist powers against sections of powers of a degree-one bundle."""
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    W = max_weight
    ring = R_RING if power == 1 else R2_RING
    s = Scenario(genus, max_stage=max(12, power * W), index_cutoff=max(12, power * W))
    cfg = build_mirror(genus, "closed")[0]
    report = Report(f"homogeneous coordinate ring (power {power})", provenance={
        "genus": genus, "power": power, "max_weight": W, "truncation": N,
        "configuration": cfg.label, "bundle": dict(cfg.bundle), "ring": ring.to_dict()})
    a_gens = _a_homogeneous_generators(s, power)
    b_gens = bside.homogeneous_generators(cfg, power)
    report.provenance["b_generators"] = {n: f"{g.sheaf.name}: {g.render()}" for n, g in sorted(b_gens.items())}
    if power == 2:
        report.provenance["renaming"] = "B-side Y and Z swapped, weights halved (stage step 2)"
    if "even" in legs:
        report.extend(verify_graded_ring(s, ring, a_gens, W, step=power), prefix="even:A:")
        for rec in verify_b_ring(cfg, ring, b_gens, W, N, graded_step=power):
            rec.name = f"even:B:{rec.name}"
            report.add(rec)
        qd = quotient_dims(ring, W)
        dims_t = [qd[w] + (1 if w == 0 else 0) for w in range(W + 1)]
        dims_a = [len(basis(s, power * w, 0)) for w in range(W + 1)]
        dims_b, h1v = [], []
        for w in range(W + 1):
            h0 = cohomology(build_complex(cfg, Sheaf(False, power * w), N)).h0_dim
            hv = cohomology(build_complex(cfg, Sheaf(True, power * w), N)).h1_dim
            h1v.append(hv)
            dims_b.append(h0 + hv)
        _dims_agree(report, "even:dims", dims_a, dims_b, dims_t)
        krec = report.add(CheckRecord("even:B:extra_summand", side="B", dims_b=h1v,
                                      dims_target=[1] + [0] * W))
        if h1v != [1] + [0] * W:
            krec.fail({"h1_Tbal_twists": h1v})
    if "odd" in legs:
        ma = verify_graded_module(s, ring, a_gens, W, step=power)
        report.extend(ma, prefix="odd:A:")
        from .limits import graded_odd_model
        labels, weights, _, action = graded_odd_model(s, ring, a_gens, W, power)
        bm = _homogeneous_b_module(cfg, ring, b_gens, W, N, power, labels, weights, action)
        report.extend(verify_b_module(cfg, bm, W, N), prefix="odd:B:")
        dims_m = [sum(1 for x in weights if x == w) for w in range(W + 1)]
        _dims_agree(report, "odd:dims", report.find("odd:A:bijective").dims_a,
                    report.find("odd:B:spanning").dims_b, dims_m)
    bundle = report.add(CheckRecord("B:line_bundle_dims", side="B", dims_a=[], dims_b=[], dims_target=[]))
    bundle.notes.append("dims_a: h0(L^d); dims_b: h1(L^d); dims_target: h1(Tbal*L^d); d = 0..max_weight")
    for d in range(W + 1):
        h = cohomology(build_complex(cfg, Sheaf(False, d), N))
        hv = cohomology(build_complex(cfg, Sheaf(True, d), N))
        bundle.dims_a.append(h.h0_dim)
        bundle.dims_b.append(h.h1_dim)
        bundle.dims_target.append(hv.h1_dim)
        want = (1, genus, 1) if d == 0 else (d, genus - 1, 0)
        if (h.h0_dim, h.h1_dim, hv.h1_dim) != want:
            bundle.fail({"degree": d, "h0": h.h0_dim, "h1": h.h1_dim, "h1_Tbal": hv.h1_dim})
    for sheaf in ("O", "L:1", "Tbal"):
        stab = stabilization_check(cfg, sheaf, N, N2)
        rec = report.add(CheckRecord(f"B:stabilization:{sheaf}", side="B"))
        for d in stab.details:
            rec.fail(d)
    return report


# -- standalone B-side statements ------------------------------------------------------

def _balancing_record(cfg: Configuration, N: int, max_weight: int) -> CheckRecord:
    rec = CheckRecord("balancing_constraint", side="B")
    rec.notes.append("F(0) - F(inf) on the punctured component equals minus the sum of g_j(0)")
    punct = bside.punctured_components(cfg)[0]
    lines = bside.affine_lines(cfg)
    h = cohomology(build_complex(cfg, "Tbal", N))
    for v in h.filtered_h0(max_weight):
        s = c0_to_section(h.complex, v)
        fp = VectorField(s.on(punct))
        lhs = rotation_number(fp, Fraction(0)) + rotation_number(fp, INF)
        rhs = -sum((rotation_number(VectorField(s.on(l)), Fraction(0)) for l in lines), Fraction(0))
        if lhs != rhs:
            rec.fail({"section": s.render(), "lhs": lhs, "rhs": rhs})
    return rec


def check_bmodel_theorems(genus: int, variant: str = "nodal", ell: int = 1, k: int = 1,
                          max_weight: int = 8, N: int = 10, N2: int = 13) -> Report:
    """B-side statements on their own: cohomology dimensions, named generators, field structure."""
    if variant not in ("nodal", "open", "closed"):
        raise ValueError(f"unknown variant {variant!r}")
    cfg = build_mirror(genus, variant, ell=ell, k=k)[0]
    report = Report(f"B-side cohomology of {cfg.label}", provenance={
        "configuration": cfg.label, "truncation": N, "stability_truncation": N2, "max_weight": max_weight})
    ho = cohomology(build_complex(cfg, "O", N))
    ht = cohomology(build_complex(cfg, "Tbal", N))
    if variant == "closed":
        return _closed_theorems(report, cfg, genus, N, N2)
    expect_h1 = genus - ell if variant == "nodal" else 1
    rec = report.add(CheckRecord("h1_O", side="B", dims_b=[ho.h1_dim], dims_target=[expect_h1]))
    if ho.h1_dim != expect_h1:
        rec.fail({"h1": ho.h1_dim})
    crec = report.add(CheckRecord("h1_O_constant_representatives", side="B"))
    for parts in ho.h1_representative_parts():
        for comp, f in parts.items():
            if f.degree() > 0 or any(key[0] == "p" for key in f.terms):
                crec.fail({"component": comp, "part": f.render()})
    rec = report.add(CheckRecord("h1_Tbal", side="B", dims_b=[ht.h1_dim], dims_target=[0]))
    if ht.h1_dim:
        rec.fail({"h1": ht.h1_dim})
    gens = bside.ring_generators(cfg)
    report.provenance["generators"] = {n: g.render() for n, g in sorted(gens.items())}
    if variant == "nodal" and ell == 1:
        source = A_RING
    else:
        s = Scenario(genus, punctures=k) if variant == "open" else Scenario(genus, circles=ell)
        source = fiber_product_presentation(scenario_ring(s)[0].factors)
    for r in verify_b_ring(cfg, source, gens, max_weight, N):
        report.add(r)
    if variant == "open":
        report.add(_balancing_record(cfg, N, max_weight))
    # balanced fields: the A-module generated by x d/dx plus classes killed by the ring
    cx = ht.complex
    punct = bside.punctured_components(cfg)
    fixed = punct + bside.affine_lines(cfg)
    nus = sections_vanishing_on(cx, fixed)
    frec = report.add(CheckRecord("Tbal_extra_classes", side="B", dims_b=[len(nus)]))
    if variant == "nodal" and ell == 1:
        frec.dims_target = [genus - 1]
        if len(nus) != genus - 1:
            frec.fail({"count": len(nus)})
        tau = extend_field(cx, {punct[0]: RatFun.x(1)})
        alg = TruncatedAlgebra.from_presentation(A_RING, max_weight)
        imgs = []
        for i in range(len(alg)):
            f = tau
            for name, a in zip(A_RING.names, std_monomial(alg, i)):
                for _ in range(a):
                    f = gens[name] * f
            imgs.append((alg.weights[i], f))
        srec = report.add(CheckRecord("Tbal_module_structure", side="B"))
        b_dims, t_dims = [], []
        for w in range(max_weight + 1):
            mine = [section_to_c0(cx, f) for x, f in imgs if x <= w]
            mine += [section_to_c0(cx, v) for v in nus]
            tgt = ht.filtered_h0(w)
            b_dims.append(len(tgt))
            t_dims.append(len(mine))
            r = rank(Mat.from_rows(mine, cols=len(cx.c0_keys)))
            if r != len(mine) or r != len(tgt):
                srec.fail({"weight": w, "model": len(mine), "rank": r, "filtered_h0": len(tgt)})
        srec.dims_b, srec.dims_target = b_dims, t_dims
    for sheaf in ("O", "Tbal"):
        stab = stabilization_check(cfg, sheaf, N, N2, max_weight=max_weight)
        rec = report.add(CheckRecord(f"stabilization:{sheaf}", side="B"))
        for d in stab.details:
            rec.fail(d)
    return report


def _closed_theorems(report: Report, cfg: Configuration, genus: int, N: int, N2: int) -> Report:
    from .curves import chi_O_oracle
    ho = cohomology(build_complex(cfg, "O", N))
    chi = chi_O_oracle(cfg)
    rec = report.add(CheckRecord("euler_characteristic", side="B", dims_b=[ho.h0_dim, ho.h1_dim],
                                 dims_target=[chi]))
    if ho.h0_dim - ho.h1_dim != chi or ho.h0_dim != 1:
        rec.fail({"h0": ho.h0_dim, "h1": ho.h1_dim, "chi": chi})
    for sheaf, (e0, e1) in (("Tbal", (genus, 1)), ("L:1", (1, genus - 1))):
        h = cohomology(build_complex(cfg, sheaf, N))
        rec = report.add(CheckRecord(f"dims:{sheaf}", side="B", dims_b=[h.h0_dim, h.h1_dim], dims_target=[e0, e1]))
        if (h.h0_dim, h.h1_dim) != (e0, e1):
            rec.fail({"h0": h.h0_dim, "h1": h.h1_dim})
    for sheaf in ("O", "Tbal"):
        stab = stabilization_check(cfg, sheaf, N, N2)
        rec = report.add(CheckRecord(f"stabilization:{sheaf}", side="B"))
        for d in stab.details:
            rec.fail(d)
    return report
