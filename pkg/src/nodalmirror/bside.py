"""B-side ingredients for the mirror checks: named sections, balanced extensions, module checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .cech import (GlobalSection, Sheaf, TruncationLeak, build_complex, c0_to_section,
                   canonical_basis, cohomology, evaluate_relation,
                   section_to_c0, section_weight, unit_section, _stack)
from .curves import INF, Configuration
from .linalg import Mat, SpanSolver, kernel_basis, rank
from .polys import Presentation, check_monomial_map, monomials_up_to
from .ratfun import RatFun
from .report import CheckRecord, Report


# -- named functions on a punctured component -------------------------------------

def _inv_shift(q: Fraction, b: int) -> RatFun:
    # (1 + u)^(-b) with u = -x/q, so that the puncture q sits at u = -1
    return RatFun.pole(q, b, (-q) ** b)


def cubic_y(q=Fraction(-1)) -> RatFun:
    """u/(1+u)^2 in the coordinate u = -x/q (``x/(1+x)^2`` for q = -1)."""
    return _inv_shift(q, 1) - _inv_shift(q, 2)


def cubic_z(q=Fraction(-1)) -> RatFun:
    """u^2/(1+u)^3 in the coordinate u = -x/q."""
    return _inv_shift(q, 1) - _inv_shift(q, 2).scale(2) + _inv_shift(q, 3)


def cubic_w(q=Fraction(-1)) -> RatFun:
    """u/(1+u): the coordinate with W(0) = 0 and W(inf) = 1."""
    return RatFun.const(1) - _inv_shift(q, 1)


def _finite_puncture(cfg: Configuration, cid: str) -> Fraction:
    pts = [p for p in cfg.component(cid).punctures if p != INF]
    if len(pts) != 1 or set(cfg.component(cid).marks) != {Fraction(0), INF}:
        raise ValueError(f"{cid} is not a once-punctured component marked at 0 and inf")
    return pts[0]


def punctured_components(cfg: Configuration) -> list[str]:
    return [c.id for c in cfg.components if any(p != INF for p in c.punctures)]


def affine_lines(cfg: Configuration) -> list[str]:
    return [c.id for c in cfg.components if INF in c.punctures]


def ring_generators(cfg: Configuration) -> dict[str, GlobalSection]:
    """Named generators of ``H^0(O)``: Y, Z per punctured component and T per affine line."""
    comps = punctured_components(cfg)
    lines = affine_lines(cfg)
    gens = {}
    for n, cid in enumerate(comps, start=1):
        q = _finite_puncture(cfg, cid)
        tag = "" if len(comps) == 1 else str(n)
        gens[f"Y{tag}"] = GlobalSection.make("O", {cid: cubic_y(q)})
        gens[f"Z{tag}"] = GlobalSection.make("O", {cid: cubic_z(q)})
    for n, cid in enumerate(lines, start=1):
        tag = "" if len(lines) == 1 else str(n)
        gens[f"T{tag}"] = GlobalSection.make("O", {cid: RatFun.x(1)})
    return gens


def homogeneous_generators(cfg: Configuration, power: int = 1) -> dict[str, GlobalSection]:
    """Sections of powers of the degree-one bundle presenting the homogeneous ring.

    Power 1: X = 1+z in L, Y = z in L^2, Z = z^2 in L^3.  Power 2 (already
    renamed to the A-side names): X = 1+z^2 in L^2, Y = z in L^2, Z = z^3 in L^4.
    """
    dist = cfg.distinguished
    others = {c.id: RatFun.const(1) for c in cfg.components if c.id != dist}
    z = RatFun.x(1)
    if power == 1:
        spec = {"X": (1, RatFun.const(1) + z, True), "Y": (2, z, False), "Z": (3, z * z, False)}
    elif power == 2:
        spec = {"X": (2, RatFun.const(1) + z * z, True), "Y": (2, z, False), "Z": (4, z ** 3, False)}
    else:
        raise ValueError("power must be 1 or 2")
    out = {}
    for name, (k, f, unit_elsewhere) in spec.items():
        parts = {dist: f}
        if unit_elsewhere:
            parts.update(others)
        out[name] = GlobalSection.make(Sheaf(False, k), parts)
    return out


def monomial_sections(source: Presentation, gens: dict, max_weight: int, one: GlobalSection) -> list[GlobalSection]:
    monos = monomials_up_to(source, max_weight)
    cache: dict[tuple, GlobalSection] = {}
    for e in monos:
        if not any(e):
            cache[e] = one
            continue
        i = next(k for k, a in enumerate(e) if a)
        prev = list(e)
        prev[i] -= 1
        prev = tuple(prev)
        g = gens[source.names[i]]
        cache[e] = g if not any(prev) else cache[prev] * g
    return [cache[e] for e in monos]


# -- balanced extensions -----------------------------------------------------------

def extend_field(cx, fixed: dict[str, RatFun]) -> GlobalSection:
    """Global section agreeing with ``fixed`` on the named components.

    The remaining components are solved for linearly, so the extension is a
    linear function of the prescribed parts; fields whose rotation numbers all
    vanish extend by zero.
    """
    stacked = _stack(cx.constraints, cx.d)
    base = [Fraction(0)] * len(cx.c0_keys)
    free = []
    for j, (pi, key) in enumerate(cx.c0_keys):
        comp = cx.c0_pieces[pi][1].comp
        if comp in fixed:
            continue
        free.append(j)
    for pi, (_, pc) in enumerate(cx.c0_pieces):
        if pc.comp in fixed:
            for k, v in pc.coords(fixed[pc.comp]).items():
                base[cx.c0_index[(pi, k)]] = v
    rhs = [-x for x in stacked.apply(base)]
    rows = stacked.row_dicts()
    cols = [[r.get(j, Fraction(0)) for r in rows] for j in free]
    sol = SpanSolver(cols, stacked.rows).solve(rhs)
    if sol is None:
        raise ValueError("prescribed parts admit no global extension")
    for j, c in zip(free, sol):
        base[j] = c
    return c0_to_section(cx, base)


def sections_vanishing_on(cx, comps: Sequence[str]) -> list[GlobalSection]:
    """Canonical basis of global sections that are zero on the given components."""
    stacked = _stack(cx.constraints, cx.d)
    rows = stacked.row_dicts()
    for j, (pi, _) in enumerate(cx.c0_keys):
        if cx.c0_pieces[pi][1].comp in comps:
            rows.append({j: Fraction(1)})
    m = Mat(len(rows), len(cx.c0_keys), {(i, j): v for i, r in enumerate(rows) for j, v in r.items()})
    return canonical_basis(cx.config, [c0_to_section(cx, v) for v in kernel_basis(m)])


# -- odd B-side modules ------------------------------------------------------------

@dataclass
class OddElement:
    """Class in ``H^1(F) ⊕ H^0(Tbal ⊗ F)``: a cocycle (component parts) and a field."""

    cocycle: dict | None = None
    field: GlobalSection | None = None
    block: int = 0  # twist index for graded modules

    def times(self, s: GlobalSection, step: int = 1) -> "OddElement":
        coc = None
        if self.cocycle is not None:
            sp = s.part
            coc = {c: sp.get(c, RatFun()) * f for c, f in self.cocycle.items()}
        fld = s * self.field if self.field is not None else None
        return OddElement(coc, fld, self.block + s.sheaf.twist // step)


class OddSpace:
    """Coordinates for ``H^1(L^k) ⊕ H^0(Tbal ⊗ L^k)``, blocks indexed by weight."""

    def __init__(self, cfg: Configuration, N: int, twists: dict[int, int]):
        self.cfg = cfg
        self.N = N
        self.blocks = {}
        off = 0
        for w, k in sorted(twists.items()):
            h1 = cohomology(build_complex(cfg, Sheaf(False, k), N))
            hv = cohomology(build_complex(cfg, Sheaf(True, k), N))
            size = h1.h1_dim + len(hv.complex.c0_keys)
            self.blocks[w] = (off, h1, hv)
            off += size
        self.dim = off

    def vector(self, x: OddElement) -> list[Fraction]:
        off, h1, hv = self.blocks[x.block]
        v = [Fraction(0)] * self.dim
        if x.cocycle:
            for i, c in enumerate(h1.project(h1.complex.c1_vector(x.cocycle))):
                v[off + i] = c
        if x.field is not None and x.field.parts:
            for j, c in enumerate(section_to_c0(hv.complex, x.field)):
                v[off + h1.h1_dim + j] = c
        return v

    def block_basis(self, w: int, filt: int | None = None) -> list[list[Fraction]]:
        """``H^1`` basis plus (filtered) ``H^0(Tbal)`` basis of one block."""
        off, h1, hv = self.blocks[w]
        out = []
        for i in range(h1.h1_dim):
            v = [Fraction(0)] * self.dim
            v[off + i] = Fraction(1)
            out.append(v)
        secs = hv.h0 if filt is None else hv.filtered_h0(filt)
        for s in secs:
            v = [Fraction(0)] * self.dim
            for j, c in enumerate(s):
                v[off + h1.h1_dim + j] = c
            out.append(v)
        return out


@dataclass
class BModule:
    labels: list
    weights: list
    images: list                    # OddElement per label
    action: Callable[[str, int], dict]
    ring_gens: dict                 # name -> (weight, GlobalSection)
    filtered: bool = True           # filtered (one block) or graded (block per weight)
    step: int = 1
    notes: list = field(default_factory=list)


def verify_b_module(cfg: Configuration, mod: BModule, max_weight: int, N: int,
                    title: str = "B-side odd module") -> Report:
    report = Report(title, provenance={"configuration": cfg.label, "truncation": N,
                                       "max_weight": max_weight})
    if mod.filtered:
        space = OddSpace(cfg, N, {0: 0})
    else:
        space = OddSpace(cfg, N, {w: mod.step * w for w in range(max_weight + 1)})
    idx = [i for i, w in enumerate(mod.weights) if w <= max_weight]
    try:
        vec = {i: space.vector(mod.images[i]) for i in idx}
    except TruncationLeak as exc:
        rec = report.add(CheckRecord("images", side="B"))
        rec.fail({"truncation_leak": str(exc)})
        return report
    w0 = min(mod.weights) if mod.weights else 0
    ind = report.add(CheckRecord("independent", side="B"))
    spn = report.add(CheckRecord("spanning", side="B"))
    dims_b, dims_m = [], []
    prev = 0
    for w in range(max_weight + 1):
        if mod.filtered:
            mine = [i for i in idx if mod.weights[i] <= w]
            tgt = space.block_basis(0, filt=w)
        else:
            mine = [i for i in idx if mod.weights[i] == w]
            tgt = space.block_basis(w)
        tr = rank(Mat.from_rows(tgt, cols=space.dim)) if tgt else 0
        dims_b.append(tr - prev if mod.filtered else tr)
        if mod.filtered:
            prev = tr
        dims_m.append(sum(1 for i in idx if mod.weights[i] == w))
        if w < w0:
            continue
        vs = [vec[i] for i in mine]
        r = rank(Mat.from_rows(vs, cols=space.dim)) if vs else 0
        if r < len(vs) and ind.passed:
            ind.fail({"weight": w, "model_count": len(vs), "rank": r})
        solver = SpanSolver(vs, space.dim)
        for k, t in enumerate(tgt):
            if not solver.contains(t):
                spn.fail({"weight": w, "uncovered_basis_vector": k})
                break
        tsolver = SpanSolver(tgt, space.dim)
        for i in mine:
            if not tsolver.contains(vec[i]):
                spn.fail({"weight": w, "model_element_above_filtration": mod.labels[i]})
                break
    if w0 > 0:
        spn.notes.append(f"model weights start at {w0}; lower filtration steps are not compared")
    for rec in (ind, spn):
        rec.dims_b = dims_b
        rec.dims_target = dims_m
    act = report.add(CheckRecord("action", side="B"))
    for name, (gw, s) in mod.ring_gens.items():
        for i in idx:
            if mod.weights[i] + gw > max_weight:
                continue
            try:
                lhs = space.vector(mod.images[i].times(s, mod.step))
            except TruncationLeak as exc:
                act.fail({"generator": name, "element": mod.labels[i], "truncation_leak": str(exc)})
                continue
            rhs = [Fraction(0)] * space.dim
            for j, c in mod.action(name, i).items():
                for t, x in enumerate(vec[j]):
                    if x:
                        rhs[t] += c * x
            if lhs != rhs:
                act.fail({"generator": name, "element": mod.labels[i],
                          "model_result": " + ".join(f"{c}*{mod.labels[j]}"
                                                     for j, c in sorted(mod.action(name, i).items())) or "0"})
    if mod.filtered:
        urec = report.add(CheckRecord("unit", side="B"))
        one = unit_section(cfg)
        for i in idx:
            if space.vector(mod.images[i].times(one)) != vec[i]:
                urec.fail({"element": mod.labels[i]})
    return report


def verify_b_ring(cfg: Configuration, source: Presentation, gens: dict, max_weight: int, N: int,
                  graded_step: int | None = None) -> list[CheckRecord]:
    """Relations / injectivity / surjectivity of ``source -> H^0`` on the B-side.

    With ``graded_step`` the target is ``⊕_w H^0(L^(step*w))``; otherwise it is
    ``H^0(O)`` filtered by pole order at the punctures.
    """
    recs = []
    wrec = CheckRecord("generator_weights", side="B")
    for n, w in source.generators:
        got = gens[n].sheaf.twist // graded_step if graded_step else section_weight(cfg, gens[n])
        if got != w:
            wrec.fail({"generator": n, "weight": w, "section_weight": got})
    recs.append(wrec)
    nrec = CheckRecord("named_relations", side="B")
    for r in source.relations:
        val = evaluate_relation(r, gens)
        if val.parts:
            nrec.fail({"relation": r.render(), "value": val.render()})
    recs.append(nrec)
    if graded_step:
        blocks, off = {}, 0
        for w in range(max_weight + 1):
            h = cohomology(build_complex(cfg, Sheaf(False, graded_step * w), N))
            blocks[w] = (off, h)
            off += len(h.complex.c0_keys)
        dim = off

        def embed(s: GlobalSection, w: int) -> list[Fraction]:
            o, h = blocks[w]
            v = [Fraction(0)] * dim
            for j, c in enumerate(section_to_c0(h.complex, s)):
                v[o + j] = c
            return v
        one = GlobalSection.make(Sheaf(False, 0), {c.id: RatFun.const(1) for c in cfg.components})
        monos = monomials_up_to(source, max_weight)
        secs = monomial_sections(source, gens, max_weight, one)
        dense = [embed(s, source.weight(e)) for e, s in zip(monos, secs)]
        span, acc = [], []
        for w in range(max_weight + 1):
            o, h = blocks[w]
            for v in h.h0:
                full = [Fraction(0)] * dim
                for j, c in enumerate(v):
                    full[o + j] = c
                acc.append(full)
            span.append(list(acc))
    else:
        if max_weight > N:
            raise TruncationLeak(f"max_weight {max_weight} exceeds truncation {N}")
        h = cohomology(build_complex(cfg, "O", N))
        dim = len(h.complex.c0_keys)
        secs = monomial_sections(source, gens, max_weight, unit_section(cfg))
        dense = [section_to_c0(h.complex, s) for s in secs]
        span = [h.filtered_h0(w) for w in range(max_weight + 1)]
    recs.extend(check_monomial_map(source, dense, dim, span, max_weight, side="B"))
    return recs
