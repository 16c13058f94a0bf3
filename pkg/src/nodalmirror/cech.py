"""Truncated Čech complexes on node-indexed covers of trivalent configurations.

The cover has one open set ``U_p`` per node ``p``: the union of the
components through ``p`` with punctures and every other node point removed.
Double intersections are the components joining two distinct nodes with all
marks removed, and triple intersections are empty, so the complex has two
terms.  Sections are rational functions in the single chart of each
component, truncated at pole order ``N`` at removed points.

Sheaves: ``O``, ``L:k`` (the bundle with degree ``k * deg_C`` on each
component, realised as poles of that order at ``x = inf``), and the
balanced vector fields ``Tbal`` / ``Tbal*L:k``.  A vector field is stored as
its ``d/dx`` coefficient ``h``; it must vanish at node points, and the
rotation numbers of the three branches at a node must sum to zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .curves import INF, Configuration, ConfigError, Point, ensure_valid, point_str
from .linalg import Cokernel, Mat, SpanSolver, kernel_basis, rank, rref
from .ratfun import Key, RatFun


class TruncationLeak(ArithmeticError):
    """A section left the truncated basis; the truncation order must be raised."""


class CoverError(ConfigError):
    pass


@dataclass(frozen=True)
class Sheaf:
    vector: bool = False
    twist: int = 0

    @classmethod
    def parse(cls, text: str) -> "Sheaf":
        s = text.replace(" ", "")
        vector = False
        if s.startswith("Tbal"):
            vector = True
            s = s[4:]
            if s.startswith("*"):
                s = s[1:]
            elif s:
                raise ValueError(f"bad sheaf selector {text!r}")
        if not s or s == "O":
            if not vector and s != "O":
                raise ValueError(f"bad sheaf selector {text!r}")
            return cls(vector, 0)
        if s.startswith("L:"):
            try:
                k = int(s[2:])
            except ValueError:
                raise ValueError(f"bad sheaf selector {text!r}") from None
            if k < 0:
                raise ValueError("negative twists are not supported")
            return cls(vector, k)
        raise ValueError(f"bad sheaf selector {text!r}")

    @property
    def name(self) -> str:
        if self.vector:
            return "Tbal" if self.twist == 0 else f"Tbal*L:{self.twist}"
        return "O" if self.twist == 0 else f"L:{self.twist}"


# -- rotation numbers ------------------------------------------------------------

@dataclass(frozen=True)
class VectorField:
    """``h(x) d/dx`` on one component, with values in ``L^e`` at infinity."""

    h: RatFun
    twist_degree: int = 0

    @classmethod
    def normal_form(cls, f: RatFun, marks: Sequence[Point], twist_degree: int = 0) -> "VectorField":
        h = f
        for m in marks:
            if m != INF:
                h = h * RatFun.linear(m)
        return cls(h, twist_degree)

    def render(self) -> str:
        return f"({self.h.render()})*d/dx"


def rotation_number(v: VectorField, m: Point) -> Fraction:
    """Linear coefficient of ``v`` at the zero ``m``; flips sign under ``x -> 1/x``."""
    e = v.twist_degree
    if m == INF:
        if v.h.degree() > 1 + e:
            raise ValueError("vector field does not vanish at infinity")
        return -v.h.coeff_at_infinity(1 + e)
    if v.h.value(m):
        raise ValueError(f"vector field does not vanish at {point_str(m)}")
    return v.h.taylor(m, 1)


def _rotation_functional(key: Key, m: Point, e: int) -> Fraction:
    if m == INF:
        return Fraction(-1) if key == ("x", 1 + e) else Fraction(0)
    return RatFun({key: 1}).taylor(m, 1)


def _value_functional(key: Key, m: Point, e: int) -> Fraction:
    if m == INF:
        return Fraction(1) if key == ("x", e) else Fraction(0)
    return RatFun({key: 1}).value(m)


# -- pieces of the cover ---------------------------------------------------------

@dataclass
class Piece:
    comp: str
    inside: tuple          # node marks kept in the piece
    removed: tuple         # removed points (other marks and punctures)
    punctures: tuple
    deg_cap: int
    pole_caps: dict        # finite removed point -> max pole order
    weight_shift: int      # subtract from a polynomial exponent to get its weight at inf

    @cached_property
    def keys(self) -> list[Key]:
        out = [("x", a) for a in range(self.deg_cap + 1)]
        for q in sorted(self.pole_caps):
            out.extend(("p", q, b) for b in range(1, self.pole_caps[q] + 1))
        return sorted(out, key=key_order)

    @cached_property
    def index(self) -> dict:
        return {k: i for i, k in enumerate(self.keys)}

    def key_weight(self, key: Key) -> int:
        """Pole order at punctures carried by a basis key."""
        if key[0] == "p":
            return key[2] if key[1] in self.punctures else 0
        if INF in self.punctures:
            return max(0, key[1] - self.weight_shift)
        return 0

    def coords(self, f: RatFun) -> dict[Key, Fraction]:
        for k in f.terms:
            if k not in self.index:
                raise TruncationLeak(f"term {RatFun({k: 1}).render()} of a section on {self.comp} "
                                     f"leaves the truncated basis")
        return dict(f.terms)


def key_order(key: Key):
    return (key[1], 0, 0) if key[0] == "x" else (key[2], 1, key[1])


def _base_degree(sheaf: Sheaf, e: int, inf_inside: bool) -> int:
    if sheaf.vector:
        return 1 + e if inf_inside else 2 + e
    return e


def _make_piece(cfg: Configuration, comp, inside: tuple, sheaf: Sheaf, N: int, P: int) -> Piece:
    e = sheaf.twist * cfg.degree(comp.id)
    removed = tuple(m for m in comp.marks if m not in inside) + tuple(comp.punctures)
    inf_inside = INF in inside
    if INF in removed:
        cap = _base_degree(sheaf, e, False) + (P if INF in comp.punctures else N)
    else:
        cap = _base_degree(sheaf, e, inf_inside)
    pole_caps = {q: (P if q in comp.punctures else N) for q in removed if q != INF}
    n_finite = sum(1 for m in comp.marks if m != INF)
    shift = e + (n_finite if sheaf.vector else 0)
    return Piece(comp.id, inside, removed, tuple(comp.punctures), cap, pole_caps, shift)


# -- the complex -----------------------------------------------------------------

@dataclass
class CechComplex:
    config: Configuration
    sheaf: Sheaf
    N: int
    P: int
    node_ids: list
    c0_pieces: list            # (node id, Piece)
    c0_keys: list              # (piece index, key)
    c1_pieces: list            # Piece per double intersection
    c1_keys: list              # (piece index, key)
    constraints: Mat
    d: Mat
    c0_index: dict = field(repr=False, default_factory=dict)
    c1_index: dict = field(repr=False, default_factory=dict)

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.c0_keys), len(self.c1_keys)

    @cached_property
    def c0_basis(self) -> list[list[Fraction]]:
        """Basis of C^0: raw vectors satisfying the local gluing/balancing conditions."""
        return kernel_basis(self.constraints)

    def c1_piece_of(self, comp: str) -> int:
        for i, pc in enumerate(self.c1_pieces):
            if pc.comp == comp:
                return i
        raise KeyError(comp)

    def c0_weight(self, j: int) -> int:
        pi, key = self.c0_keys[j]
        return self.c0_pieces[pi][1].key_weight(key)

    def c1_vector(self, parts: dict[str, RatFun]) -> list[Fraction]:
        vec = [Fraction(0)] * len(self.c1_keys)
        for comp, f in parts.items():
            pi = self.c1_piece_of(comp)
            for k, v in self.c1_pieces[pi].coords(f).items():
                vec[self.c1_index[(pi, k)]] += v
        return vec

    def c1_parts(self, vec: Sequence[Fraction]) -> dict[str, RatFun]:
        acc: dict[int, dict] = {}
        for j, v in enumerate(vec):
            if v:
                pi, key = self.c1_keys[j]
                acc.setdefault(pi, {})[key] = v
        return {self.c1_pieces[pi].comp: RatFun(t) for pi, t in sorted(acc.items())}


def build_complex(cfg: Configuration, sheaf: Sheaf | str, N: int = 10, P: int | None = None) -> CechComplex:
    """Assemble the two-term Čech complex of ``sheaf`` truncated at order ``N``.

    ``P`` caps pole orders at punctures separately (defaults to ``N``).
    """
    if isinstance(sheaf, str):
        sheaf = Sheaf.parse(sheaf)
    if N < 1:
        raise ValueError("truncation order must be >= 1")
    P = N if P is None else P
    ensure_valid(cfg)
    if not cfg.nodes:
        raise CoverError("the node-indexed cover needs at least one node")
    node_ids = [n.id for n in cfg.nodes]
    order = {nid: i for i, nid in enumerate(node_ids)}
    comp_nodes = {}
    for comp in cfg.components:
        adj = cfg.adjacent_nodes(comp.id)
        if len(adj) > 2:
            raise CoverError(f"component {comp.id} meets {len(adj)} nodes; triple intersections would be non-empty")
        comp_nodes[comp.id] = sorted(adj, key=order.get)

    c0_pieces, c0_keys = [], []
    rows: list[dict[int, Fraction]] = []
    for n in cfg.nodes:
        start = len(c0_pieces)
        local = {}
        for cid, _ in n.branches:
            if cid in local:
                continue
            comp = cfg.component(cid)
            inside = tuple(m for c2, m in n.branches if c2 == cid)
            local[cid] = len(c0_pieces)
            c0_pieces.append((n.id, _make_piece(cfg, comp, inside, sheaf, N, P)))
        offs = {}
        for pi in range(start, len(c0_pieces)):
            offs[pi] = len(c0_keys)
            c0_keys.extend((pi, k) for k in c0_pieces[pi][1].keys)

        def functional(cid, m, fn):
            pi = local[cid]
            pc = c0_pieces[pi][1]
            e = sheaf.twist * cfg.degree(cid)
            out = {}
            for i, k in enumerate(pc.keys):
                v = fn(k, m, e)
                if v:
                    out[offs[pi] + i] = v
            return out

        if sheaf.vector:
            for cid, m in n.branches:
                if m != INF:  # vanishing at infinity is built into the degree cap
                    row = functional(cid, m, _value_functional)
                    if row:
                        rows.append(row)
            bal: dict[int, Fraction] = {}
            for cid, m in n.branches:
                for j, v in functional(cid, m, _rotation_functional).items():
                    bal[j] = bal.get(j, Fraction(0)) + v
            rows.append({j: v for j, v in bal.items() if v})
        else:
            vals = [functional(cid, m, _value_functional) for cid, m in n.branches]
            for other in vals[1:]:
                row = dict(other)
                for j, v in vals[0].items():
                    row[j] = row.get(j, Fraction(0)) - v
                row = {j: v for j, v in row.items() if v}
                if row:
                    rows.append(row)
    c0_index = {ck: j for j, ck in enumerate(c0_keys)}

    c1_pieces, c1_keys = [], []
    for comp in cfg.components:
        if len(comp_nodes[comp.id]) == 2:
            c1_pieces.append(_make_piece(cfg, comp, (), sheaf, N, P))
    # high orders first, so cokernel representatives come out as low-order terms
    for pi, pc in enumerate(c1_pieces):
        c1_keys.extend((pi, k) for k in pc.keys)
    c1_keys.sort(key=lambda t: (-key_order(t[1])[0], t[0], key_order(t[1])))
    c1_index = {ck: j for j, ck in enumerate(c1_keys)}
    c1_of = {pc.comp: i for i, pc in enumerate(c1_pieces)}

    ent = {}
    for j, (pi, key) in enumerate(c0_keys):
        nid, pc = c0_pieces[pi]
        nodes = comp_nodes[pc.comp]
        if len(nodes) != 2:
            continue
        sign = 1 if nid == nodes[1] else -1
        ti = c1_of[pc.comp]
        if (ti, key) not in c1_index:
            raise TruncationLeak(f"restriction of {key} on {pc.comp} leaves the intersection basis")
        ent[(c1_index[(ti, key)], j)] = sign
    constraints = Mat(len(rows), len(c0_keys),
                      {(i, j): v for i, r in enumerate(rows) for j, v in r.items()})
    d = Mat(len(c1_keys), len(c0_keys), ent)
    return CechComplex(cfg, sheaf, N, P, node_ids, c0_pieces, c0_keys, c1_pieces, c1_keys,
                       constraints, d, c0_index, c1_index)


# -- sections ----------------------------------------------------------------------

@dataclass(frozen=True)
class GlobalSection:
    """A section over the whole configuration: one rational function per component."""

    sheaf: Sheaf
    parts: tuple  # ((component id, RatFun), ...) sorted by component id

    @classmethod
    def make(cls, sheaf: Sheaf | str, parts: dict) -> "GlobalSection":
        if isinstance(sheaf, str):
            sheaf = Sheaf.parse(sheaf)
        clean = {c: (f if isinstance(f, RatFun) else RatFun.const(f)) for c, f in parts.items()}
        return cls(sheaf, tuple(sorted((c, f) for c, f in clean.items() if f)))

    @property
    def part(self) -> dict:
        return dict(self.parts)

    def on(self, comp: str) -> RatFun:
        return self.part.get(comp, RatFun())

    def __add__(self, other: "GlobalSection") -> "GlobalSection":
        if self.sheaf != other.sheaf:
            raise ValueError("sections of different sheaves")
        a, b = self.part, other.part
        return GlobalSection.make(self.sheaf, {c: a.get(c, RatFun()) + b.get(c, RatFun()) for c in set(a) | set(b)})

    def __sub__(self, other: "GlobalSection") -> "GlobalSection":
        return self + other.scale(-1)

    def scale(self, c) -> "GlobalSection":
        return GlobalSection.make(self.sheaf, {k: f.scale(c) for k, f in self.parts})

    def __mul__(self, other: "GlobalSection") -> "GlobalSection":
        if self.sheaf.vector and other.sheaf.vector:
            raise ValueError("cannot multiply two vector fields")
        sheaf = Sheaf(self.sheaf.vector or other.sheaf.vector, self.sheaf.twist + other.sheaf.twist)
        a, b = self.part, other.part
        return GlobalSection.make(sheaf, {c: a[c] * b[c] for c in set(a) & set(b)})

    def __eq__(self, other) -> bool:
        return isinstance(other, GlobalSection) and self.sheaf == other.sheaf and self.parts == other.parts

    def __hash__(self):
        return hash((self.sheaf, self.parts))

    def render(self) -> str:
        if not self.parts:
            return "0"
        return "; ".join(f"{c}: {f.render()}" for c, f in self.parts)


def unit_section(cfg: Configuration) -> GlobalSection:
    return GlobalSection.make("O", {c.id: RatFun.const(1) for c in cfg.components})


def section_to_c0(cx: CechComplex, s: GlobalSection) -> list[Fraction]:
    """Raw C^0 vector of a global section (restricting it to every open set)."""
    if s.sheaf != cx.sheaf:
        raise ValueError(f"section of {s.sheaf.name} in a complex of {cx.sheaf.name}")
    vec = [Fraction(0)] * len(cx.c0_keys)
    parts = s.part
    for pi, (_, pc) in enumerate(cx.c0_pieces):
        f = parts.get(pc.comp)
        if f is None:
            continue
        for k, v in pc.coords(f).items():
            vec[cx.c0_index[(pi, k)]] = v
    return vec


def c0_to_section(cx: CechComplex, vec: Sequence[Fraction]) -> GlobalSection:
    parts: dict[str, dict] = {}
    seen = set()
    for pi, (_, pc) in enumerate(cx.c0_pieces):
        if pc.comp in seen:
            continue
        seen.add(pc.comp)
        parts[pc.comp] = {}
    first = {}
    for pi, (_, pc) in enumerate(cx.c0_pieces):
        first.setdefault(pc.comp, pi)
    for j, v in enumerate(vec):
        if v:
            pi, key = cx.c0_keys[j]
            if first[cx.c0_pieces[pi][1].comp] == pi:
                parts[cx.c0_pieces[pi][1].comp][key] = v
    return GlobalSection.make(cx.sheaf, {c: RatFun(t) for c, t in parts.items()})


def section_weight(cfg: Configuration, s: GlobalSection) -> int:
    """Largest pole order at a puncture (in the normal form for vector fields)."""
    w = 0
    for cid, f in s.parts:
        comp = cfg.component(cid)
        for q in comp.punctures:
            if q == INF:
                e = s.sheaf.twist * cfg.degree(cid)
                shift = e + (sum(1 for m in comp.marks if m != INF) if s.sheaf.vector else 0)
                w = max(w, f.degree() - shift)
            else:
                w = max(w, f.pole_order(q))
    return w


def is_global_section(cx: CechComplex, s: GlobalSection) -> bool:
    try:
        v = section_to_c0(cx, s)
    except TruncationLeak:
        return False
    return not any(cx.constraints.apply(v)) and not any(cx.d.apply(v))


# -- cohomology --------------------------------------------------------------------

class Cohomology:
    """Kernel and cokernel of the Čech differential with explicit representatives."""

    def __init__(self, cx: CechComplex):
        self.complex = cx
        stacked = _stack(cx.constraints, cx.d)
        self.h0 = kernel_basis(stacked)
        image = cx.d @ Mat.from_columns(cx.c0_basis, rows=len(cx.c0_keys)) if cx.c0_basis else Mat(len(cx.c1_keys), 0)
        self._cok = Cokernel(image)

    @property
    def h0_dim(self) -> int:
        return len(self.h0)

    @property
    def h1_dim(self) -> int:
        return len(self._cok)

    @cached_property
    def h0_sections(self) -> list[GlobalSection]:
        return [c0_to_section(self.complex, v) for v in self.h0]

    @property
    def h1_representatives(self) -> list[list[Fraction]]:
        return self._cok.basis

    def h1_representative_parts(self) -> list[dict[str, RatFun]]:
        return [self.complex.c1_parts(v) for v in self._cok.basis]

    def project(self, c1_vec) -> list[Fraction]:
        return self._cok.project(c1_vec)

    def filtered_h0(self, w: int) -> list[list[Fraction]]:
        """Global sections whose pole order at every puncture is at most ``w``."""
        cx = self.complex
        extra = [{j: Fraction(1)} for j in range(len(cx.c0_keys)) if cx.c0_weight(j) > w]
        stacked = _stack(cx.constraints, cx.d)
        rows = stacked.row_dicts() + extra
        m = Mat(len(rows), len(cx.c0_keys), {(i, j): v for i, r in enumerate(rows) for j, v in r.items()})
        return kernel_basis(m)

    def filtered_dims(self, max_weight: int) -> list[int]:
        return [len(self.filtered_h0(w)) for w in range(max_weight + 1)]


def _stack(a: Mat, b: Mat) -> Mat:
    ent = dict(a.entries)
    ent.update({(r + a.rows, c): v for (r, c), v in b.entries.items()})
    return Mat(a.rows + b.rows, a.cols, ent)


def cohomology(cx: CechComplex) -> Cohomology:
    return Cohomology(cx)


def section_basis(cfg: Configuration, node: str | tuple, sheaf: Sheaf | str, N: int) -> list[tuple[str, GlobalSection]]:
    """Labelled basis of sections over ``U_p`` (a node id) or ``U_p ∩ U_q`` (a pair).

    Labels name the leading term; the list is truncated at order ``N``.
    """
    cx = build_complex(cfg, sheaf, N)
    if isinstance(node, str):
        idx = [j for j, (pi, _) in enumerate(cx.c0_keys) if cx.c0_pieces[pi][0] == node]
        if not idx:
            raise KeyError(node)
        sub = Mat.from_rows([[row.get(j, Fraction(0)) for j in idx] for row in cx.constraints.row_dicts()],
                            cols=len(idx)) if cx.constraints.rows else Mat(0, len(idx))
        out = []
        for v in kernel_basis(sub):
            full = [Fraction(0)] * len(cx.c0_keys)
            for j, x in zip(idx, v):
                full[j] = x
            parts: dict[str, dict] = {}
            for j, x in zip(idx, v):
                if x:
                    pi, key = cx.c0_keys[j]
                    parts.setdefault(cx.c0_pieces[pi][1].comp, {})[key] = x
            sec = GlobalSection.make(cx.sheaf, {c: RatFun(t) for c, t in parts.items()})
            out.append((_label(sec), sec))
        return out
    p, q = node
    comps = [pc for pc in cx.c1_pieces
             if set(cfg.adjacent_nodes(pc.comp)) == {p, q}]
    out = []
    for pc in comps:
        for key in pc.keys:
            sec = GlobalSection.make(cx.sheaf, {pc.comp: RatFun({key: 1})})
            out.append((_label(sec), sec))
    return out


def _label(sec: GlobalSection) -> str:
    return sec.render()


# -- structure constants -----------------------------------------------------------

def _global_key_order(cfg: Configuration):
    pos = {c.id: i for i, c in enumerate(cfg.components)}
    return lambda ck: (pos[ck[0]], key_order(ck[1]))


def canonical_basis(cfg: Configuration, sections: Sequence[GlobalSection]) -> list[GlobalSection]:
    """Reduced row echelon basis of the span, independent of truncation order."""
    if not sections:
        return []
    sheaf = sections[0].sheaf
    cols = sorted({(c, k) for s in sections for c, f in s.parts for k in f.terms},
                  key=_global_key_order(cfg))
    cidx = {ck: j for j, ck in enumerate(cols)}
    rows = []
    for s in sections:
        rows.append({cidx[(c, k)]: v for c, f in s.parts for k, v in f.terms.items()})
    m = Mat(len(rows), len(cols), {(i, j): v for i, r in enumerate(rows) for j, v in r.items()})
    red, _, r = rref(m)
    out = []
    for i, row in enumerate(red.row_dicts()[:r]):
        parts: dict[str, dict] = {}
        for j, v in row.items():
            c, k = cols[j]
            parts.setdefault(c, {})[k] = v
        out.append(GlobalSection.make(sheaf, {c: RatFun(t) for c, t in parts.items()}))
    return out


def _solve_in(cfg, basis: Sequence[GlobalSection], s: GlobalSection) -> list[Fraction] | None:
    cols = sorted({(c, k) for b in list(basis) + [s] for c, f in b.parts for k in f.terms},
                  key=_global_key_order(cfg))
    cidx = {ck: j for j, ck in enumerate(cols)}

    def vec(x):
        v = [Fraction(0)] * len(cols)
        for c, f in x.parts:
            for k, val in f.terms.items():
                v[cidx[(c, k)]] = val
        return v
    return SpanSolver([vec(b) for b in basis], len(cols)).solve(vec(s))


@dataclass
class RingConstants:
    family: str
    dims: list                 # per weight (graded piece for L, filtered increment for O)
    basis: dict                # weight -> list of GlobalSection (canonical)
    constants: dict            # ((w1, i), (w2, j)) -> {(w, k): c}
    relation_checks: list = field(default_factory=list)  # (relation text, holds)

    def to_dict(self) -> dict:
        return {"family": self.family, "dims": self.dims,
                "constants": {f"{a}*{b}": {str(k): str(v) for k, v in sorted(c.items())}
                              for (a, b), c in sorted(self.constants.items())},
                "relations": [{"relation": r, "holds": ok} for r, ok in self.relation_checks]}


def graded_h0_bases(cfg: Configuration, family: str, max_weight: int, N: int) -> dict[int, list[GlobalSection]]:
    """Canonical bases per weight.

    ``family="L"`` gives ``H^0(L^k)`` for ``k <= max_weight``; ``family="O"``
    gives a complement of ``F_{w-1}`` in ``F_w`` for the pole-order filtration.
    """
    out = {}
    if family == "L":
        for k in range(max_weight + 1):
            h = cohomology(build_complex(cfg, Sheaf(False, k), N))
            out[k] = canonical_basis(cfg, h.h0_sections)
        return out
    if family != "O":
        raise ValueError("family must be 'O' or 'L'")
    if max_weight > N:
        raise TruncationLeak(f"weight {max_weight} exceeds truncation {N}")
    cx = build_complex(cfg, Sheaf(False, 0), N)
    h = cohomology(cx)
    prev: list[GlobalSection] = []
    for w in range(max_weight + 1):
        secs = canonical_basis(cfg, [c0_to_section(cx, v) for v in h.filtered_h0(w)])
        new = [s for s in secs if _solve_in(cfg, prev, s) is None] if prev else secs
        # keep an independent complement of the previous filtration step
        chosen: list[GlobalSection] = []
        for s in new:
            if _solve_in(cfg, prev + chosen, s) is None:
                chosen.append(s)
        out[w] = chosen
        prev = prev + chosen
    return out


def h0_ring_constants(cfg: Configuration, family: str, max_weight: int, N: int,
                      generators: dict | None = None, relations: Sequence = ()) -> RingConstants:
    """Multiply basis sections branchwise and re-expand; optionally test named relations.

    ``generators`` maps names to global sections; ``relations`` are
    :class:`~nodalmirror.polys.Poly` objects in those names, each checked to
    vanish identically as a section.
    """
    bases = graded_h0_bases(cfg, family, max_weight, N)
    flat = [(w, i, s) for w in sorted(bases) for i, s in enumerate(bases[w])]
    consts = {}
    for a, (w1, i, s1) in enumerate(flat):
        for w2, j, s2 in flat[a:]:
            w = w1 + w2
            if w > max_weight:
                continue
            prod = s1 * s2
            if family == "L":
                target = [(w, k, b) for k, b in enumerate(bases[w])]
            else:
                target = [(x, k, b) for x, k, b in flat if x <= w]
            coeffs = _solve_in(cfg, [b for _, _, b in target], prod)
            if coeffs is None:
                raise TruncationLeak(f"product of basis sections at weight {w} left the computed span")
            consts[((w1, i), (w2, j))] = {(x, k): c for (x, k, _), c in zip(target, coeffs) if c}
    checks = []
    if generators:
        for rel in relations:
            checks.append((rel.render(), not evaluate_relation(rel, generators).parts))
    dims = [len(bases[w]) for w in sorted(bases)]
    return RingConstants(family, dims, bases, consts, checks)


def evaluate_relation(rel, generators: dict) -> GlobalSection:
    """Evaluate a polynomial in named sections; mixed twists are allowed per monomial."""
    total = None
    for exp, c in rel.terms.items():
        term = None
        for (name, _), a in zip(rel.variables, exp):
            for _ in range(a):
                term = generators[name] if term is None else term * generators[name]
        if term is None:
            raise ValueError("relations must not contain constant terms")
        term = term.scale(c)
        total = term if total is None else _add_any(total, term)
    return total if total is not None else GlobalSection.make("O", {})


def _add_any(a: GlobalSection, b: GlobalSection) -> GlobalSection:
    # a homogeneous relation adds sections of one sheaf; filtered ones may mix twists of O only
    if a.sheaf != b.sheaf:
        raise ValueError(f"cannot add sections of {a.sheaf.name} and {b.sheaf.name}")
    return a + b


def multiply_cocycle(cx_target: CechComplex, s: GlobalSection, parts: dict[str, RatFun]) -> list[Fraction]:
    """C^1 vector of ``s`` times a cocycle given by its component parts."""
    sp = s.part
    return cx_target.c1_vector({c: sp.get(c, RatFun()) * f for c, f in parts.items()})


def h1_module_constants(cfg: Configuration, sheaf: Sheaf | str, generators: dict, N: int,
                        reps: Sequence[dict] | None = None) -> dict[str, list[list[Fraction]]]:
    """Matrices of multiplication by each named section on ``H^1``.

    Column ``j`` is the image of representative ``j`` in the representative
    basis of the target ``H^1``.
    """
    if isinstance(sheaf, str):
        sheaf = Sheaf.parse(sheaf)
    src = cohomology(build_complex(cfg, sheaf, N))
    reps = src.h1_representative_parts() if reps is None else reps
    out = {}
    for name, s in generators.items():
        tsheaf = Sheaf(sheaf.vector or s.sheaf.vector, sheaf.twist + s.sheaf.twist)
        tgt = src if tsheaf == sheaf else cohomology(build_complex(cfg, tsheaf, N))
        cols = [tgt.project(multiply_cocycle(tgt.complex, s, r)) for r in reps]
        out[name] = cols
    return out


@dataclass
class Stabilization:
    stable: bool
    details: list

    def __bool__(self) -> bool:
        return self.stable


def stabilization_check(cfg: Configuration, sheaf: Sheaf | str, N: int, N2: int,
                        generators: dict | None = None, max_weight: int | None = None) -> Stabilization:
    """Compare truncations ``N < N2``: dims, bases of ``h0``, ``h1`` and module constants."""
    if isinstance(sheaf, str):
        sheaf = Sheaf.parse(sheaf)
    if not N < N2:
        raise ValueError("need N < N2")
    details = []
    a = cohomology(build_complex(cfg, sheaf, N))
    b = cohomology(build_complex(cfg, sheaf, N2))
    if a.h1_dim != b.h1_dim:
        details.append(f"h1 dims differ: {a.h1_dim} vs {b.h1_dim}")
    else:
        reps = a.h1_representative_parts()
        proj = [b.project(b.complex.c1_vector(r)) for r in reps]
        if proj and rank(Mat.from_rows(proj, cols=b.h1_dim)) != a.h1_dim:
            details.append("h1 representatives at the lower truncation are dependent at the higher one")
    if cfg.punctured:
        w = N if max_weight is None else min(max_weight, N)
        for x in range(w + 1):
            fa = canonical_basis(cfg, [c0_to_section(a.complex, v) for v in a.filtered_h0(x)])
            fb = canonical_basis(cfg, [c0_to_section(b.complex, v) for v in b.filtered_h0(x)])
            if fa != fb:
                details.append(f"filtered h0 differs at weight {x}: dims {len(fa)} vs {len(fb)}")
                break
    else:
        if canonical_basis(cfg, a.h0_sections) != canonical_basis(cfg, b.h0_sections):
            details.append(f"h0 differs: dims {a.h0_dim} vs {b.h0_dim}")
    if generators and not details and a.h1_dim:
        try:
            reps = a.h1_representative_parts()
            ma = h1_module_constants(cfg, sheaf, generators, N, reps)
            mb = h1_module_constants(cfg, sheaf, generators, N2, reps)
            for name, s in generators.items():
                tsheaf = Sheaf(sheaf.vector or s.sheaf.vector, sheaf.twist + s.sheaf.twist)
                ta = cohomology(build_complex(cfg, tsheaf, N))
                tb = cohomology(build_complex(cfg, tsheaf, N2))
                change = [tb.project(tb.complex.c1_vector(r)) for r in ta.h1_representative_parts()]
                for j, col in enumerate(ma[name]):
                    pred = [sum((change[i][r] * col[i] for i in range(len(col))), Fraction(0))
                            for r in range(tb.h1_dim)]
                    if pred != mb[name][j]:
                        details.append(f"action of {name} on h1 class {j} changes with truncation")
                        break
        except TruncationLeak as exc:
            details.append(f"truncation leak: {exc}")
    return Stabilization(not details, details)
