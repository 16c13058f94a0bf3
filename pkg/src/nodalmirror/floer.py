"""Bases and product tables for fixed-point Floer cohomology of Dehn twist powers.

Generators are labelled by :class:`Gen`; a class at stage ``d`` (the power
of the twist) is a rational combination of generators of one parity.

Even kinds: ``F`` (the class f), ``K`` (fundamental class, stage 0 only),
``E(i, c)`` and ``U(i, j)``.  Odd kinds: ``G(c)``, ``VARPHI(j)``, ``H(i, c)``,
``V(i, j)``, ``MORSE(r)`` and ``CVAN`` (stage 0 only).  ``c`` indexes twist
circles, ``j`` punctures.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

EVEN_KINDS = ("F", "K", "E", "U")
ODD_KINDS = ("G", "H", "V", "VARPHI", "MORSE", "CVAN")
# order used to normalise a product before looking it up
_RANK = {k: n for n, k in enumerate(("F", "K", "E", "U", "G", "H", "V", "VARPHI", "MORSE", "CVAN"))}


class StageOverflow(ValueError):
    """Requested stage exceeds the scenario's maximum stage."""


class IndexOverflow(ValueError):
    """A puncture generator index would exceed the cutoff M."""


@dataclass(frozen=True)
class Scenario:
    genus: int
    punctures: int = 0
    circles: int = 1
    max_stage: int = 12
    index_cutoff: int = 12

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")
        if self.punctures < 0:
            raise ValueError("puncture count must be non-negative")
        if not 1 <= self.circles <= self.genus:
            raise ValueError("number of twist circles must lie in 1..genus")
        if self.circles > 1 and self.punctures:
            raise ValueError("several twist circles together with punctures are not supported")
        if self.max_stage < 1 or self.index_cutoff < 1:
            raise ValueError("cutoffs must be positive")

    @property
    def closed(self) -> bool:
        return self.punctures == 0 and self.circles == 1

    @property
    def min_stage(self) -> int:
        return 0 if self.closed else 1

    @property
    def kind(self) -> str:
        if self.punctures:
            return "punctured"
        return "multi" if self.circles > 1 else "closed"

    @property
    def n_morse(self) -> int:
        return 2 * self.genus - 1 - self.circles

    def assumptions(self) -> list[str]:
        out = []
        if self.circles > 1:
            out.append("twist circles disjoint and homologically independent")
        return out

    def to_dict(self) -> dict:
        return {"genus": self.genus, "punctures": self.punctures, "circles": self.circles,
                "max_stage": self.max_stage, "index_cutoff": self.index_cutoff}


@dataclass(frozen=True, order=True)
class Gen:
    kind: str
    i: int = 0  # position in the twist region, puncture level, or Morse index
    j: int = 1  # circle for E/H/G, puncture for U/V/VARPHI

    @property
    def parity(self) -> int:
        return 0 if self.kind in EVEN_KINDS else 1

    def render(self, d: int, s: Scenario | None = None) -> str:
        multi = s is not None and (s.circles > 1 or s.punctures > 1)
        sub = (lambda a: f"{a},{self.j}") if multi else (lambda a: f"{a}")
        k = self.kind
        if k == "F":
            return f"f^{d}"
        if k == "K":
            return "K"
        if k == "CVAN":
            return "c_van"
        if k == "MORSE":
            return f"m_{self.i}^{d}"
        if k == "G":
            return f"g_{self.j}^{d}" if multi else f"g^{d}"
        if k == "VARPHI":
            return f"phi_{self.j}^{d}" if multi else f"phi^{d}"
        name = {"E": "e", "H": "h", "U": "u", "V": "v"}[k]
        return f"{name}_{{{sub(self.i)}}}^{d}" if multi else f"{name}_{self.i}^{d}"


def F_() -> Gen: return Gen("F")
def K_() -> Gen: return Gen("K")
def E(i: int, c: int = 1) -> Gen: return Gen("E", i, c)
def H(i: int, c: int = 1) -> Gen: return Gen("H", i, c)
def U(i: int, j: int = 1) -> Gen: return Gen("U", i, j)
def V(i: int, j: int = 1) -> Gen: return Gen("V", i, j)
def G(c: int = 1) -> Gen: return Gen("G", 0, c)
def VARPHI(j: int = 1) -> Gen: return Gen("VARPHI", 0, j)
def MORSE(r: int) -> Gen: return Gen("MORSE", r)
def CVAN() -> Gen: return Gen("CVAN")


def _check_stage(s: Scenario, d: int) -> None:
    if d > s.max_stage:
        raise StageOverflow(f"stage {d} exceeds the maximum stage {s.max_stage}")
    if d < s.min_stage:
        raise ValueError(f"stage {d} is not available for the {s.kind} scenario")


def basis(s: Scenario, d: int, parity: int | str) -> list[Gen]:
    par = _parity(parity)
    _check_stage(s, d)
    g, ell, k, M = s.genus, s.circles, s.punctures, s.index_cutoff
    if d == 0:
        if par == 0:
            return [F_(), K_()]
        return [G(1), CVAN()] + [MORSE(r) for r in range(1, 2 * g - 1)]
    if par == 0:
        out = [F_()]
        out += [E(i, c) for c in range(1, ell + 1) for i in range(1, d)]
        out += [U(i, j) for j in range(1, k + 1) for i in range(1, M + 1)]
        return out
    out = [G(c) for c in range(1, ell + 1)]
    out += [VARPHI(j) for j in range(1, k + 1)]
    out += [H(i, c) for c in range(1, ell + 1) for i in range(1, d)]
    out += [V(i, j) for j in range(1, k + 1) for i in range(1, M + 1)]
    out += [MORSE(r) for r in range(1, s.n_morse + 1)]
    return out


def graded_dims(s: Scenario, d: int) -> tuple[int, int]:
    return len(basis(s, d, 0)), len(basis(s, d, 1))


def is_basis_gen(s: Scenario, gen: Gen, d: int) -> bool:
    try:
        return gen in basis(s, d, gen.parity)
    except ValueError:
        return False


def _parity(p) -> int:
    if p in (0, "even"):
        return 0
    if p in (1, "odd"):
        return 1
    raise ValueError(f"parity must be even/odd, got {p!r}")


class FloerClass:
    """Rational combination of generators at one stage and parity."""

    __slots__ = ("scenario", "stage", "parity", "coeffs")

    def __init__(self, scenario: Scenario, stage: int, parity, coeffs: Mapping[Gen, object] = ()):
        self.scenario = scenario
        self.stage = stage
        self.parity = _parity(parity)
        _check_stage(scenario, stage)
        clean = {}
        for gen, c in dict(coeffs).items():
            c = c if isinstance(c, Fraction) else Fraction(c)
            if not c:
                continue
            if gen.parity != self.parity:
                raise ValueError(f"{gen} has the wrong parity for this class")
            clean[gen] = c
        self.coeffs = clean

    @classmethod
    def of(cls, s: Scenario, gen: Gen, d: int, c=1) -> "FloerClass":
        if not is_basis_gen(s, gen, d):
            raise ValueError(f"{gen.render(d, s)} is not a generator at stage {d}")
        return cls(s, d, gen.parity, {gen: c})

    @classmethod
    def zero(cls, s: Scenario, d: int, parity) -> "FloerClass":
        return cls(s, d, parity)

    def _compatible(self, other: "FloerClass") -> None:
        if (self.scenario, self.stage, self.parity) != (other.scenario, other.stage, other.parity):
            raise ValueError("classes live in different groups")

    def __add__(self, other: "FloerClass") -> "FloerClass":
        self._compatible(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, Fraction(0)) + c
        return FloerClass(self.scenario, self.stage, self.parity, out)

    def __neg__(self) -> "FloerClass":
        return FloerClass(self.scenario, self.stage, self.parity,
                          {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other: "FloerClass") -> "FloerClass":
        return self + (-other)

    def scale(self, c) -> "FloerClass":
        c = Fraction(c)
        return FloerClass(self.scenario, self.stage, self.parity,
                          {g: c * v for g, v in self.coeffs.items()})

    def __mul__(self, other: "FloerClass") -> "FloerClass":
        return product(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FloerClass) and self.scenario == other.scenario
                and self.stage == other.stage and self.parity == other.parity
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.scenario, self.stage, self.parity, frozenset(self.coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def vector(self) -> list[Fraction]:
        b = basis(self.scenario, self.stage, self.parity)
        idx = {g: k for k, g in enumerate(b)}
        out = [Fraction(0)] * len(b)
        for g, c in self.coeffs.items():
            out[idx[g]] = c
        return out

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        order = {g: k for k, g in enumerate(basis(self.scenario, self.stage, self.parity))}
        parts = []
        for g in sorted(self.coeffs, key=lambda x: order.get(x, len(order))):
            c = self.coeffs[g]
            lab = g.render(self.stage, self.scenario)
            a = abs(c)
            parts.append(("-" if c < 0 else "+", lab if a == 1 else f"{a}*{lab}"))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    __str__ = render

    def __repr__(self) -> str:
        return f"FloerClass({self.render()!r}, stage={self.stage})"


def _idx(s: Scenario, i: int) -> int:
    if i > s.index_cutoff:
        raise IndexOverflow(f"puncture index {i} exceeds the cutoff M={s.index_cutoff}")
    return i


def _table(s: Scenario, a: Gen, m: int, b: Gen, n: int) -> dict[Gen, int]:
    """Product of generators with ``rank(a.kind) <= rank(b.kind)``."""
    ka, kb = a.kind, b.kind
    # stage 0 (closed single twist only)
    if m == 0 and ka == "F":
        return {b: 1}
    if n == 0 and kb == "F":
        return {a: 1}
    if ka == "K" or kb == "K":
        return {}
    if m == 0 or n == 0:
        x, p, y, q = (a, m, b, n) if m == 0 else (b, n, a, m)
        # x sits at stage 0 and is odd (G, CVAN or MORSE)
        if q == 0:
            if y.parity == 0:
                return {}
            # cup product on H^1 of the closed surface, up to graded sign
            if x.kind == "G" and y.kind == "CVAN":
                return {K_(): 1}
            if x.kind == "CVAN" and y.kind == "G":
                return {K_(): -1}
            if x.kind == y.kind == "MORSE":
                lo, hi = x.i, y.i
                if hi == lo + 1 and lo % 2 == 1:
                    return {K_(): 1}
                if lo == hi + 1 and hi % 2 == 1:
                    return {K_(): -1}
            return {}
        if y.parity == 1:
            return {}
        if y.kind == "F":
            if x.kind == "G":
                return {G(1): 1}
            if x.kind == "MORSE":
                return {x: 1}
            return {}  # the vanishing-cycle class is killed by f
        if y.kind == "E" and x.kind == "G":
            return {H(y.i): 1}
        return {}

    # both stages positive
    if a.parity == 1 and b.parity == 1:
        return {}
    if ka == "F":
        if kb == "F":
            out: dict[Gen, int] = {F_(): 1}
            for c in range(1, s.circles + 1):
                out[E(m, c)] = out.get(E(m, c), 0) + 1
                out[E(n, c)] = out.get(E(n, c), 0) + 1
            return out
        if kb == "E":
            return {E(b.i, b.j): 1, E(b.i + m, b.j): 1}
        if kb in ("U", "V", "MORSE"):
            return {b: 1}
        if kb == "G":
            return _sum({H(m, b.j): 1}, {H(n, b.j): 1}, {b: 1})
        if kb == "H":
            return {H(b.i, b.j): 1, H(b.i + m, b.j): 1}
        if kb == "VARPHI":
            return {b: 1, H(m, 1): 1}
    if ka == "E":
        if kb == "E":
            return {E(a.i + b.i, a.j): 1} if a.j == b.j else {}
        if kb == "G":
            return {H(a.i, a.j): 1, H(a.i + n, a.j): 1} if a.j == b.j else {}
        if kb == "H":
            return {H(a.i + b.i, a.j): 1} if a.j == b.j else {}
        if kb == "VARPHI":
            return {H(a.i, a.j): 1}
        return {}  # U, V, MORSE
    if ka == "U":
        if kb == "U":
            return {U(_idx(s, a.i + b.i), a.j): 1} if a.j == b.j else {}
        if kb == "V":
            return {V(_idx(s, a.i + b.i), a.j): 1} if a.j == b.j else {}
        if kb == "G":
            return {V(a.i, a.j): 1}
        if kb == "VARPHI":
            return {V(a.i, b.j): -1} if a.j == b.j else {}
        return {}  # H, MORSE
    raise AssertionError(f"no product rule for {ka} * {kb}")


def _sum(*ds: Mapping[Gen, int]) -> dict[Gen, int]:
    out: dict[Gen, int] = {}
    for d in ds:
        for g, c in d.items():
            out[g] = out.get(g, 0) + c
    return {g: c for g, c in out.items() if c}


def gen_product(s: Scenario, a: Gen, m: int, b: Gen, n: int) -> dict[Gen, int]:
    """Product of two basis generators at stages ``m`` and ``n``."""
    if m + n > s.max_stage:
        raise StageOverflow(f"product stage {m + n} exceeds the maximum stage {s.max_stage}")
    if _RANK[a.kind] <= _RANK[b.kind]:
        return _table(s, a, m, b, n)
    sign = -1 if (a.parity and b.parity) else 1
    res = _table(s, b, n, a, m)
    return {g: sign * c for g, c in res.items()}


def product(x: FloerClass, y: FloerClass) -> FloerClass:
    if x.scenario != y.scenario:
        raise ValueError("classes come from different scenarios")
    s = x.scenario
    d = x.stage + y.stage
    if d > s.max_stage:
        raise StageOverflow(f"product stage {d} exceeds the maximum stage {s.max_stage}")
    out: dict[Gen, Fraction] = {}
    for a, ca in x.coeffs.items():
        for b, cb in y.coeffs.items():
            for g, c in gen_product(s, a, x.stage, b, y.stage).items():
                out[g] = out.get(g, Fraction(0)) + ca * cb * c
    return FloerClass(s, d, x.parity ^ y.parity, out)


def seidel_class(s: Scenario) -> FloerClass:
    """The Seidel element, the class f at stage 1 (sign +)."""
    return FloerClass.of(s, F_(), 1)


def unit_class(s: Scenario) -> FloerClass:
    if not s.closed:
        raise ValueError("only the closed single-twist scenario has a stage-0 unit")
    return FloerClass.of(s, F_(), 0)


def product_table(s: Scenario, max_stage: int) -> list[tuple[str, str, str]]:
    """All basis products with total stage <= max_stage, rendered."""
    rows = []
    stages = range(s.min_stage, max_stage + 1)
    for m in stages:
        for n in stages:
            if m > n or m + n > max_stage:
                continue
            for pa in (0, 1):
                for pb in (0, 1):
                    for a in basis(s, m, pa):
                        for b in basis(s, n, pb):
                            try:
                                res = product(FloerClass.of(s, a, m), FloerClass.of(s, b, n))
                                txt = res.render()
                            except IndexOverflow:
                                txt = "<index overflow>"
                            rows.append((a.render(m, s), b.render(n, s), txt))
    return rows


def _mul_dicts(s: Scenario, x: Mapping[Gen, Fraction], m: int, y: Mapping[Gen, Fraction], n: int) -> dict:
    out: dict[Gen, Fraction] = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for g, c in gen_product(s, a, m, b, n).items():
                out[g] = out.get(g, 0) + ca * cb * c
    return {g: c for g, c in out.items() if c}


def check_product_laws(s: Scenario, max_total: int):
    """Graded commutativity and associativity on all basis pairs/triples up to ``max_total``.

    Triples whose products leave the index cutoff are skipped and counted.
    """
    from .report import CheckRecord, Report
    report = Report("product laws", provenance={"scenario": s.to_dict(), "max_total_stage": max_total})
    comm = report.add(CheckRecord("graded_commutativity", side="A"))
    assoc = report.add(CheckRecord("associativity", side="A"))
    bases = {d: [g for par in (0, 1) for g in basis(s, d, par)]
             for d in range(s.min_stage, max_total + 1)}
    pairs = triples = skipped = 0
    for m, bm in bases.items():
        for n, bn in bases.items():
            if m + n > max_total:
                continue
            for a in bm:
                for b in bn:
                    try:
                        ab = gen_product(s, a, m, b, n)
                        ba = gen_product(s, b, n, a, m)
                    except IndexOverflow:
                        skipped += 1
                        continue
                    pairs += 1
                    sign = -1 if a.parity and b.parity else 1
                    if ab != {g: sign * c for g, c in ba.items()}:
                        comm.fail({"a": a.render(m, s), "b": b.render(n, s)})
                    for l, bl in bases.items():
                        if m + n + l > max_total:
                            continue
                        for c in bl:
                            try:
                                left = _mul_dicts(s, ab, m + n, {c: 1}, l)
                                right = _mul_dicts(s, {a: 1}, m, gen_product(s, b, n, c, l), n + l)
                            except IndexOverflow:
                                skipped += 1
                                continue
                            triples += 1
                            if left != right:
                                assoc.fail({"a": a.render(m, s), "b": b.render(n, s), "c": c.render(l, s)})
    comm.notes.append(f"{pairs} pairs checked")
    assoc.notes.append(f"{triples} triples checked; {skipped} products skipped at the index cutoff")
    return report
