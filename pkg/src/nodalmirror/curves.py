"""Trivalent configurations of rational curves and the standard necklace mirrors.

Every component is a copy of P^1 with one global chart ``x``.  Points are
finite rationals or the token ``INF``; an affine line is a P^1 punctured at
``INF``.  Nodes glue exactly three branches ``(component, point)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

INF = "inf"
Point = Union[Fraction, str]


class ConfigError(ValueError):
    """Raised for malformed configurations or builder parameters."""


def parse_point(p) -> Point:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    s = str(p).strip()
    if s in ("inf", "oo", "∞", "infinity"):
        return INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad point {p!r}") from exc


def point_str(p: Point) -> str:
    return INF if p == INF else str(p)


def _point_order(p: Point):
    return (1, 0) if p == INF else (0, p)


@dataclass(frozen=True)
class Component:
    id: str
    punctures: tuple = ()
    marks: tuple = ()
    chart: str = "x"

    def __post_init__(self):
        object.__setattr__(self, "punctures", tuple(parse_point(p) for p in self.punctures))
        object.__setattr__(self, "marks", tuple(parse_point(p) for p in self.marks))

    @property
    def is_affine_line(self) -> bool:
        return INF in self.punctures

    def to_dict(self) -> dict:
        return {"id": self.id, "punctures": [point_str(p) for p in self.punctures],
                "marks": [point_str(p) for p in self.marks]}


@dataclass(frozen=True)
class Node:
    id: str
    branches: tuple  # ((component id, point), ...)

    def __post_init__(self):
        object.__setattr__(self, "branches",
                           tuple((str(c), parse_point(p)) for c, p in self.branches))

    def to_dict(self) -> dict:
        return {"id": self.id, "branches": [[c, point_str(p)] for c, p in self.branches]}


@dataclass(frozen=True)
class Configuration:
    components: tuple
    nodes: tuple
    distinguished: str | None = None
    bundle: dict = field(default_factory=dict)  # component id -> degree
    label: str = ""

    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def degree(self, cid: str) -> int:
        return int(self.bundle.get(cid, 0))

    @property
    def punctured(self) -> bool:
        return any(c.punctures for c in self.components)

    def node_of(self, cid: str, point: Point) -> Node:
        for n in self.nodes:
            if (cid, point) in n.branches:
                return n
        raise KeyError((cid, point))

    def adjacent_nodes(self, cid: str) -> list[str]:
        out = []
        for n in self.nodes:
            if any(c == cid for c, _ in n.branches) and n.id not in out:
                out.append(n.id)
        return out

    def betti1(self) -> int:
        """First Betti number of the dual graph (components and nodes as vertices)."""
        edges = sum(len(n.branches) for n in self.nodes)
        return edges - len(self.nodes) - len(self.components) + _n_connected(self)

    def to_dict(self) -> dict:
        out = {"components": [c.to_dict() for c in self.components],
               "nodes": [n.to_dict() for n in self.nodes],
               "bundle": {k: v for k, v in sorted(self.bundle.items()) if v}}
        if self.distinguished:
            out["distinguished"] = self.distinguished
        if self.label:
            out["label"] = self.label
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Configuration":
        try:
            comps = tuple(Component(c["id"], tuple(c.get("punctures", ())), tuple(c.get("marks", ())))
                          for c in d["components"])
            nodes = tuple(Node(n["id"], tuple(tuple(b) for b in n["branches"])) for n in d["nodes"])
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc
        return cls(comps, nodes, d.get("distinguished"), dict(d.get("bundle", {})), d.get("label", ""))

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        return cls.from_dict(json.loads(text))


def _n_connected(c: Configuration) -> int:
    parent = {x.id: x.id for x in c.components}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for n in c.nodes:
        ids = [b for b, _ in n.branches if b in parent]
        for other in ids[1:]:
            ra, rb = find(ids[0]), find(other)
            if ra != rb:
                parent[ra] = rb
    return len({find(a) for a in parent})


def validate(c: Configuration) -> list[str]:
    """Return every violated invariant; an empty list means the configuration is sound."""
    errors = []
    ids = [x.id for x in c.components]
    if len(set(ids)) != len(ids):
        errors.append("duplicate component ids")
    if len({n.id for n in c.nodes}) != len(c.nodes):
        errors.append("duplicate node ids")
    comps = {x.id: x for x in c.components}
    for x in c.components:
        pts = list(x.punctures) + list(x.marks)
        if len(set(pts)) != len(pts):
            clash = sorted({point_str(p) for p in pts if pts.count(p) > 1})
            errors.append(f"component {x.id}: repeated point(s) {', '.join(clash)}")
    used: dict = {}
    for n in c.nodes:
        if len(n.branches) != 3:
            errors.append(f"node {n.id} not trivalent ({len(n.branches)} branches)")
        for cid, p in n.branches:
            if cid not in comps:
                errors.append(f"node {n.id}: unknown component {cid}")
                continue
            if p not in comps[cid].marks:
                if p in comps[cid].punctures:
                    errors.append(f"node {n.id}: branch point {point_str(p)} on {cid} is a puncture")
                else:
                    errors.append(f"node {n.id}: {point_str(p)} is not a mark of {cid}")
            if (cid, p) in used:
                errors.append(f"mark {point_str(p)} on {cid} used by nodes {used[(cid, p)]} and {n.id}")
            used[(cid, p)] = n.id
    for x in c.components:
        for p in x.marks:
            if (x.id, p) not in used:
                errors.append(f"mark {point_str(p)} on {x.id} not attached to any node")
    if c.components and _n_connected(c) != 1:
        errors.append("configuration is disconnected")
    if c.distinguished is not None and c.distinguished not in comps:
        errors.append(f"distinguished component {c.distinguished} does not exist")
    for k in c.bundle:
        if k not in comps:
            errors.append(f"bundle degree given for unknown component {k}")
    return errors


def ensure_valid(c: Configuration) -> Configuration:
    errs = validate(c)
    if errs:
        raise ConfigError("; ".join(errs))
    return c


# -- canonical builders ------------------------------------------------------------

def _necklace(g: int) -> tuple[dict, dict]:
    m = g - 1
    comps: dict[str, dict] = {}
    nodes: dict[str, list] = {}
    for i in range(1, m + 1):
        nodes[f"a{i}"] = []
        nodes[f"b{i}"] = []
    for i in range(1, m + 1):
        nxt = i % m + 1
        for tag in ("a", "b"):
            cid = f"D{i}{tag}"
            comps[cid] = {"punctures": [], "marks": [Fraction(0), INF]}
            nodes[f"a{i}"].append((cid, Fraction(0)))
            nodes[f"b{i}"].append((cid, INF))
        cid = f"E{i}"
        comps[cid] = {"punctures": [], "marks": [Fraction(0), INF]}
        nodes[f"b{i}"].append((cid, Fraction(0)))
        nodes[f"a{nxt}"].append((cid, INF))
    return comps, nodes


def build_mirror(g: int, variant: str = "closed", ell: int = 1, k: int = 0,
                 puncture=Fraction(-1)) -> tuple[Configuration, dict]:
    """Necklace mirror for genus ``g``.

    ``variant`` is ``closed`` (compact), ``nodal`` (``ell`` punctured double
    edges) or ``open`` (one punctured double edge and ``k`` affine lines
    attached by splitting connector components).  Returns the configuration
    and its line-bundle degrees (degree 1 on ``D1a``).
    """
    if not isinstance(g, int) or g < 2:
        raise ConfigError("genus must be an integer >= 2")
    if variant not in ("closed", "nodal", "open"):
        raise ConfigError(f"unknown variant {variant!r}")
    comps, nodes = _necklace(g)
    q = parse_point(puncture)
    if q in (Fraction(0), INF):
        raise ConfigError("puncture must avoid the node marks 0 and inf")
    if variant == "nodal":
        if not 1 <= ell <= g - 1:
            raise ConfigError(f"need 1 <= l <= g-1 = {g - 1}")
        for i in range(1, ell + 1):
            comps[f"D{i}a"]["punctures"].append(q)
    elif variant == "open":
        if k < 0:
            raise ConfigError("k must be >= 0")
        comps["D1a"]["punctures"].append(q)
        tails = {i: f"E{i}" for i in range(1, g)}
        for j in range(1, k + 1):
            i = (j - 1) % (g - 1) + 1
            old = tails[i]
            comps.pop(old)
            left, right, line, node = f"E{i}.{2 * j - 1}", f"E{i}.{2 * j}", f"A{j}", f"q{j}"
            comps[left] = {"punctures": [], "marks": [Fraction(0), INF]}
            comps[right] = {"punctures": [], "marks": [Fraction(0), INF]}
            comps[line] = {"punctures": [INF], "marks": [Fraction(0)]}
            for nid, br in nodes.items():
                nodes[nid] = [((left, p) if (c == old and p == Fraction(0)) else
                               (right, p) if (c == old and p == INF) else (c, p)) for c, p in br]
            nodes[node] = [(left, INF), (right, Fraction(0)), (line, Fraction(0))]
            tails[i] = right
    components = tuple(Component(cid, tuple(v["punctures"]), tuple(v["marks"])) for cid, v in comps.items())
    node_objs = tuple(Node(nid, tuple(br)) for nid, br in nodes.items())
    bundle = {"D1a": 1}
    label = {"closed": f"closed:g={g}", "nodal": f"nodal:g={g},l={ell}", "open": f"open:g={g},k={k}"}[variant]
    cfg = Configuration(components, node_objs, "D1a", bundle, label)
    ensure_valid(cfg)
    return cfg, dict(bundle)


def parse_builder(spec: str) -> Configuration:
    """``closed:g=2``, ``nodal:g=3,l=1`` or ``open:g=2,k=1``."""
    try:
        variant, _, rest = spec.partition(":")
        params = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, _, val = item.partition("=")
            params[key.strip()] = int(val)
    except ValueError as exc:
        raise ConfigError(f"bad builder string {spec!r}") from exc
    if "g" not in params:
        raise ConfigError(f"builder string {spec!r} is missing g")
    unknown = set(params) - {"g", "l", "k"}
    if unknown:
        raise ConfigError(f"unknown builder parameter(s) {sorted(unknown)}")
    return build_mirror(params["g"], variant.strip(), ell=params.get("l", 1), k=params.get("k", 0))[0]


def chi_O_oracle(c: Configuration) -> int:
    """Euler characteristic of the structure sheaf of a compact configuration."""
    ensure_valid(c)
    if c.punctured:
        raise ConfigError("Euler characteristic oracle needs a compact configuration")
    return len(c.components) - 2 * len(c.nodes)


def single_line() -> Configuration:
    return Configuration((Component("P", (), ()),), ())


def sorted_points(points: Iterable[Point]) -> list[Point]:
    return sorted(points, key=_point_order)
