"""Weighted polynomial algebras, truncated ideals and presentation checks.

Weights are positive integers.  A relation whose terms all carry the same
weight is homogeneous; otherwise the quotient is only filtered
(``F_w`` = span of monomials of weight <= w) and every per-weight count
below is the associated graded count of that filtration.  For homogeneous
relations the two notions agree.
"""
from __future__ import annotations

import ast
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import Mat, SpanSolver, _echelon, kernel_basis, rank
from .report import CheckRecord, Report

Exp = tuple  # exponent vector
Variables = tuple  # ((name, weight), ...)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _check_vars(variables) -> Variables:
    out = tuple((str(n), int(w)) for n, w in variables)
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate generator names in {names}")
    for n, w in out:
        if w <= 0:
            raise ValueError(f"generator {n} needs a positive weight, got {w}")
    return out


class Poly:
    """Polynomial with rational coefficients in weighted variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable, terms: Mapping[Exp, object] = ()):
        self.variables = _check_vars(variables)
        n = len(self.variables)
        clean = {}
        for e, c in dict(terms).items():
            e = tuple(int(x) for x in e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e}")
            c = _frac(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    # construction
    @classmethod
    def const(cls, variables, c=1) -> "Poly":
        variables = _check_vars(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "Poly":
        variables = _check_vars(variables)
        names = [n for n, _ in variables]
        e = [0] * len(variables)
        e[names.index(name)] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def monomial(cls, variables, exp: Exp, c=1) -> "Poly":
        return cls(variables, {tuple(exp): c})

    @classmethod
    def parse(cls, text: str, variables) -> "Poly":
        return parse_poly(text, variables)

    # arithmetic
    def _same(self, other: "Poly") -> None:
        if self.variables != other.variables:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._same(other)
            return other
        return Poly.const(self.variables, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _frac(other)
            return Poly(self.variables, {e: c * v for e, v in self.terms.items()})
        self._same(other)
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.variables)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.variables == other.variables and self.terms == other.terms
        if not other:
            return not self.terms
        return self == Poly.const(self.variables, other)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # weights
    def weight_of(self, exp: Exp) -> int:
        return sum(a * w for a, (_, w) in zip(exp, self.variables))

    def weights(self) -> list[int]:
        return sorted({self.weight_of(e) for e in self.terms})

    def top_weight(self) -> int:
        return max((self.weight_of(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def part(self, weight: int) -> "Poly":
        return Poly(self.variables, {e: c for e, c in self.terms.items()
                                     if self.weight_of(e) == weight})

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [_frac(point[n]) for n, _ in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, a in zip(vals, e):
                if a:
                    t *= v ** a
            total += t
        return total

    def rename(self, variables) -> "Poly":
        """Same coefficients, generators relabelled position by position."""
        variables = _check_vars(variables)
        if len(variables) != len(self.variables):
            raise ValueError("rename needs the same number of generators")
        return Poly(variables, self.terms)

    def embed(self, variables) -> "Poly":
        """Reinterpret in a larger ring containing all current generators."""
        variables = _check_vars(variables)
        names = [n for n, _ in variables]
        idx = [names.index(n) for n, _ in self.variables]
        out = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for i, a in zip(idx, e):
                new[i] = a
            out[tuple(new)] = c
        return Poly(variables, out)

    def render(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (self.weight_of(e), e), reverse=True)
        parts = []
        for e in keys:
            c = self.terms[e]
            mono = render_monomial(self.variables, e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    __str__ = render

    def __repr__(self) -> str:
        return f"Poly({self.render()!r})"


def render_monomial(variables: Variables, exp: Exp) -> str:
    parts = []
    for (n, _), a in zip(variables, exp):
        if a == 1:
            parts.append(n)
        elif a > 1:
            parts.append(f"{n}^{a}")
    return "*".join(parts) if parts else "1"


def parse_poly(text: str, variables) -> Poly:
    """Parse integer-coefficient polynomial syntax using ``*``, ``^``, ``+``, ``-``."""
    variables = _check_vars(variables)
    names = {n for n, _ in variables}
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}: {exc.msg}") from None

    def walk(node) -> Poly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return Poly.const(variables, node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ValueError(f"unknown generator {node.id!r} in {text!r}")
            return Poly.var(variables, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError(f"exponents must be integer literals in {text!r}")
                return walk(node.left) ** exp.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise ValueError(f"unsupported syntax in polynomial {text!r}")

    return walk(tree)


# -- presentations ---------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """Quotient of a weighted polynomial ring by finitely many relations."""

    generators: Variables
    relations: tuple = ()
    kind: str = "quotient"

    def __post_init__(self):
        gens = _check_vars(self.generators)
        object.__setattr__(self, "generators", gens)
        rels = []
        for r in self.relations:
            if isinstance(r, str):
                r = parse_poly(r, gens)
            if r.variables != gens:
                raise ValueError("relation lives in a different ring")
            if r:
                rels.append(r)
        object.__setattr__(self, "relations", tuple(rels))

    @classmethod
    def free(cls, generators) -> "Presentation":
        return cls(tuple(generators), ())

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.generators]

    def weight(self, exp: Exp) -> int:
        return sum(a * w for a, (_, w) in zip(exp, self.generators))

    def is_graded(self) -> bool:
        return all(r.is_homogeneous() for r in self.relations)

    def poly(self, text: str) -> Poly:
        return parse_poly(text, self.generators)

    def to_dict(self) -> dict:
        return {"generators": [{"name": n, "weight": w} for n, w in self.generators],
                "relations": [r.render() for r in self.relations],
                "kind": "quotient"}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: Mapping) -> "Presentation":
        if d.get("kind", "quotient") != "quotient":
            raise ValueError(f"expected a quotient presentation, got kind {d.get('kind')!r}")
        gens = tuple((g["name"], g["weight"]) for g in d["generators"])
        return cls(gens, tuple(d.get("relations", ())))

    @classmethod
    def from_json(cls, text: str) -> "Presentation":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Evaluation:
    """``coeff`` times evaluation of factor ``factor`` at ``point``."""

    factor: int
    point: tuple  # ((name, value), ...)
    coeff: Fraction = Fraction(1)


@dataclass(frozen=True)
class FiberProductDescription:
    """Tuples of elements of the factors cut out by linear constraints.

    Each constraint is a sequence of :class:`Evaluation` terms whose sum
    must vanish.  Gluing rings along evaluation at the origin is the usual
    case; a module can also be cut out by a balancing condition.
    """

    factors: tuple
    constraints: tuple
    kind: str = "fiber_product"

    def to_dict(self) -> dict:
        return {"kind": "fiber_product",
                "factors": [f.to_dict() for f in self.factors],
                "constraints": [[{"factor": e.factor,
                                  "point": {n: str(v) for n, v in e.point},
                                  "coeff": str(e.coeff)} for e in c]
                                for c in self.constraints]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "FiberProductDescription":
        factors = tuple(Presentation.from_dict(f) for f in d["factors"])
        cons = tuple(tuple(Evaluation(int(e["factor"]),
                                      tuple((n, Fraction(v)) for n, v in e["point"].items()),
                                      Fraction(e.get("coeff", 1))) for e in c)
                     for c in d["constraints"])
        return cls(factors, cons)


def origin(p: Presentation) -> tuple:
    return tuple((n, Fraction(0)) for n in p.names)


def glued_at_origin(factors: Sequence[Presentation]) -> FiberProductDescription:
    """Fiber product of rings over their evaluations at the origin."""
    factors = tuple(factors)
    cons = []
    for i in range(1, len(factors)):
        cons.append((Evaluation(0, origin(factors[0])),
                     Evaluation(i, origin(factors[i]), Fraction(-1))))
    return FiberProductDescription(factors, tuple(cons))


def fiber_product_presentation(factors: Sequence[Presentation]) -> Presentation:
    """Quotient presentation of the fiber product glued at the origin.

    The generators are the union of the factor generators; products of
    generators taken from different factors vanish.
    """
    gens: list = []
    for f in factors:
        gens.extend(f.generators)
    gens = _check_vars(gens)
    rels = []
    for f in factors:
        rels.extend(r.embed(gens) for r in f.relations)
    for i, fi in enumerate(factors):
        for fj in factors[i + 1:]:
            for a in fi.names:
                for b in fj.names:
                    rels.append(Poly.var(gens, a) * Poly.var(gens, b))
    return Presentation(gens, tuple(rels))


# -- enumeration and ideals ------------------------------------------------------

def monomials_up_to(p: Presentation | Variables, max_weight: int) -> list[Exp]:
    """Monomials of weight <= max_weight, by weight then descending exponents."""
    if max_weight < 0:
        raise ValueError("max_weight must be non-negative")
    gens = p.generators if isinstance(p, Presentation) else _check_vars(p)
    weights = [w for _, w in gens]
    found: list[Exp] = []

    def rec(i, left, acc):
        if i == len(weights):
            found.append(tuple(acc))
            return
        for a in range(left // weights[i] + 1):
            acc.append(a)
            rec(i + 1, left - a * weights[i], acc)
            acc.pop()

    rec(0, max_weight, [])

    def wt(e):
        return sum(a * w for a, w in zip(e, weights))

    found.sort(key=lambda e: (wt(e), tuple(-a for a in e)))
    return found


class IdealTruncation:
    """Row-reduced span of the relation ideal inside ``F_max``.

    Columns are ordered by descending weight so every reduced row has its
    pivot on its top-weight monomial.
    """

    def __init__(self, p: Presentation, max_weight: int, slack: int | None = None):
        self.presentation = p
        self.max_weight = max_weight
        if slack is None:
            slack = max((r.top_weight() - min(r.weights()) for r in p.relations), default=0)
        self.slack = slack
        top = max_weight + slack
        self.monomials = monomials_up_to(p, top)
        order = sorted(range(len(self.monomials)),
                       key=lambda i: (-p.weight(self.monomials[i]), i))
        self.columns = [self.monomials[i] for i in order]
        self.col_index = {e: k for k, e in enumerate(self.columns)}
        rows = []
        for r in p.relations:
            rw = r.top_weight()
            for m in monomials_up_to(p, top - rw) if rw <= top else []:
                row = {}
                for e, c in r.terms.items():
                    row[self.col_index[tuple(a + b for a, b in zip(e, m))]] = c
                rows.append(row)
        reduced, pivots = _echelon(rows, len(self.columns))
        keep = [(row, piv) for row, piv in zip(reduced, pivots)
                if p.weight(self.columns[piv]) <= max_weight]
        self.rows = [r for r, _ in keep]
        self.pivots = [c for _, c in keep]
        self.pivot_set = set(self.pivots)

    def filtered_dim(self, w: int) -> int:
        p = self.presentation
        return sum(1 for c in self.pivots if p.weight(self.columns[c]) <= w)

    def graded_dims(self) -> list[int]:
        out = [0] * (self.max_weight + 1)
        for c in self.pivots:
            out[self.presentation.weight(self.columns[c])] += 1
        return out

    def basis_at(self, w: int) -> list[Poly]:
        p = self.presentation
        out = []
        for row, piv in zip(self.rows, self.pivots):
            if p.weight(self.columns[piv]) == w:
                out.append(Poly(p.generators, {self.columns[c]: v for c, v in row.items()}))
        return out

    def standard_monomials(self) -> list[Exp]:
        p = self.presentation
        return [e for e in monomials_up_to(p, self.max_weight)
                if self.col_index[e] not in self.pivot_set]

    def reduce(self, poly: Poly) -> dict[Exp, Fraction]:
        """Normal form: coefficients on standard monomials."""
        if poly.top_weight() > self.max_weight:
            raise ValueError(f"{poly.render()} exceeds the truncation weight {self.max_weight}")
        work = {self.col_index[e]: c for e, c in poly.terms.items()}
        for row, piv in zip(self.rows, self.pivots):
            f = work.get(piv)
            if f:
                for c, v in row.items():
                    nv = work.get(c, Fraction(0)) - f * v
                    if nv:
                        work[c] = nv
                    else:
                        work.pop(c, None)
        return {self.columns[c]: v for c, v in work.items()}


def ideal_truncation(p: Presentation, max_weight: int) -> dict[int, list[Poly]]:
    """Per weight, independent ideal elements whose top-weight parts span that weight."""
    it = IdealTruncation(p, max_weight)
    return {w: it.basis_at(w) for w in range(max_weight + 1)}


def quotient_dims(p: Presentation, max_weight: int) -> list[int]:
    counts = [0] * (max_weight + 1)
    for e in monomials_up_to(p, max_weight):
        counts[p.weight(e)] += 1
    ideal = IdealTruncation(p, max_weight).graded_dims()
    return [a - b for a, b in zip(counts, ideal)]


# -- concrete truncated algebras -------------------------------------------------

Vec = dict  # index -> Fraction


class WeightOverflow(ValueError):
    """A product would leave the truncated range."""


class TruncatedAlgebra:
    """Commutative algebra known on ``F_max`` through a basis and structure constants.

    Basis element ``i`` has weight ``weights[i]``; a basis of ``F_w`` is the
    set of elements with weight <= w.  ``products[(i, j)]`` is stored for
    ``weights[i] + weights[j] <= max_weight``.
    """

    def __init__(self, labels, weights, products, unit, max_weight, filtered=False, source=None):
        self.labels = list(labels)
        self.weights = list(weights)
        self.products = dict(products)
        self.unit = dict(unit)
        self.max_weight = max_weight
        self.filtered = filtered
        self.source = source
        self.reducer = None  # set for algebras built from a quotient presentation

    def __len__(self) -> int:
        return len(self.labels)

    def dims(self) -> list[int]:
        out = [0] * (self.max_weight + 1)
        for w in self.weights:
            out[w] += 1
        return out

    def filtered_indices(self, w: int) -> list[int]:
        return [i for i, x in enumerate(self.weights) if x <= w]

    def top_weight(self, v: Vec) -> int:
        return max((self.weights[i] for i, c in v.items() if c), default=-1)

    def basis_vector(self, i: int) -> Vec:
        return {i: Fraction(1)}

    def mul(self, u: Vec, v: Vec) -> Vec:
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            if not a:
                continue
            for j, b in v.items():
                if not b:
                    continue
                if self.weights[i] + self.weights[j] > self.max_weight:
                    raise WeightOverflow(
                        f"product {self.labels[i]} * {self.labels[j]} exceeds weight {self.max_weight}")
                key = (i, j) if (i, j) in self.products else (j, i)
                for k, c in self.products[key].items():
                    out[k] = out.get(k, Fraction(0)) + a * b * c
        return {k: c for k, c in out.items() if c}

    def dense(self, v: Vec) -> list[Fraction]:
        out = [Fraction(0)] * len(self)
        for i, c in v.items():
            out[i] += c
        return out

    def render(self, v: Vec) -> str:
        parts = []
        for i in sorted(v):
            c = v[i]
            if not c:
                continue
            lab = self.labels[i]
            parts.append(("-" if c < 0 else "+", lab if abs(c) == 1 else f"{abs(c)}*{lab}"))
        if not parts:
            return "0"
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    @classmethod
    def from_presentation(cls, p: Presentation, max_weight: int) -> "TruncatedAlgebra":
        it = IdealTruncation(p, max_weight)
        std = it.standard_monomials()
        index = {e: k for k, e in enumerate(std)}
        weights = [p.weight(e) for e in std]
        labels = [render_monomial(p.generators, e) for e in std]
        products = {}
        for i, a in enumerate(std):
            for j in range(i, len(std)):
                b = std[j]
                if weights[i] + weights[j] > max_weight:
                    continue
                prod = tuple(x + y for x, y in zip(a, b))
                nf = it.reduce(Poly.monomial(p.generators, prod))
                products[(i, j)] = {index[e]: c for e, c in nf.items()}
        unit = {index[(0,) * len(p.generators)]: Fraction(1)} if max_weight >= 0 else {}
        alg = cls(labels, weights, products, unit, max_weight,
                  filtered=not p.is_graded(), source=p)
        alg.reducer = (it, index)
        return alg

    def element(self, poly: Poly | str) -> Vec:
        """Normal form of a polynomial in the presentation's generators."""
        if self.reducer is None:
            raise ValueError("algebra was not built from a presentation")
        it, index = self.reducer
        if isinstance(poly, str):
            poly = parse_poly(poly, self.source.generators)
        return {index[e]: c for e, c in it.reduce(poly).items()}


def _eval_functional(alg: TruncatedAlgebra, p: Presentation, point: Mapping[str, Fraction]) -> list[Fraction]:
    # value of each standard monomial at the point
    it, index = alg.reducer
    vals = [Fraction(0)] * len(alg)
    for e, k in index.items():
        vals[k] = Poly.monomial(p.generators, e).evaluate(point)
    return vals


def fiber_product_oracle(desc: FiberProductDescription, max_weight: int,
                         ring: bool = True) -> TruncatedAlgebra:
    """Tuple model of a fiber product, truncated at ``max_weight``.

    The basis is nested: the elements of weight <= w span the tuples in
    ``F_w`` of every factor that satisfy the constraints.  With ``ring``
    the componentwise multiplication table is computed as well.
    """
    if not desc.factors:
        raise ValueError("fiber product needs at least one factor")
    algs = [TruncatedAlgebra.from_presentation(f, max_weight) for f in desc.factors]
    offsets, total = [], 0
    for a in algs:
        offsets.append(total)
        total += len(a)
    coord_weight = [w for a in algs for w in a.weights]
    functionals = []
    for cons in desc.constraints:
        if not cons:
            raise ValueError("empty constraint")
        row = [Fraction(0)] * total
        for ev in cons:
            f = desc.factors[ev.factor]
            point = dict(ev.point)
            missing = [n for n in f.names if n not in point]
            if missing:
                raise ValueError(f"evaluation point misses generators {missing}")
            for r in f.relations:
                if r.evaluate(point):
                    raise ValueError(
                        f"evaluation at {point} is not defined on factor {ev.factor}: "
                        f"relation {r.render()} does not vanish there")
            vals = _eval_functional(algs[ev.factor], f, point)
            if not any(vals[i] for i in algs[ev.factor].filtered_indices(0)):
                raise ValueError(f"evaluation on factor {ev.factor} vanishes in weight 0")
            for k, v in enumerate(vals):
                row[offsets[ev.factor] + k] += ev.coeff * v
        functionals.append(row)

    basis: list[list[Fraction]] = []
    weights: list[int] = []
    for w in range(max_weight + 1):
        cols = [i for i in range(total) if coord_weight[i] <= w]
        if functionals:
            m = Mat.from_rows([[row[i] for i in cols] for row in functionals], cols=len(cols))
            ker = kernel_basis(m)
        else:
            ker = [[Fraction(int(i == j)) for i in range(len(cols))] for j in range(len(cols))]
        for kv in ker:
            full = [Fraction(0)] * total
            for i, c in zip(cols, kv):
                full[i] = c
            if rank(Mat.from_rows(basis + [full], cols=total)) > len(basis):
                basis.append(full)
                weights.append(w)

    def split(v):
        return [{k: v[offsets[n] + k] for k in range(len(a)) if v[offsets[n] + k]}
                for n, a in enumerate(algs)]

    def label(v):
        return "(" + ", ".join(a.render(part) for a, part in zip(algs, split(v))) + ")"

    labels = [label(v) for v in basis]
    products = {}
    unit = {}
    if ring:
        solver = SpanSolver(basis, total)
        for i in range(len(basis)):
            for j in range(i, len(basis)):
                if weights[i] + weights[j] > max_weight:
                    continue
                prod = [Fraction(0)] * total
                for n, (a, pi, pj) in enumerate(zip(algs, split(basis[i]), split(basis[j]))):
                    for k, c in a.mul(pi, pj).items():
                        prod[offsets[n] + k] += c
                coeffs = solver.solve(prod)
                if coeffs is None:
                    raise ValueError("fiber product is not closed under multiplication")
                products[(i, j)] = {k: c for k, c in enumerate(coeffs) if c}
        one = [Fraction(0)] * total
        for n, a in enumerate(algs):
            for k, c in a.unit.items():
                one[offsets[n] + k] = c
        coeffs = solver.solve(one)
        if coeffs is None:
            raise ValueError("unit tuple violates the gluing constraints")
        unit = {k: c for k, c in enumerate(coeffs) if c}
    out = TruncatedAlgebra(labels, weights, products, unit, max_weight,
                           filtered=any(a.filtered for a in algs), source=desc)
    out.tuples = basis
    out.tuple_solver = SpanSolver(basis, total)
    out.factor_algebras = algs
    out.offsets = offsets
    return out


def tuple_element(fp: TruncatedAlgebra, parts: Sequence[Poly | str | None]) -> Vec:
    """Coordinates of a tuple of factor polynomials in a fiber-product basis."""
    total = len(fp.tuples[0]) if fp.tuples else sum(len(a) for a in fp.factor_algebras)
    full = [Fraction(0)] * total
    for n, (alg, part) in enumerate(zip(fp.factor_algebras, parts)):
        if part is None:
            continue
        for k, c in alg.element(part).items():
            full[fp.offsets[n] + k] += c
    coeffs = fp.tuple_solver.solve(full)
    if coeffs is None:
        raise ValueError("tuple violates the gluing constraints")
    return {k: c for k, c in enumerate(coeffs) if c}


# -- isomorphism checks ----------------------------------------------------------

def check_monomial_map(source: Presentation, images: Sequence[Sequence[Fraction]], dim: int,
                       target_span: Sequence[Sequence[Sequence[Fraction]]], max_weight: int,
                       side: str = "", target_labels=None) -> list[CheckRecord]:
    """Relations / injectivity / surjectivity of a map out of a presentation.

    ``images[k]`` is the image of ``monomials_up_to(source, max_weight)[k]``
    as a dense vector of length ``dim``; ``target_span[w]`` lists vectors
    spanning the target's ``F_w``.
    """
    monos = monomials_up_to(source, max_weight)
    ideal = IdealTruncation(source, max_weight)
    mono_idx = {e: k for k, e in enumerate(monos)}
    mono_w = [source.weight(e) for e in monos]

    def image_of(poly: Poly) -> list[Fraction]:
        out = [Fraction(0)] * dim
        for e, c in poly.terms.items():
            for i, x in enumerate(images[mono_idx[e]]):
                if x:
                    out[i] += c * x
        return out

    rel = CheckRecord("relations", side=side)
    for r in source.relations:
        if r.top_weight() > max_weight:
            rel.notes.append(f"{r.render()} lies above weight {max_weight}; not checked")
            continue
        if any(image_of(r)):
            rel.fail({"weight": r.top_weight(), "relation": r.render()})
    for w in range(max_weight + 1):
        for q in ideal.basis_at(w):
            if any(image_of(q)):
                rel.fail({"weight": w, "ideal_element": q.render()})
                break

    inj = CheckRecord("injective", side=side)
    sur = CheckRecord("surjective", side=side)
    img_ranks, tgt_ranks = [], []
    for w in range(max_weight + 1):
        cols = [k for k in range(len(monos)) if mono_w[k] <= w]
        vecs = [images[k] for k in cols]
        r = rank(Mat.from_rows(vecs, cols=dim)) if vecs else 0
        img_ranks.append(r)
        ker_dim = len(cols) - r
        ideal_dim = ideal.filtered_dim(w)
        if ker_dim != ideal_dim and inj.passed:
            wit = {"weight": w, "kernel_dim": ker_dim, "ideal_dim": ideal_dim}
            if ker_dim > ideal_dim:
                m = Mat.from_columns(vecs, rows=dim)
                ideal_vecs = []
                for row in ideal.rows:
                    v = [Fraction(0)] * len(cols)
                    for c, x in row.items():
                        e = ideal.columns[c]
                        if source.weight(e) <= w:
                            v[cols.index(mono_idx[e])] = x
                    ideal_vecs.append(v)
                solver = SpanSolver(ideal_vecs, len(cols))
                for kv in kernel_basis(m):
                    if not solver.contains(kv):
                        poly = Poly(source.generators,
                                    {monos[cols[i]]: c for i, c in enumerate(kv) if c})
                        wit["kernel_element"] = poly.render()
                        wit["weight"] = poly.top_weight()
                        break
            inj.fail(wit)
        tspan = [list(v) for v in target_span[w]]
        tr = rank(Mat.from_rows(tspan, cols=dim)) if tspan else 0
        tgt_ranks.append(tr)
        solver = SpanSolver(vecs, dim)
        for k, t in enumerate(tspan):
            if not solver.contains(t):
                lab = target_labels[w][k] if target_labels else k
                sur.fail({"weight": w, "target_element": lab})
                break
        else:
            if r > tr:
                sur.notes.append(f"weight {w}: image rank {r} exceeds target rank {tr}")
                sur.fail({"weight": w, "image_outside_target": r - tr})

    def graded(xs):
        return [x - (xs[i - 1] if i else 0) for i, x in enumerate(xs)]

    qd = quotient_dims(source, max_weight)
    for rec in (rel, inj, sur):
        rec.dims_a = qd
        rec.dims_b = graded(img_ranks)
        rec.dims_target = graded(tgt_ranks)
    return [rel, inj, sur]


def presentations_isomorphic_via(source: Presentation, target, gen_map: Mapping[str, object],
                                 max_weight: int) -> Report:
    """Check that generators ↦ ``gen_map`` induces an isomorphism up to ``max_weight``.

    ``target`` is a Presentation (values of ``gen_map`` are polynomials or
    strings in its generators) or a TruncatedAlgebra (values are coordinate
    dicts in its basis).
    """
    report = Report("presentation isomorphism",
                    provenance={"max_weight": max_weight, "source": source.to_dict(),
                                "gen_map": {k: str(v) if not isinstance(v, dict) else v
                                            for k, v in gen_map.items()}})
    if isinstance(target, Presentation):
        alg = TruncatedAlgebra.from_presentation(target, max_weight)
        gens = {n: alg.element(gen_map[n]) for n in source.names}
    else:
        alg = target
        gens = {n: {int(k): _frac(v) for k, v in gen_map[n].items()} for n in source.names}
    wrec = report.add(CheckRecord("weights", side="map"))
    for n, w in source.generators:
        tw = alg.top_weight(gens[n])
        if tw > w:
            wrec.fail({"generator": n, "weight": w, "image_weight": tw})
    monos = monomials_up_to(source, max_weight)
    images: dict[Exp, Vec] = {}
    for e in monos:
        if not any(e):
            images[e] = dict(alg.unit)
            continue
        i = next(k for k, a in enumerate(e) if a)
        prev = list(e)
        prev[i] -= 1
        try:
            images[e] = alg.mul(images[tuple(prev)], gens[source.names[i]])
        except WeightOverflow as exc:
            wrec.fail({"monomial": render_monomial(source.generators, e), "error": str(exc)})
            images[e] = {}
    dense = [alg.dense(images[e]) for e in monos]
    span = []
    labels = []
    for w in range(max_weight + 1):
        idx = alg.filtered_indices(w)
        span.append([alg.dense({i: Fraction(1)}) for i in idx])
        labels.append([alg.labels[i] for i in idx])
    for rec in check_monomial_map(source, dense, len(alg), span, max_weight,
                                  side="map", target_labels=labels):
        report.add(rec)
    return report
