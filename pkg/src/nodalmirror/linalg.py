"""Exact sparse linear algebra over the rationals.

Every cohomology, kernel and presentation computation in the package goes
through this module.  Entries are :class:`fractions.Fraction`; nothing is
ever converted to floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Mapping, Sequence

Vector = list  # dense list of Fraction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Mat:
    """Sparse rational matrix with immutable entries.

    ``entries`` maps ``(row, col)`` to a nonzero Fraction.
    """

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] = ()):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be non-negative")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in dict(entries).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = _frac(v)
            if v:
                clean[(r, c)] = v
        self._entries = clean

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> "Mat":
        nrows = len(rows)
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        ent = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(nrows, ncols, ent)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], rows: int) -> "Mat":
        ent = {(i, j): v for j, col in enumerate(columns) for i, v in enumerate(col) if v}
        return cls(rows, len(columns), ent)

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[Mapping[int, object]], rows: int) -> "Mat":
        ent = {(i, j): v for j, col in enumerate(columns) for i, v in col.items() if v}
        return cls(rows, len(columns), ent)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._entries)

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        return self._entries.get(rc, Fraction(0))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Mat) and self.rows == other.rows
                and self.cols == other.cols and self._entries == other._entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"Mat({self.rows}x{self.cols}, nnz={len(self._entries)})"

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    def apply(self, vec: Sequence[object]) -> Vector:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.rows
        for (r, c), v in self._entries.items():
            x = vec[c]
            if x:
                out[r] += v * x
        return out

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        right = other.row_dicts()
        acc: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self._entries.items():
            for c, w in right[k].items():
                acc[(r, c)] = acc.get((r, c), Fraction(0)) + v * w
        return Mat(self.rows, other.cols, acc)


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    out = {c: int(v * den) for c, v in row.items()}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _echelon(rows: list[dict[int, Fraction]], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Fraction-free forward elimination, then exact back-substitution."""
    work = [_integer_row(r) for r in rows if r]
    done: list[tuple[int, dict[int, int]]] = []
    for col in range(ncols):
        cands = [i for i, r in enumerate(work) if col in r]
        if not cands:
            continue
        # sparsest pivot row keeps fill-in down; ties broken by position
        pi = min(cands, key=lambda i: (len(work[i]), i))
        prow = work[pi]
        pval = prow[col]
        nxt = []
        for i, r in enumerate(work):
            if i == pi:
                continue
            if col in r:
                f = r[col]
                new = {c: pval * v for c, v in r.items()}
                for c, v in prow.items():
                    nv = new.get(c, 0) - f * v
                    if nv:
                        new[c] = nv
                    else:
                        new.pop(c, None)
                if new:
                    nxt.append(_primitive(new))
            else:
                nxt.append(r)
        done.append((col, prow))
        work = nxt
        if not work:
            break
    pivots = [c for c, _ in done]
    reduced: list[dict[int, Fraction]] = []
    for col, r in done:
        p = r[col]
        reduced.append({c: Fraction(v, p) for c, v in r.items()})
    for k in range(len(reduced) - 1, -1, -1):
        row_k = reduced[k]
        col = pivots[k]
        for j in range(k):
            f = reduced[j].get(col)
            if f:
                rj = reduced[j]
                for c, v in row_k.items():
                    nv = rj.get(c, Fraction(0)) - f * v
                    if nv:
                        rj[c] = nv
                    else:
                        rj.pop(c, None)
    return reduced, pivots


def rref(m: Mat) -> tuple[Mat, list[int], int]:
    """Reduced row echelon form. Returns ``(reduced, pivots, rank)``."""
    reduced, pivots = _echelon(m.row_dicts(), m.cols)
    ent = {(i, c): v for i, row in enumerate(reduced) for c, v in row.items()}
    return Mat(m.rows, m.cols, ent), pivots, len(pivots)


def rank(m: Mat) -> int:
    return len(_echelon(m.row_dicts(), m.cols)[1])


def kernel_basis(m: Mat) -> list[Vector]:
    """Basis of the null space, one vector per free column (in column order)."""
    reduced, pivots = _echelon(m.row_dicts(), m.cols)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x = row.get(free)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


class Cokernel:
    """Quotient of the target space of ``m`` by its image.

    ``basis`` holds standard vectors for the non-pivot coordinates of the
    reduced image; ``project`` returns coordinates in that basis.
    """

    def __init__(self, m: Mat):
        reduced, pivots = _echelon(m.transpose().row_dicts(), m.rows)
        self.dim_target = m.rows
        self._rows = reduced
        self._pivots = pivots
        pivset = set(pivots)
        self.free = [i for i in range(m.rows) if i not in pivset]
        self._free_index = {c: k for k, c in enumerate(self.free)}

    @property
    def basis(self) -> list[Vector]:
        out = []
        for c in self.free:
            v = [Fraction(0)] * self.dim_target
            v[c] = Fraction(1)
            out.append(v)
        return out

    def __len__(self) -> int:
        return len(self.free)

    def project(self, vec: Sequence[object] | Mapping[int, object]) -> Vector:
        if isinstance(vec, Mapping):
            work = {i: _frac(v) for i, v in vec.items() if v}
        else:
            if len(vec) != self.dim_target:
                raise ValueError("dimension mismatch")
            work = {i: _frac(v) for i, v in enumerate(vec) if v}
        for row, p in zip(self._rows, self._pivots):
            f = work.get(p)
            if f:
                for c, v in row.items():
                    nv = work.get(c, Fraction(0)) - f * v
                    if nv:
                        work[c] = nv
                    else:
                        work.pop(c, None)
        out = [Fraction(0)] * len(self.free)
        for c, v in work.items():
            out[self._free_index[c]] = v
        return out


def cokernel_with_projection(m: Mat) -> tuple[list[Vector], Callable[[Sequence[object]], Vector]]:
    ck = Cokernel(m)
    return ck.basis, ck.project


# -- helpers on lists of vectors -------------------------------------------------

def span_rank(vectors: Iterable[Sequence[object]], dim: int) -> int:
    vecs = list(vectors)
    if not vecs:
        return 0
    return rank(Mat.from_rows(vecs, cols=dim))


class SpanSolver:
    """Express vectors in terms of a fixed list of generators.

    ``solve(v)`` returns coefficients ``c`` with ``sum c_i g_i == v`` or
    ``None`` when ``v`` lies outside the span.  Generators need not be
    independent, in which case one particular solution is returned.
    """

    def __init__(self, generators: Sequence[Sequence[object]], dim: int):
        self.dim = dim
        self.n = len(generators)
        # augmented rows: [g_i | e_i]; eliminate on the first dim columns
        rows = []
        for i, g in enumerate(generators):
            row = {j: _frac(x) for j, x in enumerate(g) if x}
            row[dim + i] = Fraction(1)
            rows.append(row)
        reduced, pivots = _echelon(rows, dim + self.n)
        self._rows = [(r, p) for r, p in zip(reduced, pivots) if p < dim]
        self.rank = len(self._rows)
        # rows whose pivot lies in the tag block record dependencies
        self.relations = [r for r, p in zip(reduced, pivots) if p >= dim]

    def solve(self, vec: Sequence[object]) -> list[Fraction] | None:
        work = {j: _frac(x) for j, x in enumerate(vec) if x}
        coeffs = {}
        for row, p in self._rows:
            f = work.get(p)
            if not f:
                continue
            for c, v in row.items():
                if c < self.dim:
                    nv = work.get(c, Fraction(0)) - f * v
                    if nv:
                        work[c] = nv
                    else:
                        work.pop(c, None)
                else:
                    coeffs[c - self.dim] = coeffs.get(c - self.dim, Fraction(0)) + f * v
        if work:
            return None
        return [coeffs.get(i, Fraction(0)) for i in range(self.n)]

    def contains(self, vec: Sequence[object]) -> bool:
        return self.solve(vec) is not None
