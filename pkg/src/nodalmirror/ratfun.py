"""Rational functions of one variable in partial-fraction normal form.

A function is stored as a polynomial part ``sum c_a x^a`` plus pole parts
``sum c_{q,b} (x - q)^(-b)`` with finite rational ``q`` and ``b >= 1``.  The
representation is unique, so equality is equality of the coefficient maps.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping

Key = tuple  # ("x", a) or ("p", q, b)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _binom_neg(b: int, n: int) -> int:
    # coefficient of t^n in (1 + t)^(-b)
    return (-1) ** n * comb(b + n - 1, n)


class RatFun:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] = ()):
        clean = {}
        for k, v in dict(terms).items():
            v = _frac(v)
            if v:
                if k[0] == "x":
                    if k[1] < 0:
                        raise ValueError("polynomial exponents must be non-negative")
                    clean[("x", int(k[1]))] = v
                elif k[0] == "p":
                    if k[2] < 1:
                        raise ValueError("pole orders start at 1")
                    clean[("p", _frac(k[1]), int(k[2]))] = v
                else:
                    raise ValueError(f"bad term key {k!r}")
        self.terms = clean

    # -- constructors --------------------------------------------------------
    @classmethod
    def const(cls, c=1) -> "RatFun":
        return cls({("x", 0): c})

    @classmethod
    def x(cls, a: int = 1, c=1) -> "RatFun":
        if a >= 0:
            return cls({("x", a): c})
        return cls({("p", Fraction(0), -a): c})

    @classmethod
    def pole(cls, q, b: int, c=1) -> "RatFun":
        return cls({("p", _frac(q), b): c})

    @classmethod
    def linear(cls, q) -> "RatFun":
        """The function ``x - q``."""
        return cls({("x", 1): 1, ("x", 0): -_frac(q)})

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other) -> "RatFun":
        other = _coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return RatFun(out)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "RatFun":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RatFun":
        return _coerce(other) - self

    def scale(self, c) -> "RatFun":
        c = _frac(c)
        return RatFun({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other) -> "RatFun":
        if not isinstance(other, RatFun):
            return self.scale(other)
        acc: dict[Key, Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                for k, v in _mul_keys(k1, k2).items():
                    acc[k] = acc.get(k, Fraction(0)) + v1 * v2 * v
        return RatFun(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatFun":
        out = RatFun.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFun.const(other)
        return isinstance(other, RatFun) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- local data ----------------------------------------------------------
    def degree(self) -> int:
        """Largest polynomial exponent; -1 when the polynomial part is zero."""
        return max((k[1] for k in self.terms if k[0] == "x"), default=-1)

    def pole_order(self, q) -> int:
        q = _frac(q)
        return max((k[2] for k in self.terms if k[0] == "p" and k[1] == q), default=0)

    def pole_points(self) -> list[Fraction]:
        return sorted({k[1] for k in self.terms if k[0] == "p"})

    def taylor(self, m, n: int = 0) -> Fraction:
        """Coefficient of ``(x - m)^n`` in the expansion at a finite regular point."""
        m = _frac(m)
        out = Fraction(0)
        for k, c in self.terms.items():
            if k[0] == "x":
                a = k[1]
                if a >= n:
                    out += c * comb(a, n) * m ** (a - n)
            else:
                q, b = k[1], k[2]
                if q == m:
                    raise ValueError(f"function has a pole at {m}")
                out += c * _binom_neg(b, n) * (m - q) ** (-b - n)
        return out

    def value(self, m) -> Fraction:
        return self.taylor(m, 0)

    def coeff_at_infinity(self, a: int) -> Fraction:
        """Coefficient of ``x^a`` in the Laurent expansion in ``1/x``."""
        if a >= 0:
            return self.terms.get(("x", a), Fraction(0))
        n = -a
        out = Fraction(0)
        for k, c in self.terms.items():
            if k[0] == "p" and k[2] <= n:
                b, q = k[2], k[1]
                out += c * comb(n - 1, n - b) * q ** (n - b)
        return out

    def render(self, var: str = "x") -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=_render_order):
            c = self.terms[k]
            if k[0] == "x":
                base = "" if k[1] == 0 else (var if k[1] == 1 else f"{var}^{k[1]}")
            else:
                q = k[1]
                inner = var if q == 0 else (f"({var}+{-q})" if q < 0 else f"({var}-{q})")
                base = f"{inner}^-{k[2]}"
            if not base:
                parts.append(str(c))
            elif c == 1:
                parts.append(base)
            elif c == -1:
                parts.append("-" + base)
            else:
                parts.append(f"{c}*{base}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"RatFun({self.render()})"


def _render_order(k: Key):
    return (0, -k[1]) if k[0] == "x" else (1, k[1], k[2])


def _coerce(x) -> RatFun:
    return x if isinstance(x, RatFun) else RatFun.const(x)


def _poly_in_shift(a: int, q: Fraction) -> dict[int, Fraction]:
    # x^a = sum_i C(a,i) q^(a-i) (x-q)^i
    return {i: Fraction(comb(a, i)) * q ** (a - i) for i in range(a + 1)}


def _shift_power(n: int, q: Fraction) -> dict[Key, Fraction]:
    # (x-q)^n for n >= 0 back in powers of x
    return {("x", l): Fraction(comb(n, l)) * (-q) ** (n - l) for l in range(n + 1)}


def _mul_keys(k1: Key, k2: Key) -> dict[Key, Fraction]:
    if k1[0] == "x" and k2[0] == "x":
        return {("x", k1[1] + k2[1]): Fraction(1)}
    if k1[0] == "p" and k2[0] == "x":
        k1, k2 = k2, k1
    if k1[0] == "x":
        a, q, b = k1[1], k2[1], k2[2]
        out: dict[Key, Fraction] = {}
        for i, c in _poly_in_shift(a, q).items():
            e = i - b
            if e < 0:
                out[("p", q, -e)] = out.get(("p", q, -e), Fraction(0)) + c
            else:
                for k, v in _shift_power(e, q).items():
                    out[k] = out.get(k, Fraction(0)) + c * v
        return out
    q, b, r, c = k1[1], k1[2], k2[1], k2[2]
    if q == r:
        return {("p", q, b + c): Fraction(1)}
    out = {}
    # expand (x-r)^(-c) around q and keep the principal part, then symmetrically
    for i in range(1, b + 1):
        n = b - i
        out[("p", q, i)] = _binom_neg(c, n) * (q - r) ** (-c - n)
    for j in range(1, c + 1):
        n = c - j
        out[("p", r, j)] = _binom_neg(b, n) * (r - q) ** (-b - n)
    return out
