"""Weighted-graded multivariate polynomials and free-module vectors.

Monomials are exponent tuples.  The monomial order is weighted-degree
reverse lexicographic; on free modules it is position-over-term with the
lowest position largest.  Internally free-module elements are dicts
``{(pos, exps): coeff}`` so that ideals are just rank one modules.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .fields import QQ, Field


def wdeg(exps: tuple, weights: tuple) -> int:
    return sum(e * w for e, w in zip(exps, weights))


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def heap_key(term: tuple, weights: tuple) -> tuple:
    """Key whose *smallest* value is the largest term (for heapq)."""
    pos, exps = term
    return (pos, -wdeg(exps, weights)) + tuple(reversed(exps))


@lru_cache(maxsize=None)
def monomials_of_degree(weights: tuple, d: int) -> tuple:
    """All exponent vectors of weighted degree ``d``, sorted decreasingly."""
    if d < 0:
        return ()
    n = len(weights)
    out = []

    def rec(i, left, acc):
        if i == n - 1:
            if left % weights[i] == 0:
                out.append(tuple(acc) + (left // weights[i],))
            return
        for e in range(left // weights[i], -1, -1):
            rec(i + 1, left - e * weights[i], acc + [e])

    if n == 0:
        return ((),) if d == 0 else ()
    rec(0, d, [])
    out.sort(key=lambda m: heap_key((0, m), weights))
    return tuple(out)


class PolyRing:
    """A weighted polynomial ring ``field[vars]`` modulo a homogeneous ideal.

    Polynomials live in the polynomial ring; the defining ideal is carried
    along and enters through module presentations.
    """

    def __init__(self, names: Sequence[str], weights: Sequence[int] | None = None,
                 field: Field = QQ, ideal: Iterable = ()):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.nvars = len(self.names)
        if weights is None:
            weights = (1,) * self.nvars
        self.weights = tuple(int(w) for w in weights)
        if len(self.weights) != self.nvars:
            raise ValueError("one weight per variable required")
        if any(w < 1 for w in self.weights):
            raise ValueError(f"weights must be positive, got {self.weights}")
        self.field = field
        gens = []
        for g in ideal:
            g = self(g) if not isinstance(g, Poly) else Poly(self, g.terms)
            if not g.is_homogeneous():
                raise ValueError(f"defining ideal generator {g} is not homogeneous")
            if g:
                gens.append(g)
        self.ideal = tuple(gens)
        self._key = (self.names, self.weights, self.field,
                     tuple(tuple(sorted(g.terms.items())) for g in self.ideal))

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        vs = ",".join(self.names)
        s = f"{self.field!r}[{vs}]"
        if self.weights != (1,) * self.nvars:
            s += f" weights {self.weights}"
        if self.ideal:
            s += "/(" + ", ".join(map(str, self.ideal)) + ")"
        return s

    def ambient(self) -> "PolyRing":
        """The same polynomial ring without defining ideal."""
        return PolyRing(self.names, self.weights, self.field)

    def with_field(self, field: Field) -> "PolyRing":
        new = PolyRing(self.names, self.weights, field)
        ideal = [new.from_terms({e: field(c) for e, c in g.terms.items()}) for g in self.ideal]
        return PolyRing(self.names, self.weights, field, ideal)

    # constructors ---------------------------------------------------------
    def from_terms(self, terms: dict) -> "Poly":
        """Polynomial from ``{exponents: coefficient}``; coefficients are coerced into the field."""
        F = self.field
        out = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != self.nvars:
                raise ValueError(f"exponent {e} does not match {self.nvars} variables")
            out[e] = F.add(out[e], F(c)) if e in out else F(c)
        return Poly(self, out)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self, {(0,) * self.nvars: c} if c != self.field.zero else {})

    def monomial(self, exps: Sequence[int], c=1) -> "Poly":
        c = self.field(c)
        return Poly(self, {tuple(exps): c} if c != self.field.zero else {})

    def gens(self) -> tuple:
        return tuple(self.var(i) for i in range(self.nvars))

    def var(self, i: int) -> "Poly":
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(e)

    def __call__(self, x) -> "Poly":
        if isinstance(x, Poly):
            if x.ring != self:
                raise ValueError("polynomial from a different ring")
            return x
        if isinstance(x, str):
            return parse_polynomial(x, self)
        if isinstance(x, (int, Fraction)):
            return self.const(x)
        raise TypeError(f"cannot convert {x!r} to a polynomial")


class Poly:
    """Immutable sparse polynomial ``{exponent tuple: coefficient}``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        z = ring.field.zero
        self.terms = {e: c for e, c in terms.items() if c != z}
        self._hash = None

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("operands belong to different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, F.zero), c)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Poly(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                out[e] = F.add(out.get(e, F.zero), F.mul(c1, c2))
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def scale(self, c) -> "Poly":
        F = self.ring.field
        return Poly(self.ring, {e: F.mul(c, v) for e, v in self.terms.items()})

    def mul_monomial(self, m: tuple, c=None) -> "Poly":
        F = self.ring.field
        if c is None:
            c = F.one
        return Poly(self.ring, {mono_mul(e, m): F.mul(c, v) for e, v in self.terms.items()})

    def degrees(self) -> set:
        w = self.ring.weights
        return {wdeg(e, w) for e in self.terms}

    def degree(self) -> int | None:
        """Top weighted degree, ``None`` for the zero polynomial."""
        ds = self.degrees()
        return max(ds) if ds else None

    def is_homogeneous(self, d: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        if len(ds) != 1:
            return False
        return d is None or ds == {d}

    def leading_term(self) -> tuple:
        w = self.ring.weights
        e = min(self.terms, key=lambda m: heap_key((0, m), w))
        return e, self.terms[e]

    def sorted_terms(self) -> list:
        w = self.ring.weights
        return sorted(self.terms.items(), key=lambda t: heap_key((0, t[0]), w))

    def __repr__(self):
        return render_poly(self)

    __str__ = __repr__


def render_monomial(exps: tuple, names: tuple) -> str:
    parts = []
    for e, n in zip(exps, names):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def render_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    F = p.ring.field
    out = []
    for e, c in p.sorted_terms():
        text = F.render(c)
        neg = text.startswith("-")
        if neg:
            text = text[1:]
        mono = render_monomial(e, p.ring.names)
        if mono:
            body = mono if text == "1" else f"{text}*{mono}"
        else:
            body = text
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def parse_polynomial(text: str, ring: PolyRing) -> Poly:
    """Parse ``text`` with sympy into a polynomial of ``ring``.

    Raises ValueError if the expression is not a polynomial in the ring's
    variables with rational coefficients.
    """
    import sympy
    from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application,
                                            parse_expr, standard_transformations)

    syms = [sympy.Symbol(n) for n in ring.names]
    local = {n: s for n, s in zip(ring.names, syms)}
    try:
        expr = parse_expr(text, local_dict=local, global_dict={"Integer": sympy.Integer,
                                                               "Rational": sympy.Rational,
                                                               "Symbol": sympy.Symbol},
                          transformations=standard_transformations + (convert_xor,))
    except Exception as exc:  # sympy raises many kinds here
        raise ValueError(f"cannot parse {text!r}: {exc}") from None
    expr = sympy.expand(expr)
    if not syms:
        free = expr.free_symbols
        if free or not expr.is_Rational:
            raise ValueError(f"{text!r} is not a constant")
        return ring.const(Fraction(int(expr.p), int(expr.q)))
    try:
        sp = sympy.Poly(expr, *syms, domain="QQ")
    except Exception as exc:
        raise ValueError(f"{text!r} is not a polynomial in {', '.join(ring.names)}: {exc}") from None
    F = ring.field
    terms = {}
    for exps, c in sp.terms():
        terms[tuple(int(e) for e in exps)] = F(Fraction(int(c.p), int(c.q)))
    return Poly(ring, terms)


class FreeVector:
    """Element of a graded free module ``⊕_t R(-shift_t)``.

    Component ``t`` of a homogeneous vector of degree ``d`` is homogeneous
    of degree ``d - shift_t``.
    """

    __slots__ = ("ring", "shifts", "terms")

    def __init__(self, ring: PolyRing, shifts: Sequence[int], terms: dict):
        self.ring = ring
        self.shifts = tuple(shifts)
        z = ring.field.zero
        self.terms = {k: c for k, c in terms.items() if c != z}

    @classmethod
    def from_components(cls, ring: PolyRing, comps: Sequence, shifts: Sequence[int] | None = None):
        comps = [ring(c) for c in comps]
        if shifts is None:
            shifts = (0,) * len(comps)
        if len(shifts) != len(comps):
            raise ValueError("component count must equal ambient rank")
        terms = {}
        for t, p in enumerate(comps):
            for e, c in p.terms.items():
                terms[(t, e)] = c
        return cls(ring, shifts, terms)

    @classmethod
    def basis(cls, ring: PolyRing, shifts: Sequence[int], t: int) -> "FreeVector":
        return cls(ring, shifts, {(t, (0,) * ring.nvars): ring.field.one})

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def component(self, t: int) -> Poly:
        return Poly(self.ring, {e: c for (p, e), c in self.terms.items() if p == t})

    def components(self) -> list:
        return [self.component(t) for t in range(self.rank)]

    def _check(self, other: "FreeVector"):
        if self.shifts != other.shifts or self.ring != other.ring:
            raise ValueError("rank/shift mismatch between free vectors")

    def __add__(self, other):
        self._check(other)
        F = self.ring.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = F.add(out.get(k, F.zero), c)
        return FreeVector(self.ring, self.shifts, out)

    def __neg__(self):
        F = self.ring.field
        return FreeVector(self.ring, self.shifts, {k: F.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, p):
        """Scalar multiplication by a polynomial or a constant."""
        p = self.ring(p)
        F = self.ring.field
        out: dict = {}
        for e1, c1 in p.terms.items():
            for (t, e2), c2 in self.terms.items():
                k = (t, mono_mul(e1, e2))
                out[k] = F.add(out.get(k, F.zero), F.mul(c1, c2))
        return FreeVector(self.ring, self.shifts, out)

    def __eq__(self, other):
        if not isinstance(other, FreeVector):
            return NotImplemented
        return self.shifts == other.shifts and self.terms == other.terms

    def __hash__(self):
        return hash((self.shifts, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        w = self.ring.weights
        return {self.shifts[t] + wdeg(e, w) for (t, e) in self.terms}

    def is_homogeneous(self, d: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (d is None or ds == {d})

    def degree(self) -> int | None:
        ds = self.degrees()
        return max(ds) if ds else None

    def __repr__(self):
        if self.rank == 1:
            return str(self.component(0))
        return "(" + ", ".join(str(c) for c in self.components()) + ")"
