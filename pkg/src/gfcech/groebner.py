"""Buchberger's algorithm for homogeneous submodules of graded free modules.

Everything runs over the polynomial ring; a quotient ring ``P/I`` enters
through its relations ``I * e_t``, which callers add to the submodule.
Lifts and syzygies come from a single Gröbner basis of the augmented
system ``(g_i, e_i)`` with the position-over-term order, whose elements
with leading position in the tail are exactly the syzygies.
"""

from __future__ import annotations

import heapq
import itertools
from functools import cached_property
from typing import Iterable, Sequence

from .polynomials import (FreeVector, Poly, PolyRing, heap_key, mono_div, mono_divides,
                          mono_lcm, mono_mul, wdeg)

DEFAULT_PAIR_LIMIT = 200_000


class GroebnerLimitError(RuntimeError):
    """Raised when the S-pair budget is exhausted."""


# ---------------------------------------------------------------------------
# term-dict kernels


def _lead(v: dict, weights: tuple) -> tuple:
    return min(v, key=lambda k: heap_key(k, weights))


def _monic(v: dict, ring: PolyRing) -> dict:
    F = ring.field
    lt = _lead(v, ring.weights)
    c = v[lt]
    if c == F.one:
        return v
    ci = F.inv(c)
    return {k: F.mul(ci, x) for k, x in v.items()}


class _Reducer:
    """Monic basis with a per-position index of leading monomials."""

    def __init__(self, ring: PolyRing, elements: Sequence[dict] = ()):
        self.ring = ring
        self.elements: list[dict] = []
        self.leads: list[tuple] = []
        self.by_pos: dict[int, list[int]] = {}
        for g in elements:
            self.append(g)

    def append(self, g: dict) -> int:
        idx = len(self.elements)
        lt = _lead(g, self.ring.weights)
        self.elements.append(g)
        self.leads.append(lt)
        self.by_pos.setdefault(lt[0], []).append(idx)
        return idx

    def divisor(self, term: tuple, skip: int = -1):
        pos, exps = term
        for idx in self.by_pos.get(pos, ()):
            if idx != skip and mono_divides(self.leads[idx][1], exps):
                return idx
        return None

    def reduce(self, v: dict, skip: int = -1, track: bool = False):
        """Full reduction.  Returns (remainder, quotient list or None)."""
        ring = self.ring
        F = ring.field
        zero = F.zero
        w = ring.weights
        v = dict(v)
        heap = [(heap_key(k, w), k) for k in v]
        heapq.heapify(heap)
        rem: dict = {}
        quot = [] if track else None
        while heap:
            _, t = heapq.heappop(heap)
            c = v.pop(t, None)
            if c is None:
                continue
            idx = self.divisor(t, skip)
            if idx is None:
                rem[t] = c
                continue
            g = self.elements[idx]
            m = mono_div(t[1], self.leads[idx][1])
            if track:
                quot.append((idx, m, c))
            lt = self.leads[idx]
            for (p, e), gc in g.items():
                if (p, e) == lt:
                    continue
                k = (p, mono_mul(e, m))
                old = v.get(k)
                new = F.sub(zero if old is None else old, F.mul(c, gc))
                if new == zero:
                    if old is not None:
                        del v[k]
                else:
                    if old is None:
                        heapq.heappush(heap, (heap_key(k, w), k))
                    v[k] = new
        return rem, quot


def _spoly(f: dict, lf: tuple, g: dict, lg: tuple, ring: PolyRing) -> dict:
    F = ring.field
    l = mono_lcm(lf[1], lg[1])
    mf = mono_div(l, lf[1])
    mg = mono_div(l, lg[1])
    out = {}
    for (p, e), c in f.items():
        out[(p, mono_mul(e, mf))] = c
    for (p, e), c in g.items():
        k = (p, mono_mul(e, mg))
        out[k] = F.sub(out.get(k, F.zero), c)
    z = F.zero
    return {k: c for k, c in out.items() if c != z}


def buchberger(gens: Iterable[dict], ring: PolyRing, shifts: Sequence[int],
               pair_limit: int = DEFAULT_PAIR_LIMIT) -> list[dict]:
    """Reduced Gröbner basis of the submodule spanned by ``gens``.

    Inputs must be homogeneous.  S-pairs are processed by increasing degree;
    Buchberger's chain criterion prunes pairs.
    """
    w = ring.weights

    def tdeg(t):
        return shifts[t[0]] + wdeg(t[1], w)

    todo = [g for g in gens if g]
    todo.sort(key=lambda g: tdeg(next(iter(g))))
    R = _Reducer(ring)
    pairs: list = []
    dead: set = set()
    counter = itertools.count()

    def insert(g):
        k = R.append(_monic(g, ring))
        lk = R.leads[k]
        for (_, _, i, j) in pairs:
            if (i, j) in dead:
                continue
            li, lj = R.leads[i], R.leads[j]
            if lk[0] != li[0]:
                continue
            lij = mono_lcm(li[1], lj[1])
            if (mono_divides(lk[1], lij) and mono_lcm(li[1], lk[1]) != lij
                    and mono_lcm(lj[1], lk[1]) != lij):
                dead.add((i, j))
        for i in R.by_pos[lk[0]]:
            if i == k:
                continue
            d = shifts[lk[0]] + wdeg(mono_lcm(R.leads[i][1], lk[1]), w)
            heapq.heappush(pairs, (d, next(counter), i, k))

    for g in todo:
        r, _ = R.reduce(g)
        if r:
            insert(r)

    processed = 0
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        if (i, j) in dead:
            continue
        processed += 1
        if processed > pair_limit:
            raise GroebnerLimitError(
                f"S-pair budget of {pair_limit} exhausted with {len(R.elements)} basis elements")
        s = _spoly(R.elements[i], R.leads[i], R.elements[j], R.leads[j], ring)
        if not s:
            continue
        r, _ = R.reduce(s)
        if r:
            insert(r)

    # minimalize then tail-reduce
    keep = []
    for i, li in enumerate(R.leads):
        redundant = False
        for j, lj in enumerate(R.leads):
            if j == i or lj[0] != li[0] or not mono_divides(lj[1], li[1]):
                continue
            if lj != li or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(R.elements[i])
    M = _Reducer(ring, keep)
    out = []
    for idx, g in enumerate(M.elements):
        lt = M.leads[idx]
        head = {lt: g[lt]}
        tail = {k: c for k, c in g.items() if k != lt}
        r, _ = M.reduce(tail, skip=idx)
        head.update(r)
        out.append(_monic(head, ring))
    out.sort(key=lambda g: heap_key(_lead(g, w), w))
    return out


# ---------------------------------------------------------------------------
# public submodule type


def _homogeneous_check(v: FreeVector):
    if not v.is_homogeneous():
        raise ValueError(f"generator {v} is not homogeneous")


class Submodule:
    """Submodule of a graded free module given by homogeneous generators.

    The reduced Gröbner basis is computed once and cached; instances are
    otherwise immutable.
    """

    def __init__(self, ring: PolyRing, shifts: Sequence[int], gens: Iterable[FreeVector] = (),
                 pair_limit: int = DEFAULT_PAIR_LIMIT):
        self.ring = ring
        self.shifts = tuple(shifts)
        gl = []
        for g in gens:
            if isinstance(g, Poly):
                g = FreeVector(ring, self.shifts, {(0, e): c for e, c in g.terms.items()})
            if g.shifts != self.shifts:
                raise ValueError("generator shifts differ from the ambient module")
            _homogeneous_check(g)
            gl.append(g)
        self.gens = tuple(gl)
        self.pair_limit = pair_limit

    @classmethod
    def ideal(cls, ring: PolyRing, gens: Iterable) -> "Submodule":
        vs = []
        for g in gens:
            p = ring(g)
            vs.append(FreeVector(ring, (0,), {(0, e): c for e, c in p.terms.items()}))
        return cls(ring, (0,), vs)

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def __repr__(self):
        return f"Submodule(rank={self.rank}, gens=[{', '.join(map(str, self.gens))}])"

    def _vec(self, terms: dict) -> FreeVector:
        return FreeVector(self.ring, self.shifts, terms)

    def _as_vector(self, v) -> FreeVector:
        if isinstance(v, Poly):
            if self.rank != 1:
                raise ValueError("rank mismatch: polynomial against a module of rank > 1")
            v = FreeVector(self.ring, self.shifts, {(0, e): c for e, c in v.terms.items()})
        if v.rank != self.rank:
            raise ValueError(f"rank mismatch: {v.rank} vs {self.rank}")
        if v.shifts != self.shifts:
            raise ValueError("shift mismatch")
        return v

    @cached_property
    def groebner_basis(self) -> tuple:
        gb = buchberger((g.terms for g in self.gens), self.ring, self.shifts, self.pair_limit)
        return tuple(self._vec(g) for g in gb)

    @cached_property
    def _reducer(self) -> _Reducer:
        return _Reducer(self.ring, [g.terms for g in self.groebner_basis])

    def leading_terms(self) -> list:
        return list(self._reducer.leads)

    def is_standard(self, term: tuple) -> bool:
        return self._reducer.divisor(term) is None

    def normal_form(self, v) -> FreeVector:
        v = self._as_vector(v)
        r, _ = self._reducer.reduce(v.terms)
        return self._vec(r)

    def normal_form_terms(self, terms: dict) -> dict:
        return self._reducer.reduce(terms)[0]

    def contains(self, v) -> bool:
        return not self.normal_form(v)

    __contains__ = contains

    def contains_submodule(self, other: "Submodule") -> bool:
        return all(self.contains(g) for g in other.gens)

    def same_as(self, other: "Submodule") -> bool:
        return self.contains_submodule(other) and other.contains_submodule(self)

    def is_zero(self) -> bool:
        return not self.groebner_basis

    # lifts and syzygies ---------------------------------------------------
    @cached_property
    def _lift_basis(self) -> _Reducer:
        r = self.rank
        field = self.ring.field
        zero_e = (0,) * self.ring.nvars
        shifts = list(self.shifts)
        aug = []
        for i, g in enumerate(self.gens):
            shifts.append(g.degree() if g else 0)
            t = dict(g.terms)
            t[(r + i, zero_e)] = field.one
            aug.append(t)
        self._aug_shifts = tuple(shifts)
        gb = buchberger(aug, self.ring, self._aug_shifts, self.pair_limit)
        return _Reducer(self.ring, gb)

    def membership(self, v):
        """Return ``(True, cofactors)`` with ``v == sum(c_i * gens[i])`` or ``(False, None)``."""
        v = self._as_vector(v)
        R = self._lift_basis
        r = self.rank
        rem, _ = R.reduce(v.terms)
        if any(p < r for (p, _e) in rem):
            return False, None
        F = self.ring.field
        cof = [dict() for _ in self.gens]
        for (p, e), c in rem.items():
            cof[p - r][e] = F.neg(c)
        return True, [Poly(self.ring, c) for c in cof]

    def combine(self, cofactors: Sequence[Poly]) -> FreeVector:
        """Evaluate ``sum(c_i * gens[i])``."""
        out = self._vec({})
        for c, g in zip(cofactors, self.gens):
            if c:
                out = out + c * g
        return out

    def syzygies(self) -> "Submodule":
        """Generators of the kernel of ``P^{#gens} -> F, e_i -> gens[i]``."""
        R = self._lift_basis
        r = self.rank
        shifts = self._aug_shifts[r:]
        out = []
        for g, lt in zip(R.elements, R.leads):
            if lt[0] >= r:
                out.append(FreeVector(self.ring, shifts, {(p - r, e): c for (p, e), c in g.items()}))
        return Submodule(self.ring, shifts, out, self.pair_limit)

    def generator_shifts(self) -> tuple:
        self._lift_basis
        return self._aug_shifts[self.rank:]


# ---------------------------------------------------------------------------
# derived operations


def _whole(ring, shifts) -> Submodule:
    return Submodule(ring, shifts, [FreeVector.basis(ring, shifts, t) for t in range(len(shifts))])


def _with_relations(N: Submodule, relations: Submodule | None) -> Submodule:
    if relations is None or not relations.gens:
        return N
    return Submodule(N.ring, N.shifts, N.gens + relations.gens, N.pair_limit)


def colon(N: Submodule, f, relations: Submodule | None = None) -> Submodule:
    """``(N + R) :_F f`` for the ambient ``M = F/R``; the result contains R."""
    ring = N.ring
    f = ring(f)
    if not f.is_homogeneous():
        raise ValueError(f"{f} is not homogeneous")
    return colon_ideal(N, [f], relations)


def colon_ideal(N: Submodule, ideal_gens: Sequence, relations: Submodule | None = None) -> Submodule:
    """``(N + R) :_F a`` for ``a`` generated by ``ideal_gens``."""
    ring = N.ring
    base = _with_relations(N, relations)
    a = [ring(g) for g in ideal_gens]
    for g in a:
        if not g.is_homogeneous():
            raise ValueError(f"{g} is not homogeneous")
    a = [g for g in a if g]
    if not a:
        return _whole(ring, N.shifts)
    r = N.rank
    q = len(a)
    big_shifts = tuple(N.shifts[s] - a[j].degree() for j in range(q) for s in range(r))
    system = []
    for s in range(r):
        terms = {}
        for j, g in enumerate(a):
            for e, c in g.terms.items():
                terms[(j * r + s, e)] = c
        system.append(FreeVector(ring, big_shifts, terms))
    for j in range(q):
        for n in base.gens:
            system.append(FreeVector(ring, big_shifts,
                                     {(j * r + p, e): c for (p, e), c in n.terms.items()}))
    S = Submodule(ring, big_shifts, system, N.pair_limit)
    out = []
    for z in S.syzygies().gens:
        terms = {(p, e): c for (p, e), c in z.terms.items() if p < r}
        if terms:
            out.append(FreeVector(ring, N.shifts, terms))
    return Submodule(ring, N.shifts, out + list(base.gens), N.pair_limit)


def saturate(N: Submodule, ideal_gens: Sequence, relations: Submodule | None = None):
    """``(N + R) :_F a^∞`` by iterated colon until two consecutive terms agree.

    Returns ``(saturation, k)`` where ``a^k`` times the saturation lies in N + R.
    """
    cur = _with_relations(N, relations)
    k = 0
    while True:
        nxt = colon_ideal(cur, ideal_gens, relations)
        if cur.contains_submodule(nxt):
            return cur, k
        cur = nxt
        k += 1
