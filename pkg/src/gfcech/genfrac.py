"""Modules of generalized fractions over the triangular sets U(x)_i.

A fraction ``b / (x_1^a_1, ..., x_i^a_i)`` has exponents of prefix shape:
positive up to some ``j`` and zero afterwards; entries past ``n`` stand for
``x_n``.  Every fraction can be rewritten over the full power
``(x_1^δ, ..., x_i^δ)`` and ``b / (x_1^δ, ..., x_i^δ)`` vanishes exactly when
``(x_1⋯x_i)^{δ'-δ} b ∈ (x_1^{δ'}, ..., x_{i-1}^{δ'}) M`` for some ``δ' ≥ δ``.
So in internal degree ``d`` the module ``U(x)_i^{-i} M`` is the colimit over
``δ`` of ``(M / (x_1^δ, ..., x_{i-1}^δ) M)_{d + δ·deg(x_1⋯x_i)}`` along
multiplication by ``x_1⋯x_i``, which is the model built here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cech import _deg, _sequence, default_window, visibility_level
from .complexes import (DEFAULT_LEVELS, DEFAULT_MARGIN, FIRST_LEVEL, ComplexMorphism,
                        HomologyTable, LevelComplex, homology_table)
from .graded import GradedModule, HomogeneousMap
from .linalg import Matrix
from .polynomials import FreeVector, Poly


@dataclass(frozen=True)
class TriangularDenominator:
    exponents: tuple

    @property
    def arity(self) -> int:
        return len(self.exponents)

    @property
    def prefix(self) -> int:
        """The ``j`` with exponents positive exactly on the first ``j`` slots."""
        j = 0
        while j < self.arity and self.exponents[j] > 0:
            j += 1
        return j

    @property
    def max_exponent(self) -> int:
        return max(self.exponents, default=0)


def validate_denominator(arity: int, exponents: Sequence[int]) -> TriangularDenominator:
    exps = tuple(int(a) for a in exponents)
    if len(exps) != arity:
        raise ValueError(f"expected {arity} exponents, got {len(exps)}")
    if any(a < 0 for a in exps):
        raise ValueError(f"negative exponent in {exps}")
    D = TriangularDenominator(exps)
    if any(a != 0 for a in exps[D.prefix:]):
        raise ValueError(f"{exps} is not of prefix shape: a zero exponent precedes a positive one")
    return D


@dataclass(frozen=True)
class GeneralizedFraction:
    numerator: FreeVector
    denominator: TriangularDenominator

    @property
    def arity(self) -> int:
        return self.denominator.arity


@dataclass
class GFZeroCertificate:
    """``mult * num = sum_t x_t^δ m_t + rel`` with ``rel`` in the relations."""

    fraction: GeneralizedFraction
    level: int
    multiplier: Poly
    lhs: FreeVector
    parts: list            # m_t for t = 1..i-1
    relation_part: FreeVector


@dataclass
class ZeroTestResult:
    status: str            # "zero" | "nonzero" | "undecided"
    certificate: GFZeroCertificate | None = None
    searched_to: int = 0

    @property
    def is_zero(self) -> bool:
        return self.status == "zero"


class GenFracComplex(LevelComplex):
    """Level model of ``0 -> M -> U(x)_1^{-1}M -> ... -> U(x)_n^{-n}M -> 0``."""

    def __init__(self, x: Sequence, M: GradedModule):
        self.x = _sequence(x, M)
        self.module = M
        self.n = len(self.x)
        super().__init__(M.ring.field, range(0, self.n + 2))
        self.degs = tuple(_deg(g) for g in self.x)
        self._quot: dict = {}

    def __repr__(self):
        return f"GenFracComplex({list(self.x)}, {self.module!r})"

    # sequence helpers -------------------------------------------------------
    def entry(self, r: int) -> Poly:
        """``x_r`` (1-based) with ``x_r = x_n`` for ``r > n``."""
        return self.x[min(r, self.n) - 1]

    def entry_degree(self, r: int) -> int:
        return self.degs[min(r, self.n) - 1]

    def denominator_degree(self, i: int) -> int:
        return sum(self.entry_degree(t) for t in range(1, i + 1))

    def start_level(self, k: int, d: int) -> int:
        degs = [self.denominator_degree(j) for j in (k - 1, k) if 1 <= j <= self.n]
        return visibility_level(self.module, d, degs)

    def quotient_module(self, i: int, delta: int) -> GradedModule:
        """``M / (x_1^δ, ..., x_{i-1}^δ) M``."""
        if i <= 1:
            return self.module
        key = (i, delta)
        Q = self._quot.get(key)
        if Q is None:
            M = self.module
            extra = [self.entry(t) ** delta * M.generator(s)
                     for t in range(1, i) for s in range(M.rank)]
            Q = M.quotient(extra)
            self._quot[key] = Q
        return Q

    def piece_degree(self, i: int, d: int, delta: int) -> int:
        return d if i == 0 else d + delta * self.denominator_degree(i)

    def space(self, i: int, delta: int) -> GradedModule:
        return self.module if i == 0 else self.quotient_module(i, delta)

    # LevelComplex -----------------------------------------------------------
    def _dim(self, k, d, delta):
        if k > self.n:
            return 0
        return self.space(k, delta).dim(self.piece_degree(k, d, delta))

    def _differential(self, k, d, delta):
        if k >= self.n:
            return Matrix.zero(self.field, 0, self._dim(k, d, delta))
        src, tgt = self.space(k, delta), self.space(k + 1, delta)
        f = self.entry(k + 1) ** delta
        if k % 2:
            f = -f
        images = [f * src.generator(t) for t in range(src.rank)]
        e = self.piece_degree(k, d, delta)
        return src.hom_matrix(tgt, images, e, e + delta * self.entry_degree(k + 1))

    def _transition(self, k, d, delta):
        src, tgt = self.space(k, delta), self.space(k, delta + 1)
        e = self.piece_degree(k, d, delta)
        if k == 0:
            return Matrix.identity(self.field, src.dim(e))
        f = self.module.ring.one()
        for t in range(1, k + 1):
            f = f * self.entry(t)
        images = [f * src.generator(t) for t in range(src.rank)]
        return src.hom_matrix(tgt, images, e, e + self.denominator_degree(k))

    # fractions --------------------------------------------------------------
    def fraction(self, numerator, exponents: Sequence[int]) -> GeneralizedFraction:
        M = self.module
        v = M.vector(numerator) if not isinstance(numerator, FreeVector) else numerator
        if not v.is_homogeneous():
            raise ValueError(f"numerator {v} is not homogeneous")
        return GeneralizedFraction(v, validate_denominator(len(exponents), exponents))

    def degree(self, f: GeneralizedFraction) -> int | None:
        d = f.numerator.degree()
        if d is None:
            return None
        return d - sum(a * self.entry_degree(t + 1) for t, a in enumerate(f.denominator.exponents))

    def full_power_multiplier(self, D: TriangularDenominator, delta: int) -> Poly:
        if delta < max(1, D.max_exponent):
            raise ValueError(f"level {delta} is below the exponents {D.exponents}")
        p = self.module.ring.one()
        for t, a in enumerate(D.exponents, start=1):
            p = p * self.entry(t) ** (delta - a)
        return p

    def to_full_power(self, f: GeneralizedFraction, delta: int) -> GeneralizedFraction:
        m = self.full_power_multiplier(f.denominator, delta)
        return GeneralizedFraction(m * f.numerator, TriangularDenominator((delta,) * f.arity))

    def _level_submodule(self, i: int, delta: int):
        M = self.module
        gens = [self.entry(t) ** delta * M.generator(s) for t in range(1, i) for s in range(M.rank)]
        return M.submodule(gens), len(gens)

    def zero_certificate(self, f: GeneralizedFraction, delta: int) -> GFZeroCertificate | None:
        """Certificate that ``f`` vanishes at level ``δ``, or None."""
        M = self.module
        i = f.arity
        mult = self.full_power_multiplier(f.denominator, delta)
        lhs = mult * f.numerator
        N, ngen = self._level_submodule(i, delta)
        ok, cof = N.membership(lhs)
        if not ok:
            return None
        parts = []
        zero = FreeVector(M.ring, M.shifts, {})
        for t in range(1, i):
            m = zero
            for s in range(M.rank):
                c = cof[(t - 1) * M.rank + s]
                if c:
                    m = m + c * M.generator(s)
            parts.append(m)
        rel = zero
        for c, g in zip(cof[ngen:], N.gens[ngen:]):
            if c:
                rel = rel + c * g
        return GFZeroCertificate(f, delta, mult, lhs, parts, rel)

    def replay(self, cert: GFZeroCertificate) -> bool:
        """Re-verify a certificate by exact arithmetic in the free module."""
        M = self.module
        if self.full_power_multiplier(cert.fraction.denominator, cert.level) != cert.multiplier:
            return False
        if cert.multiplier * cert.fraction.numerator != cert.lhs:
            return False
        rhs = cert.relation_part
        for t, m in enumerate(cert.parts, start=1):
            rhs = rhs + self.entry(t) ** cert.level * m
        return rhs == cert.lhs and M.relation_module.contains(cert.relation_part)

    def lift_certificate(self, cert: GFZeroCertificate) -> GFZeroCertificate:
        """The level ``δ+1`` certificate obtained by multiplying through by ``x_1⋯x_i``."""
        i = cert.fraction.arity
        prod = self.module.ring.one()
        for t in range(1, i + 1):
            prod = prod * self.entry(t)
        parts = []
        for t, m in enumerate(cert.parts, start=1):
            others = self.module.ring.one()
            for s in range(1, i + 1):
                if s != t:
                    others = others * self.entry(s)
            parts.append(others * m)
        return GFZeroCertificate(cert.fraction, cert.level + 1, cert.multiplier * prod,
                                 prod * cert.lhs, parts, prod * cert.relation_part)

    def gf_is_zero(self, f: GeneralizedFraction, levels: int = DEFAULT_LEVELS,
                   margin: int = DEFAULT_MARGIN) -> ZeroTestResult:
        lo = max(1, f.denominator.max_exponent)
        if levels < lo:
            raise ValueError(f"level bound {levels} is below the exponents {f.denominator.exponents}")
        if not f.numerator:
            return ZeroTestResult("zero", self.zero_certificate(f, lo), lo)
        for delta in range(lo, levels + 1):
            cert = self.zero_certificate(f, delta)
            if cert is not None:
                return ZeroTestResult("zero", cert, delta)
        i = f.arity
        if i > self.n:
            return ZeroTestResult("undecided", None, levels)
        d = self.degree(f)
        injective = all(
            self.transition(i, d, lv).rank() == self.dim(i, d, lv)
            for lv in range(max(lo, levels - margin), levels))
        return ZeroTestResult("nonzero" if injective else "undecided", None, levels)

    def gf_equal(self, f1: GeneralizedFraction, f2: GeneralizedFraction,
                 levels: int = DEFAULT_LEVELS, margin: int = DEFAULT_MARGIN) -> ZeroTestResult:
        if f1.arity != f2.arity:
            raise ValueError("fractions of different arity")
        d1, d2 = self.degree(f1), self.degree(f2)
        if d1 is not None and d2 is not None and d1 != d2:
            r1 = self.gf_is_zero(f1, levels, margin)
            r2 = self.gf_is_zero(f2, levels, margin)
            if r1.is_zero and r2.is_zero:
                return ZeroTestResult("zero", None, max(r1.searched_to, r2.searched_to))
            undecided = "undecided" in (r1.status, r2.status)
            return ZeroTestResult("undecided" if undecided else "nonzero", None, levels)
        delta = max(1, f1.denominator.max_exponent, f2.denominator.max_exponent)
        g1, g2 = self.to_full_power(f1, delta), self.to_full_power(f2, delta)
        diff = GeneralizedFraction(g1.numerator - g2.numerator, g1.denominator)
        return self.gf_is_zero(diff, levels, margin)

    def render(self, f: GeneralizedFraction) -> str:
        return render_fraction(f)


def render_fraction(f: GeneralizedFraction) -> str:
    den = ",".join(f"x{t}^{a}" if a else "1" for t, a in enumerate(f.denominator.exponents, start=1))
    num = str(f.numerator)
    if " " in num and not num.startswith("("):
        num = f"({num})"
    return f"{num}/({den})"


def build_genfrac_complex(x: Sequence, M: GradedModule, verify_window: Sequence[int] | None = None,
                          levels: int = 3) -> GenFracComplex:
    G = GenFracComplex(x, M)
    if verify_window is not None:
        G.verify(verify_window, range(FIRST_LEVEL, levels + 1))
    return G


def genfrac_homology(x: Sequence, M: GradedModule, window: Sequence[int] | None = None,
                     levels: int = DEFAULT_LEVELS, margin: int = DEFAULT_MARGIN) -> HomologyTable:
    G = GenFracComplex(x, M)
    window = default_window(G.x) if window is None else window
    return homology_table(G, window, levels, margin)


def induced_morphism(phi: HomogeneousMap, source: GenFracComplex, target: GenFracComplex) -> ComplexMorphism:
    """The map of level models induced by a degree-0 module map."""
    if phi.degree != 0:
        raise ValueError("only degree-0 maps induce morphisms of models; twist the source")
    if source.x != target.x:
        raise ValueError("both models must use the same sequence")

    def block(k, d, delta):
        S, T = source.space(k, delta), target.space(k, delta)
        e = source.piece_degree(k, d, delta)
        images = [FreeVector(T.ring, T.shifts, dict(v.terms)) for v in phi.images]
        return S.hom_matrix(T, images, e, e)

    return ComplexMorphism(source, target, block)
