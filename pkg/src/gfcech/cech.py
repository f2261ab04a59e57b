"""The Čech complex of a graded module as a level-filtered model.

Spot ``k`` is ``⊕_{|S|=k} M_{x_S}``; at level ``δ`` and internal degree
``d`` the summand for ``S`` is ``M_{d + δ·deg x_S}``, the numerators of
``m / (∏_{t∈S} x_t)^δ``.  Raising the level multiplies by ``x_S``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .complexes import (DEFAULT_LEVELS, DEFAULT_MARGIN, FIRST_LEVEL, HomologyTable, LevelComplex,
                        homology_table)
from .graded import GradedModule
from .groebner import Submodule
from .linalg import Matrix, block_matrix
from .polynomials import Poly


def _sequence(x: Sequence, M: GradedModule) -> tuple:
    seq = tuple(M.ring(g) for g in x)
    if not seq:
        raise ValueError("the sequence must be nonempty")
    for g in seq:
        if not g.is_homogeneous():
            raise ValueError(f"sequence element {g} is not homogeneous")
    return seq


def _deg(g: Poly) -> int:
    d = g.degree()
    return 0 if d is None else d


def default_window(x: Sequence, M: GradedModule | None = None) -> range:
    seq = [M.ring(g) for g in x] if M is not None else list(x)
    lo = -(len(seq) + sum(_deg(g) for g in seq) + 2)
    return range(lo, 3)


def visibility_level(M: GradedModule, d: int, denominator_degrees) -> int:
    """Least level ``δ >= 1`` with ``d + δ·e >= min generator degree`` for every ``e > 0``."""
    lv = FIRST_LEVEL
    if not M.shifts:
        return lv
    low = min(M.shifts)
    for e in denominator_degrees:
        if e > 0 and d + lv * e < low:
            lv = max(lv, -((d - low) // e))
    return lv


class CechComplex(LevelComplex):
    def __init__(self, x: Sequence, M: GradedModule):
        self.x = _sequence(x, M)
        self.module = M
        self.n = len(self.x)
        super().__init__(M.ring.field, range(0, self.n + 2))
        self.degs = tuple(_deg(g) for g in self.x)
        self.subsets = [list(combinations(range(self.n), k)) for k in range(self.n + 1)]
        self._mult: dict = {}
        self._pow: dict = {}

    def __repr__(self):
        return f"CechComplex({list(self.x)}, {self.module!r})"

    def start_level(self, k: int, d: int) -> int:
        return visibility_level(self.module, d,
                                [self.subset_degree(S) for j in (k - 1, k) for S in self.summands(j)])

    def subset_degree(self, S) -> int:
        return sum(self.degs[t] for t in S)

    def summands(self, k: int) -> list:
        return self.subsets[k] if 0 <= k <= self.n else []

    def summand_degree(self, S, d: int, delta: int) -> int:
        """Degree in M of the numerators of summand ``S``."""
        return d + delta * self.subset_degree(S)

    def offsets(self, k: int, d: int, delta: int) -> list:
        out, o = [], 0
        for S in self.summands(k):
            out.append(o)
            o += self.module.dim(self.summand_degree(S, d, delta))
        return out

    def _power(self, t: tuple, delta: int) -> Poly:
        key = (t, delta)
        p = self._pow.get(key)
        if p is None:
            p = self.module.ring.one()
            for i in t:
                p = p * self.x[i] ** delta
            self._pow[key] = p
        return p

    def _mul(self, p: Poly, e: int) -> Matrix:
        key = (p, e)
        A = self._mult.get(key)
        if A is None:
            A = self.module.multiplication_matrix(p, e)
            self._mult[key] = A
        return A

    def _sizes(self, k, d, delta):
        return [self.module.dim(self.summand_degree(S, d, delta)) for S in self.summands(k)]

    def _dim(self, k, d, delta):
        return sum(self._sizes(k, d, delta))

    def _differential(self, k, d, delta):
        src, tgt = self.summands(k), self.summands(k + 1)
        tindex = {T: i for i, T in enumerate(tgt)}
        blocks = {}
        for j_s, S in enumerate(src):
            e = self.summand_degree(S, d, delta)
            for j in range(self.n):
                if j in S:
                    continue
                T = tuple(sorted(S + (j,)))
                A = self._mul(self._power((j,), delta), e)
                blocks[(tindex[T], j_s)] = -A if T.index(j) % 2 else A
        return block_matrix(self.field, self._sizes(k + 1, d, delta), self._sizes(k, d, delta), blocks)

    def _transition(self, k, d, delta):
        S_list = self.summands(k)
        blocks = {}
        for i, S in enumerate(S_list):
            blocks[(i, i)] = self._mul(self._power(S, 1), self.summand_degree(S, d, delta))
        return block_matrix(self.field, self._sizes(k, d, delta + 1), self._sizes(k, d, delta), blocks)

    def component(self, k: int, d: int, delta: int, v: dict, S) -> dict:
        """Coordinates of the ``S`` summand of ``v``."""
        i = self.summands(k).index(tuple(S))
        o = self.offsets(k, d, delta)[i]
        size = self.module.dim(self.summand_degree(S, d, delta))
        return {j - o: c for j, c in v.items() if o <= j < o + size}


def build_cech(x: Sequence, M: GradedModule, verify_window: Sequence[int] | None = None,
               levels: int = 3) -> CechComplex:
    C = CechComplex(x, M)
    if verify_window is not None:
        C.verify(verify_window, range(FIRST_LEVEL, levels + 1))
    return C


def local_cohomology(x: Sequence, M: GradedModule, window: Sequence[int] | None = None,
                     levels: int = DEFAULT_LEVELS, margin: int = DEFAULT_MARGIN) -> HomologyTable:
    """Graded ``H^i_a(M)_d`` for ``a = (x)`` over the degree window."""
    C = CechComplex(x, M)
    window = default_window(C.x) if window is None else window
    return homology_table(C, window, levels, margin)


def same_ideal(x: Sequence, y: Sequence, ring) -> bool:
    extra = list(ring.ideal)
    I = Submodule.ideal(ring, [ring(g) for g in x] + extra)
    J = Submodule.ideal(ring, [ring(g) for g in y] + extra)
    return I.same_as(J)


def tables_agree(A: HomologyTable, B: HomologyTable) -> list:
    """Cells where the stabilized dimensions differ (missing cells count as zero)."""
    degrees = sorted(set(A.degrees()) | set(B.degrees()))
    spots = sorted(set(A.spots()) | set(B.spots()))
    out = []
    for k in spots:
        for d in degrees:
            a = A.cells.get((k, d))
            b = B.cells.get((k, d))
            da = a.dimension if a else 0
            db = b.dimension if b else 0
            if da != db:
                out.append((k, d, da, db))
    return out


def generator_independence_check(x: Sequence, y: Sequence, M: GradedModule,
                                 window: Sequence[int] | None = None, levels: int = DEFAULT_LEVELS,
                                 margin: int = DEFAULT_MARGIN) -> dict:
    if not same_ideal(x, y, M.ring):
        raise ValueError("the two sequences generate different ideals")
    if window is None:
        wx, wy = default_window(x, M), default_window(y, M)
        window = range(min(wx.start, wy.start), 3)
    A = local_cohomology(x, M, window, levels, margin)
    B = local_cohomology(y, M, window, levels, margin)
    diff = tables_agree(A, B)
    return {"agree": not diff, "stable": A.all_stable() and B.all_stable(),
            "differences": diff, "tables": (A, B)}
