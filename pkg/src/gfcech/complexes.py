"""Degreewise, level-filtered complexes and their colimit homology.

A model assigns to every spot ``k``, internal degree ``d`` and level ``δ``
a finite-dimensional space with differentials ``D(k,d,δ)`` and transition
maps ``T(k,d,δ): level δ -> level δ+1``.  The modelled complex is the
colimit over ``δ``; since filtered colimits are exact its homology is the
colimit of the level homologies, which is what :func:`colimit_homology`
estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .fields import Field
from .linalg import Echelon, Matrix, complement, kernel, relative_rank

FIRST_LEVEL = 1
DEFAULT_MARGIN = 2
DEFAULT_LEVELS = 8


class ModelError(RuntimeError):
    """A structural identity (D∘D = 0, commuting square) failed."""


class LevelComplex:
    """Base class; subclasses implement ``_dim``, ``_differential``, ``_transition``."""

    field: Field
    spots: range

    def __init__(self, field: Field, spots: range):
        self.field = field
        self.spots = spots
        self._dcache: dict = {}
        self._tcache: dict = {}
        self._zcache: dict = {}

    def start_level(self, k: int, d: int) -> int:
        """First level at which the spaces around spot ``k`` can be populated."""
        return FIRST_LEVEL

    def dim(self, k: int, d: int, delta: int) -> int:
        if k not in self.spots:
            return 0
        return self._dim(k, d, delta)

    def differential(self, k: int, d: int, delta: int) -> Matrix:
        key = (k, d, delta)
        M = self._dcache.get(key)
        if M is None:
            src, tgt = self.dim(k, d, delta), self.dim(k + 1, d, delta)
            if src == 0 or tgt == 0:
                M = Matrix.zero(self.field, tgt, src)
            else:
                M = self._differential(k, d, delta)
            self._dcache[key] = M
        return M

    def transition(self, k: int, d: int, delta: int) -> Matrix:
        key = (k, d, delta)
        M = self._tcache.get(key)
        if M is None:
            src, tgt = self.dim(k, d, delta), self.dim(k, d, delta + 1)
            if src == 0 or tgt == 0:
                M = Matrix.zero(self.field, tgt, src)
            else:
                M = self._transition(k, d, delta)
            self._tcache[key] = M
        return M

    def cycles(self, k: int, d: int, delta: int) -> list:
        key = (k, d, delta)
        Z = self._zcache.get(key)
        if Z is None:
            Z = kernel(self.differential(k, d, delta))
            self._zcache[key] = Z
        return Z

    def boundaries(self, k: int, d: int, delta: int) -> list:
        return [c for c in self.differential(k - 1, d, delta).cols if c]

    def forward(self, k: int, d: int, delta: int, target: int, vectors: Iterable[dict]) -> list:
        vs = list(vectors)
        for lv in range(delta, target):
            T = self.transition(k, d, lv)
            vs = [T.apply(v) for v in vs]
        return vs

    # structural checks -----------------------------------------------------
    def check_d_squared(self, d: int, delta: int) -> None:
        for k in self.spots:
            DD = self.differential(k + 1, d, delta) @ self.differential(k, d, delta)
            if not DD.is_zero():
                raise ModelError(f"D∘D != 0 at spot {k}, degree {d}, level {delta}")

    def check_squares(self, d: int, delta: int) -> None:
        for k in self.spots:
            lhs = self.transition(k + 1, d, delta) @ self.differential(k, d, delta)
            rhs = self.differential(k, d, delta + 1) @ self.transition(k, d, delta)
            if lhs != rhs:
                raise ModelError(f"level square fails at spot {k}, degree {d}, level {delta}")

    def verify(self, window: Iterable[int], levels: Iterable[int]) -> None:
        levels = list(levels)
        for d in window:
            for lv in levels:
                self.check_d_squared(d, lv)
                self.check_squares(d, lv)


class ExplicitComplex(LevelComplex):
    """Model from callables ``dim(k,d,δ)``, ``diff(k,d,δ)``, ``trans(k,d,δ)``."""

    def __init__(self, field: Field, spots: range, dim: Callable, diff: Callable, trans: Callable,
                 start: Callable | None = None):
        super().__init__(field, spots)
        self._fdim, self._fdiff, self._ftrans = dim, diff, trans
        self._fstart = start

    def start_level(self, k, d):
        return FIRST_LEVEL if self._fstart is None else self._fstart(k, d)

    def _dim(self, k, d, delta):
        return self._fdim(k, d, delta)

    def _differential(self, k, d, delta):
        return self._fdiff(k, d, delta)

    def _transition(self, k, d, delta):
        return self._ftrans(k, d, delta)


# ---------------------------------------------------------------------------
# homology


@dataclass
class LevelHomology:
    dimension: int
    cycles: list
    representatives: list


def homology_at(C: LevelComplex, k: int, d: int, delta: int) -> LevelHomology:
    """Homology of the level-``δ`` complex at spot ``k``, degree ``d``."""
    Z = C.cycles(k, d, delta)
    B = C.boundaries(k, d, delta)
    idx = complement(C.field, B, Z)
    return LevelHomology(len(idx), Z, [Z[i] for i in idx])


def image_rank(C: LevelComplex, k: int, d: int, delta: int, target: int) -> int:
    """Rank of the induced map ``H(δ) -> H(target)``."""
    Z = C.cycles(k, d, delta)
    if not Z:
        return 0
    moved = C.forward(k, d, delta, target, Z)
    return relative_rank(C.field, C.boundaries(k, d, target), moved)


@dataclass
class HomologyCell:
    spot: int
    degree: int
    dimension: int
    level: int
    stable: bool
    level_dimension: int
    representatives: list = field(default_factory=list, repr=False)
    level_stats: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"spot": self.spot, "degree": self.degree, "dimension": self.dimension,
                "level": self.level, "stable": self.stable,
                "level_dimension": self.level_dimension}


def colimit_homology(C: LevelComplex, k: int, d: int, levels: int = DEFAULT_LEVELS,
                     margin: int = DEFAULT_MARGIN) -> HomologyCell:
    """Stabilized dimension of ``colim_δ H(δ)`` at ``(k, d)``.

    Let ``r(δ)`` be the rank of ``H(δ) -> H(δ+1)`` and ``h(δ) = dim H(δ)``.
    The search starts at ``C.start_level(k, d)`` and the cell is stable at the
    least ``δ*`` for which both ``r`` and ``h`` are constant on
    ``δ*, ..., δ* + margin - 1``, every level used being at most ``levels``.
    The reported dimension is ``r(δ*)``.
    """
    if margin < 1:
        raise ValueError("margin must be at least 1")
    start = C.start_level(k, d)
    seen: dict = {}

    def stats(lv):
        s = seen.get(lv)
        if s is None:
            s = (image_rank(C, k, d, lv, lv + 1), homology_at(C, k, d, lv).dimension)
            seen[lv] = s
        return s

    star = start
    while star + margin <= levels:
        vals = {stats(star + j) for j in range(margin)}
        if len(vals) == 1:
            return _cell(C, k, d, star, seen, True)
        star += 1
    star = max(FIRST_LEVEL, min(start, levels - 1))
    stats(star)
    return _cell(C, k, d, star, seen, False)


def _cell(C, k, d, star, seen, stable) -> HomologyCell:
    Z = C.cycles(k, d, star)
    moved = C.forward(k, d, star, star + 1, Z)
    B = C.boundaries(k, d, star + 1)
    idx = complement(C.field, B, moved)
    return HomologyCell(k, d, len(idx), star, stable, seen[star][1], [Z[i] for i in idx],
                        [seen[lv] for lv in sorted(seen)])


class HomologyTable:
    """``(spot, degree) -> HomologyCell``."""

    def __init__(self, cells: Iterable[HomologyCell] = ()):
        self.cells: dict = {}
        for c in cells:
            self.cells[(c.spot, c.degree)] = c

    def __getitem__(self, key) -> HomologyCell:
        return self.cells[key]

    def __iter__(self):
        return iter(sorted(self.cells))

    def __len__(self):
        return len(self.cells)

    def dimension(self, k: int, d: int) -> int:
        return self.cells[(k, d)].dimension

    def dims(self, k: int) -> dict:
        return {d: c.dimension for (s, d), c in sorted(self.cells.items()) if s == k}

    def spots(self) -> list:
        return sorted({s for s, _ in self.cells})

    def degrees(self) -> list:
        return sorted({d for _, d in self.cells})

    def all_stable(self) -> bool:
        return all(c.stable for c in self.cells.values())

    def unstable(self) -> list:
        return sorted(k for k, c in self.cells.items() if not c.stable)

    def dimension_map(self) -> dict:
        return {k: c.dimension for k, c in self.cells.items()}

    def to_dict(self) -> dict:
        return {"cells": [self.cells[k].to_dict() for k in sorted(self.cells)]}


def homology_table(C: LevelComplex, window: Iterable[int], levels: int = DEFAULT_LEVELS,
                   margin: int = DEFAULT_MARGIN, spots: Iterable[int] | None = None) -> HomologyTable:
    spots = C.spots if spots is None else spots
    return HomologyTable(colimit_homology(C, k, d, levels, margin)
                         for k in spots for d in window)


# ---------------------------------------------------------------------------
# morphisms


class ComplexMorphism:
    """Spot-, degree- and level-wise matrices between two level complexes."""

    def __init__(self, source: LevelComplex, target: LevelComplex, matrix: Callable):
        self.source = source
        self.target = target
        self._f = matrix
        self._cache: dict = {}

    def matrix(self, k: int, d: int, delta: int) -> Matrix:
        key = (k, d, delta)
        M = self._cache.get(key)
        if M is None:
            src = self.source.dim(k, d, delta)
            tgt = self.target.dim(k, d, delta)
            if src == 0 or tgt == 0:
                M = Matrix.zero(self.source.field, tgt, src)
            else:
                M = self._f(k, d, delta)
                if M.shape != (tgt, src):
                    raise ModelError(f"morphism block at {key} has shape {M.shape}, expected {(tgt, src)}")
            self._cache[key] = M
        return M

    def first_failure(self, window: Iterable[int], levels: Iterable[int], spots: Iterable[int] | None = None):
        """First ``(kind, k, d, δ)`` where a square fails, or None."""
        levels = list(levels)
        spots = list(self.source.spots if spots is None else spots)
        for d in window:
            for lv in levels:
                for k in spots:
                    lhs = self.matrix(k + 1, d, lv) @ self.source.differential(k, d, lv)
                    rhs = self.target.differential(k, d, lv) @ self.matrix(k, d, lv)
                    if lhs != rhs:
                        return ("differential", k, d, lv)
                    lhs = self.matrix(k, d, lv + 1) @ self.source.transition(k, d, lv)
                    rhs = self.target.transition(k, d, lv) @ self.matrix(k, d, lv)
                    if lhs != rhs:
                        return ("transition", k, d, lv)
        return None

    def verify(self, window, levels, spots=None) -> None:
        bad = self.first_failure(window, levels, spots)
        if bad is not None:
            kind, k, d, lv = bad
            raise ModelError(f"{kind} square fails at spot {k}, degree {d}, level {lv}")


@dataclass
class InducedMapCell:
    spot: int
    degree: int
    source_dim: int
    target_dim: int
    rank: int
    stable: bool

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dim

    @property
    def verdict(self) -> str:
        if not self.stable:
            return "inconclusive"
        return "iso" if self.injective and self.surjective else "not-iso"

    def to_dict(self) -> dict:
        return {"spot": self.spot, "degree": self.degree, "source_dim": self.source_dim,
                "target_dim": self.target_dim, "rank": self.rank, "stable": self.stable,
                "injective": self.injective, "surjective": self.surjective,
                "verdict": self.verdict}


def induced_map(phi: ComplexMorphism, k: int, d: int, levels: int = DEFAULT_LEVELS,
                margin: int = DEFAULT_MARGIN) -> InducedMapCell:
    """Rank of the map induced by ``phi`` between stabilized homologies."""
    src = colimit_homology(phi.source, k, d, levels, margin)
    tgt = colimit_homology(phi.target, k, d, levels, margin)
    lv = src.level
    reps = src.representatives
    top = max(src.level, tgt.level) + 1
    mapped = [phi.matrix(k, d, lv).apply(v) for v in reps]
    moved = phi.target.forward(k, d, lv, top, mapped)
    r = relative_rank(phi.target.field, phi.target.boundaries(k, d, top), moved)
    return InducedMapCell(k, d, src.dimension, tgt.dimension, r, src.stable and tgt.stable)


# ---------------------------------------------------------------------------
# sequences of morphisms at a fixed spot


def sequence_complex(columns: Sequence[LevelComplex], maps: Sequence[ComplexMorphism], spot: int) -> LevelComplex:
    """Positions ``0..len(columns)-1`` holding spot ``spot`` of each column."""
    if len(maps) != len(columns) - 1:
        raise ValueError("need one morphism between consecutive columns")
    F = columns[0].field
    return ExplicitComplex(
        F, range(len(columns)),
        lambda j, d, lv: columns[j].dim(spot, d, lv),
        lambda j, d, lv: maps[j].matrix(spot, d, lv),
        lambda j, d, lv: columns[j].transition(spot, d, lv),
        lambda j, d: max(c.start_level(spot, d) for c in columns))


@dataclass
class ExactnessCell:
    spot: int
    degree: int
    injective: bool
    middle: bool
    surjective: bool
    stable: bool
    defects: tuple

    @property
    def exact(self) -> bool:
        return self.injective and self.middle and self.surjective

    def to_dict(self) -> dict:
        return {"spot": self.spot, "degree": self.degree, "exact": self.exact,
                "injective": self.injective, "middle": self.middle,
                "surjective": self.surjective, "stable": self.stable,
                "defects": list(self.defects)}


@dataclass
class ExactnessReport:
    cells: list

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.cells)

    @property
    def stable(self) -> bool:
        return all(c.stable for c in self.cells)

    def to_dict(self) -> dict:
        return {"exact": self.exact, "stable": self.stable, "cells": [c.to_dict() for c in self.cells]}


def ses_exactness_report(columns: Sequence[LevelComplex], maps: Sequence[ComplexMorphism],
                         window: Iterable[int], levels: int = DEFAULT_LEVELS,
                         margin: int = DEFAULT_MARGIN, spots: Iterable[int] | None = None,
                         check: bool = True) -> ExactnessReport:
    """Colimit exactness of ``0 -> A' -> A -> A'' -> 0`` at each spot and degree."""
    if len(columns) != 3 or len(maps) != 2:
        raise ValueError("a short exact sequence has three columns and two maps")
    window = list(window)
    spots = list(columns[1].spots if spots is None else spots)
    if check:
        for phi in maps:
            phi.verify(window, range(FIRST_LEVEL, levels), spots)
    cells = []
    for k in spots:
        S = sequence_complex(columns, maps, k)
        for d in window:
            hs = [colimit_homology(S, j, d, levels, margin) for j in range(3)]
            cells.append(ExactnessCell(k, d, hs[0].dimension == 0, hs[1].dimension == 0,
                                       hs[2].dimension == 0, all(h.stable for h in hs),
                                       tuple(h.dimension for h in hs)))
    return ExactnessReport(cells)
