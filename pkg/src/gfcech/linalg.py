"""Exact sparse linear algebra over a coefficient field.

Vectors are dicts ``{index: value}`` with no stored zeros; a matrix is a
list of such column vectors plus a row count.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .fields import Field


class Matrix:
    __slots__ = ("field", "nrows", "cols")

    def __init__(self, field: Field, nrows: int, cols: Sequence[dict]):
        self.field = field
        self.nrows = nrows
        z = field.zero
        self.cols = [{i: c for i, c in col.items() if c != z} for col in cols]

    @property
    def ncols(self) -> int:
        return len(self.cols)

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, nrows, [{} for _ in range(ncols)])

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, [{i: field.one} for i in range(n)])

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence]):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(field, nrows, [{i: field(rows[i][j]) for i in range(nrows)} for j in range(ncols)])

    def to_rows(self) -> list:
        z = self.field.zero
        rows = [[z] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, c in col.items():
                rows[i][j] = c
        return rows

    def apply(self, v: dict) -> dict:
        F = self.field
        out: dict = {}
        for j, a in v.items():
            for i, c in self.cols[j].items():
                out[i] = F.add(out.get(i, F.zero), F.mul(a, c))
        return {i: c for i, c in out.items() if c != F.zero}

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.field, self.nrows, [self.apply(c) for c in other.cols])

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F = self.field
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, v in b.items():
                c[i] = F.add(c.get(i, F.zero), v)
            cols.append(c)
        return Matrix(F, self.nrows, cols)

    def __neg__(self):
        F = self.field
        return Matrix(F, self.nrows, [{i: F.neg(c) for i, c in col.items()} for col in self.cols])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def is_zero(self) -> bool:
        return not any(self.cols)

    def rank(self) -> int:
        return rank(self.field, self.cols)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"


def block_matrix(field: Field, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: dict) -> Matrix:
    """Assemble from ``{(bi, bj): Matrix}``; absent blocks are zero."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    cols: list[dict] = []
    for bj, cs in enumerate(col_sizes):
        part = [dict() for _ in range(cs)]
        for bi in range(len(row_sizes)):
            blk = blocks.get((bi, bj))
            if blk is None:
                continue
            if blk.shape != (row_sizes[bi], cs):
                raise ValueError(f"block {(bi, bj)} has shape {blk.shape}, expected {(row_sizes[bi], cs)}")
            o = roff[bi]
            for j, col in enumerate(blk.cols):
                for i, c in col.items():
                    part[j][o + i] = c
        cols.extend(part)
    return Matrix(field, roff[-1], cols)


class Echelon:
    """Incrementally maintained reduced echelon basis of a span.

    Each stored vector has a pivot (its smallest index, value one) that no
    other stored vector touches.  Optionally tracks, for every stored vector,
    the combination of inserted vectors that produced it.
    """

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.track = track
        self.pivots: dict[int, dict] = {}
        self.combos: dict[int, dict] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v: dict, combo: dict | None = None):
        F = self.field
        v = dict(v)
        combo = dict(combo) if combo is not None else None
        for p in [i for i in v if i in self.pivots]:
            c = v.get(p)
            if not c:
                continue
            for i, x in self.pivots[p].items():
                nv = F.sub(v.get(i, F.zero), F.mul(c, x))
                if nv == F.zero:
                    v.pop(i, None)
                else:
                    v[i] = nv
            if combo is not None:
                for i, x in self.combos[p].items():
                    nv = F.sub(combo.get(i, F.zero), F.mul(c, x))
                    if nv == F.zero:
                        combo.pop(i, None)
                    else:
                        combo[i] = nv
        return v, combo

    def add(self, v: dict, combo: dict | None = None) -> bool:
        """Insert; returns False when ``v`` was already in the span."""
        F = self.field
        v, combo = self.reduce(v, combo if self.track else None)
        if not v:
            return False
        p = min(v)
        inv = F.inv(v[p])
        v = {i: F.mul(inv, x) for i, x in v.items()}
        if combo is not None:
            combo = {i: F.mul(inv, x) for i, x in combo.items()}
        for q, w in self.pivots.items():
            c = w.get(p)
            if c:
                for i, x in v.items():
                    nv = F.sub(w.get(i, F.zero), F.mul(c, x))
                    if nv == F.zero:
                        w.pop(i, None)
                    else:
                        w[i] = nv
                if combo is not None:
                    cq = self.combos[q]
                    for i, x in combo.items():
                        nv = F.sub(cq.get(i, F.zero), F.mul(c, x))
                        if nv == F.zero:
                            cq.pop(i, None)
                        else:
                            cq[i] = nv
        self.pivots[p] = v
        if combo is not None:
            self.combos[p] = combo
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]


def rank(field: Field, vectors: Iterable[dict]) -> int:
    E = Echelon(field)
    return sum(1 for v in vectors if E.add(v))


def kernel(M: Matrix) -> list:
    """Basis of the null space of ``M`` (vectors indexed by columns)."""
    F = M.field
    E = Echelon(F, track=True)
    out = []
    for j, col in enumerate(M.cols):
        r, combo = E.reduce(col, {j: F.one})
        if not r:
            out.append(combo)
        else:
            E.add(col, {j: F.one})
    return out


def relative_rank(field: Field, base: Iterable[dict], vectors: Iterable[dict]) -> int:
    """``dim span(base + vectors) - dim span(base)``."""
    E = Echelon(field)
    for b in base:
        E.add(b)
    return sum(1 for v in vectors if E.add(v))


def complement(field: Field, base: Iterable[dict], vectors: Sequence[dict]) -> list:
    """Indices of ``vectors`` forming a basis of their span modulo ``span(base)``."""
    E = Echelon(field)
    for b in base:
        E.add(b)
    return [i for i, v in enumerate(vectors) if E.add(v)]


def solve(M: Matrix, b: dict):
    """Some ``x`` with ``M x = b``, or None."""
    F = M.field
    E = Echelon(F, track=True)
    for j, col in enumerate(M.cols):
        E.add(col, {j: F.one})
    r, combo = E.reduce(b, {})
    if r:
        return None
    return {i: F.neg(c) for i, c in combo.items()}
