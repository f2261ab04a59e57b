"""Finitely generated graded modules and their finite-dimensional pieces.

A module is ``F / R`` with ``F = ⊕ A(-shift_t)`` and ``R`` spanned by the
homogeneous relations together with ``I * e_t`` for the ring's defining
ideal ``I``.  The graded piece ``M_d`` has the standard monomials of degree
``d`` (terms outside the leading-term module of ``R``) as basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import groebner
from .groebner import Submodule
from .linalg import Matrix
from .polynomials import FreeVector, Poly, PolyRing, monomials_of_degree, mono_mul


@dataclass(frozen=True)
class GradedPieceBasis:
    degree: int
    terms: tuple
    index: dict = field(compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.terms)


class GradedModule:
    def __init__(self, ring: PolyRing, shifts: Sequence[int] = (0,), relations: Sequence = (),
                 name: str | None = None):
        self.ring = ring
        self.shifts = tuple(int(s) for s in shifts)
        rels = []
        for r in relations:
            v = self._to_vector(r)
            if not v.is_homogeneous():
                raise ValueError(f"relation {v} is not homogeneous")
            if v:
                rels.append(v)
        self.relations = tuple(rels)
        self.name = name
        self._pieces: dict = {}

    # construction helpers -------------------------------------------------
    @classmethod
    def free(cls, ring: PolyRing, shifts: Sequence[int] = (0,), name=None) -> "GradedModule":
        return cls(ring, shifts, (), name)

    @classmethod
    def cyclic(cls, ring: PolyRing, ideal_gens: Sequence = (), shift: int = 0, name=None) -> "GradedModule":
        """``(A/J)(-shift)``."""
        gens = [ring(g) for g in ideal_gens]
        return cls(ring, (shift,), [FreeVector.from_components(ring, [g], (shift,)) for g in gens], name)

    @classmethod
    def zero(cls, ring: PolyRing) -> "GradedModule":
        return cls(ring, (), ())

    def _to_vector(self, r) -> FreeVector:
        if isinstance(r, FreeVector):
            if r.shifts != self.shifts:
                raise ValueError("relation shifts differ from module shifts")
            return r
        if isinstance(r, int) and r == 0:
            return FreeVector(self.ring, self.shifts, {})
        if isinstance(r, (Poly, str, int)) and self.rank == 1:
            return FreeVector.from_components(self.ring, [r], self.shifts)
        return FreeVector.from_components(self.ring, list(r), self.shifts)

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def __repr__(self):
        if self.name:
            return self.name
        return f"GradedModule({self.ring!r}, shifts={self.shifts}, relations={list(self.relations)})"

    def vector(self, comps) -> FreeVector:
        return self._to_vector(comps)

    def generator(self, t: int) -> FreeVector:
        return FreeVector.basis(self.ring, self.shifts, t)

    @cached_property
    def relation_module(self) -> Submodule:
        gens = list(self.relations)
        for t in range(self.rank):
            e = self.generator(t)
            for g in self.ring.ideal:
                gens.append(g * e)
        return Submodule(self.ring, self.shifts, gens)

    def quotient(self, extra: Sequence, name=None) -> "GradedModule":
        """``M / (submodule generated by extra)``."""
        return GradedModule(self.ring, self.shifts,
                            list(self.relations) + [self._to_vector(v) for v in extra], name)

    def direct_sum(self, other: "GradedModule") -> "GradedModule":
        if other.ring != self.ring:
            raise ValueError("modules over different rings")
        r = self.rank
        shifts = self.shifts + other.shifts
        rels = [FreeVector(self.ring, shifts, dict(v.terms)) for v in self.relations]
        rels += [FreeVector(self.ring, shifts, {(p + r, e): c for (p, e), c in v.terms.items()})
                 for v in other.relations]
        return GradedModule(self.ring, shifts, rels)

    def twist(self, k: int) -> "GradedModule":
        """``M(-k)``: every generator degree raised by ``k``."""
        shifts = tuple(s + k for s in self.shifts)
        rels = [FreeVector(self.ring, shifts, dict(v.terms)) for v in self.relations]
        return GradedModule(self.ring, shifts, rels)

    # submodules -----------------------------------------------------------
    def submodule(self, gens: Sequence) -> Submodule:
        """Submodule generated by ``gens`` plus the relations, as a submodule of F."""
        vs = [self._to_vector(g) for g in gens]
        return Submodule(self.ring, self.shifts, vs + list(self.relation_module.gens))

    def ideal_times_module(self, ideal_gens: Sequence) -> Submodule:
        """``(sum A g) M`` as a submodule of F (relations included)."""
        vs = []
        for g in ideal_gens:
            g = self.ring(g)
            for t in range(self.rank):
                vs.append(g * self.generator(t))
        return self.submodule(vs)

    def colon(self, N: Submodule, f) -> Submodule:
        return groebner.colon(N, f, self.relation_module)

    def colon_ideal(self, N: Submodule, ideal_gens: Sequence) -> Submodule:
        return groebner.colon_ideal(N, ideal_gens, self.relation_module)

    def saturate(self, N: Submodule, ideal_gens: Sequence):
        return groebner.saturate(N, ideal_gens, self.relation_module)

    def is_zero(self) -> bool:
        R = self.relation_module
        return all(R.contains(self.generator(t)) for t in range(self.rank))

    def equal_in_module(self, u: FreeVector, v: FreeVector) -> bool:
        return self.relation_module.contains(u - v)

    # degreewise realization ----------------------------------------------
    def piece(self, d: int) -> GradedPieceBasis:
        P = self._pieces.get(d)
        if P is None:
            R = self.relation_module
            terms = []
            for t, s in enumerate(self.shifts):
                for m in monomials_of_degree(self.ring.weights, d - s):
                    if R.is_standard((t, m)):
                        terms.append((t, m))
            terms = tuple(terms)
            P = GradedPieceBasis(d, terms, {k: i for i, k in enumerate(terms)})
            self._pieces[d] = P
        return P

    def dim(self, d: int) -> int:
        return self.piece(d).dim

    def coordinates_terms(self, terms: dict, d: int) -> dict:
        """Coordinates in ``piece(d)`` of a homogeneous degree-``d`` element."""
        nf = self.relation_module.normal_form_terms(terms)
        idx = self.piece(d).index
        out = {}
        for k, c in nf.items():
            i = idx.get(k)
            if i is None:
                raise ValueError(f"term {k} is not of degree {d}")
            out[i] = c
        return out

    def coordinates(self, v: FreeVector, d: int) -> dict:
        if v.shifts != self.shifts:
            raise ValueError("vector does not belong to this module's ambient free module")
        return self.coordinates_terms(v.terms, d)

    def element(self, coords: dict, d: int) -> FreeVector:
        P = self.piece(d)
        return FreeVector(self.ring, self.shifts, {P.terms[i]: c for i, c in coords.items()})

    def hom_matrix(self, target: "GradedModule", images: Sequence[FreeVector], d_src: int,
                   d_tgt: int) -> Matrix:
        """Matrix of ``e_t -> images[t]`` from ``self_{d_src}`` to ``target_{d_tgt}``."""
        shift = d_tgt - d_src
        for t, im in enumerate(images):
            if im and not im.is_homogeneous(self.shifts[t] + shift):
                raise ValueError(f"image {im} of generator {t} is not homogeneous of degree "
                                 f"{self.shifts[t] + shift}")
        src = self.piece(d_src)
        tgt = target.piece(d_tgt)
        F = self.ring.field
        cols = []
        for (t, m) in src.terms:
            im = images[t]
            terms = {(p, mono_mul(e, m)): c for (p, e), c in im.terms.items()}
            cols.append(target.coordinates_terms(terms, d_tgt) if terms else {})
        return Matrix(F, tgt.dim, cols)

    def multiplication_matrix(self, f, d: int, target: "GradedModule | None" = None) -> Matrix:
        """Multiplication by homogeneous ``f`` from ``M_d`` to ``target_{d + deg f}``."""
        f = self.ring(f)
        target = self if target is None else target
        if not f.is_homogeneous():
            raise ValueError(f"{f} is not homogeneous")
        if not f:
            return Matrix.zero(self.ring.field, target.piece(d).dim, self.piece(d).dim)
        deg = f.degree()
        images = [f * self.generator(t) for t in range(self.rank)]
        if target.shifts != self.shifts:
            raise ValueError("multiplication requires a common ambient free module")
        return self.hom_matrix(target, images, d, d + deg)


class HomogeneousMap:
    """Module map given on ambient generators; homogeneous of ``degree``."""

    def __init__(self, source: GradedModule, target: GradedModule, images: Sequence, degree: int = 0):
        if len(images) != source.rank:
            raise ValueError("one image per source generator required")
        self.source = source
        self.target = target
        self.degree = degree
        ims = []
        for t, im in enumerate(images):
            v = target._to_vector(im)
            if v and not v.is_homogeneous(source.shifts[t] + degree):
                raise ValueError(f"image {v} of generator {t} is not homogeneous of degree "
                                 f"{source.shifts[t] + degree}")
            ims.append(v)
        self.images = tuple(ims)

    def apply(self, v: FreeVector) -> FreeVector:
        out = FreeVector(self.target.ring, self.target.shifts, {})
        for t, comp in enumerate(v.components()):
            if comp:
                out = out + comp * self.images[t]
        return out

    def is_well_defined(self) -> bool:
        """Relations of the source map into the relations of the target."""
        R = self.target.relation_module
        return all(R.contains(self.apply(r)) for r in self.source.relation_module.gens)

    def matrix(self, d: int) -> Matrix:
        return self.source.hom_matrix(self.target, self.images, d, d + self.degree)

    @classmethod
    def identity(cls, M: GradedModule, target: GradedModule | None = None) -> "HomogeneousMap":
        return cls(M, M if target is None else target, [M.generator(t) for t in range(M.rank)])


def map_matrix(phi: HomogeneousMap, d: int) -> Matrix:
    return phi.matrix(d)
