"""The comparison morphism from the Čech complex to the fractions complex.

``θ^k`` sends ``m / (x_{i(1)}⋯x_{i(k)})^δ`` to ``m / (x_1^δ, ..., x_k^δ)`` when
the index set is ``{1, ..., k}`` and to zero otherwise; ``θ^0`` is the
identity.  Everything here is checked on the level models: squares as
exact matrix identities, induced maps through stabilized homology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .cech import CechComplex, default_window
from .complexes import (DEFAULT_LEVELS, DEFAULT_MARGIN, FIRST_LEVEL, ComplexMorphism,
                        ExactnessReport, ExplicitComplex, InducedMapCell, LevelComplex, ModelError,
                        colimit_homology, induced_map, homology_table, sequence_complex,
                        ses_exactness_report)
from .filter_regular import FilterRegularReport, is_filter_regular
from .genfrac import GeneralizedFraction, GenFracComplex, TriangularDenominator, induced_morphism
from .graded import GradedModule, HomogeneousMap
from .linalg import Matrix, block_matrix
from .polynomials import FreeVector


def theta(G: GenFracComplex, k: int, S: Sequence[int], numerator: FreeVector, delta: int):
    """Image of ``numerator / (x_S)^δ`` (``S`` 1-based) under ``θ^k``."""
    S = tuple(S)
    if len(S) != k:
        raise ValueError(f"index set {S} does not have size {k}")
    if k == 0:
        return numerator
    zero = FreeVector(numerator.ring, numerator.shifts, {})
    den = TriangularDenominator((delta,) * k)
    if k > G.n or S != tuple(range(1, k + 1)):
        return GeneralizedFraction(zero, den)
    return GeneralizedFraction(numerator, den)


def build_theta(C: CechComplex, G: GenFracComplex, verify_window: Sequence[int] | None = None,
                levels: int = 3) -> ComplexMorphism:
    if C.x != G.x or C.module is not G.module:
        raise ValueError("both complexes must be built on the same sequence and module")
    M = C.module
    ident = [M.generator(t) for t in range(M.rank)]

    def block(k, d, delta):
        if k == 0:
            return M.hom_matrix(M, ident, d, d)
        if k > C.n:
            return Matrix.zero(C.field, G.dim(k, d, delta), C.dim(k, d, delta))
        first = tuple(range(k))
        blocks = {}
        for j, S in enumerate(C.summands(k)):
            if S == first:
                e = C.summand_degree(S, d, delta)
                Q = G.space(k, delta)
                blocks[(0, j)] = M.hom_matrix(Q, [FreeVector(Q.ring, Q.shifts, dict(v.terms)) for v in ident], e, e)
        return block_matrix(C.field, [G.dim(k, d, delta)], C._sizes(k, d, delta), blocks)

    phi = ComplexMorphism(C, G, block)
    if verify_window is not None:
        phi.verify(verify_window, range(FIRST_LEVEL, levels + 1))
    return phi


def comparison(x: Sequence, M: GradedModule):
    C = CechComplex(x, M)
    G = GenFracComplex(C.x, M)
    return C, G, build_theta(C, G)


@dataclass
class QuasiIsoReport:
    sequence: tuple
    hypothesis: FilterRegularReport
    cells: list
    squares_checked: bool = True

    @property
    def hypothesis_met(self) -> bool:
        return self.hypothesis.verdict

    @property
    def verdict(self) -> str:
        verdicts = {c.verdict for c in self.cells}
        if "not-iso" in verdicts:
            return "not-iso"
        if "inconclusive" in verdicts:
            return "inconclusive"
        return "iso"

    @property
    def label(self) -> str:
        return "hypothesis met" if self.hypothesis_met else "hypothesis unmet"

    def inconclusive(self) -> list:
        return [(c.spot, c.degree) for c in self.cells if c.verdict == "inconclusive"]

    def to_dict(self) -> dict:
        return {"sequence": [str(g) for g in self.sequence], "verdict": self.verdict,
                "hypothesis": self.label, "filter_regular": self.hypothesis.to_dict(),
                "cells": [c.to_dict() for c in self.cells]}


def verify_quasi_isomorphism(x: Sequence, M: GradedModule, window: Sequence[int] | None = None,
                             levels: int = DEFAULT_LEVELS, margin: int = DEFAULT_MARGIN,
                             a: Sequence | None = None, spots: Sequence[int] | None = None) -> QuasiIsoReport:
    C, G, phi = comparison(x, M)
    window = list(default_window(C.x) if window is None else window)
    phi.verify(window, range(FIRST_LEVEL, levels))
    hyp = is_filter_regular(C.x, M, a)
    spots = range(0, C.n + 1) if spots is None else spots
    cells = [induced_map(phi, k, d, levels, margin) for k in spots for d in window]
    return QuasiIsoReport(C.x, hyp, cells)


@dataclass
class TopSpotReport:
    cells: list
    chain_surjective: dict

    @property
    def surjective(self) -> bool:
        return all(self.chain_surjective.values()) and all(c.surjective for c in self.cells)

    @property
    def injective(self) -> bool:
        return all(c.injective for c in self.cells)

    @property
    def verdict(self) -> bool:
        return all(c.verdict == "iso" for c in self.cells) and all(self.chain_surjective.values())

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "surjective": self.surjective, "injective": self.injective,
                "chain_surjective": {str(k): v for k, v in self.chain_surjective.items()},
                "cells": [c.to_dict() for c in self.cells]}


def top_homology_iso_check(x: Sequence, M: GradedModule, window: Sequence[int] | None = None,
                           levels: int = DEFAULT_LEVELS, margin: int = DEFAULT_MARGIN) -> TopSpotReport:
    """``θ^{n*}`` on the top spot; no filter-regular hypothesis needed.

    Surjectivity is asserted twice: at chain level (the ``{1..n}`` block of
    ``θ^n`` is onto at every level) and on stabilized homology.
    """
    C, G, phi = comparison(x, M)
    n = C.n
    window = list(default_window(C.x) if window is None else window)
    chain = {}
    for d in window:
        ok = True
        for lv in range(FIRST_LEVEL, levels + 1):
            T = phi.matrix(n, d, lv)
            if T.rank() != G.dim(n, d, lv):
                ok = False
                break
        chain[d] = ok
    cells = [induced_map(phi, n, d, levels, margin) for d in window]
    return TopSpotReport(cells, chain)


@dataclass
class TwoElementReport:
    hypothesis: FilterRegularReport
    cells: list
    certificates: list = field(default_factory=list)

    @property
    def injective(self) -> bool:
        return all(c.injective for c in self.cells)

    @property
    def surjective(self) -> bool:
        return all(c.surjective for c in self.cells)

    @property
    def verdict(self) -> str:
        if any(not c.stable for c in self.cells):
            return "inconclusive"
        return "iso" if self.injective and self.surjective else "not-iso"

    @property
    def label(self) -> str:
        return "hypothesis met" if self.hypothesis.verdict else "hypothesis unmet"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "hypothesis": self.label, "injective": self.injective,
                "surjective": self.surjective, "cells": [c.to_dict() for c in self.cells],
                "certificates": self.certificates}


def two_element_case(x1, x2, M: GradedModule, window: Sequence[int] | None = None,
                     levels: int = DEFAULT_LEVELS, margin: int = DEFAULT_MARGIN,
                     max_certificates: int = 4) -> TwoElementReport:
    """Spot-1 comparison for a two-element sequence with surjectivity certificates.

    For a representative ``a / (x_1^δ)`` of a class in ``Ker e^1`` the relation
    ``x_2^δ a = x_1^δ b`` is extracted by membership, and ``(a/x_1^δ, b/x_2^δ)``
    is checked to be a Čech cycle lifting it.
    """
    C, G, phi = comparison([x1, x2], M)
    window = list(default_window(C.x) if window is None else window)
    hyp = is_filter_regular(C.x, M)
    cells = [induced_map(phi, 1, d, levels, margin) for d in window]
    certs = []
    for d in window:
        if len(certs) >= max_certificates:
            break
        cell = colimit_homology(G, 1, d, levels, margin)
        lv = cell.level
        e = G.piece_degree(1, d, lv)
        for rep in cell.representatives:
            if len(certs) >= max_certificates:
                break
            a = M.element(rep, e)
            N = M.ideal_times_module([C.x[0] ** lv])
            ok, cof = N.membership(C.x[1] ** lv * a)
            if not ok:
                continue
            b = FreeVector(M.ring, M.shifts, {})
            for s in range(M.rank):
                if cof[s]:
                    b = b + cof[s] * M.generator(s)
            residue = C.x[0] ** lv * b - C.x[1] ** lv * a
            certs.append({"degree": d, "level": lv, "a": str(a), "b": str(b),
                          "cycle": M.relation_module.contains(residue)})
    return TwoElementReport(hyp, cells, certs)


# ---------------------------------------------------------------------------
# exact sequences and Tor


def _degree_range(window, levels, G: GenFracComplex):
    lo = min(window)
    hi = max(window) + (levels + 1) * G.denominator_degree(G.n)
    return range(lo, hi + 1)


def _ses_input_exact(inj: HomogeneousMap, surj: HomogeneousMap, degrees) -> list:
    """Degrees where ``0 -> N' -> N -> N'' -> 0`` fails to be exact."""
    bad = []
    for d in degrees:
        A, B = inj.matrix(d), surj.matrix(d)
        n1, n2, n3 = inj.source.dim(d), inj.target.dim(d), surj.target.dim(d)
        if B.ncols and A.ncols and not (B @ A).is_zero():
            bad.append(d)
            continue
        ra, rb = A.rank(), B.rank()
        if ra != n1 or rb != n3 or n2 - rb != ra:
            bad.append(d)
    return bad


@dataclass
class SESReport:
    status: str
    hypothesis: FilterRegularReport
    input_failures: list
    exactness: ExactnessReport | None

    def to_dict(self) -> dict:
        return {"status": self.status, "filter_regular": self.hypothesis.to_dict(),
                "input_failures": self.input_failures,
                "exactness": None if self.exactness is None else self.exactness.to_dict()}


def apply_gf_to_ses(inj: HomogeneousMap, surj: HomogeneousMap, x: Sequence,
                    window: Sequence[int] | None = None, levels: int = DEFAULT_LEVELS,
                    margin: int = DEFAULT_MARGIN) -> SESReport:
    """Exactness of ``0 -> U^{-n}N' -> U^{-n}N -> U^{-n}N'' -> 0`` at the top spot."""
    Np, N, Npp = inj.source, inj.target, surj.target
    if surj.source is not N:
        raise ValueError("the two maps do not compose")
    cols = [GenFracComplex(x, Np), GenFracComplex(x, N), GenFracComplex(x, Npp)]
    n = cols[0].n
    window = list(default_window(cols[0].x) if window is None else window)
    if not (inj.is_well_defined() and surj.is_well_defined()):
        return SESReport("input-not-exact", FilterRegularReport(cols[0].x, cols[0].x), ["ill-defined map"], None)
    failures = _ses_input_exact(inj, surj, _degree_range(window, levels, cols[0]))
    a = cols[0].x
    hyp = is_filter_regular(a[:-1], Npp, a) if n > 1 else FilterRegularReport((), a)
    if failures:
        return SESReport("input-not-exact", hyp, failures, None)
    maps = [induced_morphism(inj, cols[0], cols[1]), induced_morphism(surj, cols[1], cols[2])]
    rep = ses_exactness_report(cols, maps, window, levels, margin, spots=[n])
    if not hyp.verdict:
        status = "hypothesis-unmet"
    elif not rep.stable:
        status = "inconclusive"
    else:
        status = "exact" if rep.exact else "exactness-failure"
    return SESReport(status, hyp, [], rep)


@dataclass
class FreeResolution:
    """``F_0 <- F_1 <- ...`` with ``maps[i]: F_{i+1} -> F_i`` and ``F_0 -> M`` the presentation."""

    modules: list
    maps: list

    def is_complex(self, degrees) -> bool:
        for f, g in zip(self.maps[1:], self.maps):
            for d in degrees:
                if not (g.matrix(d) @ f.matrix(d)).is_zero():
                    return False
        return True


def koszul_resolution(M: GradedModule) -> FreeResolution:
    """Koszul resolution of a cyclic ``A/(f_1..f_c)``; exact when the f's are regular."""
    if M.rank != 1:
        raise ValueError("Koszul resolutions are provided for cyclic modules only")
    ring = M.ring
    fs = [r.component(0) for r in M.relations]
    c = len(fs)
    s0 = M.shifts[0]
    subsets = [list(combinations(range(c), i)) for i in range(c + 1)]
    mods = [GradedModule.free(ring, [s0 + sum(fs[t].degree() for t in S) for S in subsets[i]] or ())
            for i in range(c + 1)]
    maps = []
    for i in range(1, c + 1):
        src, tgt = mods[i], mods[i - 1]
        index = {S: j for j, S in enumerate(subsets[i - 1])}
        images = []
        for S in subsets[i]:
            comps = [ring.zero() for _ in subsets[i - 1]]
            for pos, t in enumerate(S):
                T = S[:pos] + S[pos + 1:]
                comps[index[T]] = fs[t] if pos % 2 == 0 else -fs[t]
            images.append(FreeVector.from_components(ring, comps, tgt.shifts))
        maps.append(HomogeneousMap(src, tgt, images))
    return FreeResolution(mods, maps)


def syzygy_resolution(M: GradedModule, length: int) -> FreeResolution:
    """A (non-minimal) free resolution from iterated syzygies of the presentation."""
    ring = M.ring
    F0 = GradedModule.free(ring, M.shifts)
    mods, maps = [F0], []
    gens = list(M.relation_module.gens)
    cur = F0
    for _ in range(length):
        gens = [g for g in gens if g]
        if not gens:
            break
        S = _submodule(ring, cur.shifts, gens)
        shifts = tuple(g.degree() for g in gens)
        Fi = GradedModule.free(ring, shifts)
        maps.append(HomogeneousMap(Fi, cur, gens))
        mods.append(Fi)
        gens = [FreeVector(ring, shifts, dict(z.terms)) for z in S.syzygies().gens]
        cur = Fi
    return FreeResolution(mods, maps)


def _submodule(ring, shifts, gens):
    from .groebner import Submodule
    return Submodule(ring, shifts, gens)


@dataclass
class TorReport:
    status: str
    hypotheses: dict
    tor: dict
    tor0_direct: dict
    tor0_agrees: bool | None

    def to_dict(self) -> dict:
        return {"status": self.status,
                "hypotheses": {k: v.to_dict() for k, v in self.hypotheses.items()},
                "tor": {str(i): {str(d): c for d, c in cells.items()} for i, cells in self.tor.items()},
                "tor0_direct": {str(d): v for d, v in self.tor0_direct.items()},
                "tor0_agrees": self.tor0_agrees}


def _space_colimit(G: LevelComplex, spot: int, d: int, levels: int, margin: int):
    S = ExplicitComplex(G.field, range(1), lambda j, dd, lv: G.dim(spot, dd, lv),
                        lambda j, dd, lv: Matrix.zero(G.field, 0, G.dim(spot, dd, lv)),
                        lambda j, dd, lv: G.transition(spot, dd, lv),
                        lambda j, dd: G.start_level(spot, dd))
    return colimit_homology(S, 0, d, levels, margin)


def tor_vanishing_check(x: Sequence, M: GradedModule, resolution: FreeResolution | None = None,
                        i_max: int = 1, window: Sequence[int] | None = None,
                        levels: int = DEFAULT_LEVELS, margin: int = DEFAULT_MARGIN) -> TorReport:
    """``Tor_i(U^{-n}A, M)`` for ``1 <= i <= i_max`` as homology of ``U^{-n}F_•``."""
    ring = M.ring
    A = GradedModule.free(ring)
    hyps = {"module": is_filter_regular(x, M), "ring": is_filter_regular(x, A)}
    G0 = GenFracComplex(x, M)
    window = list(default_window(G0.x) if window is None else window)
    n = G0.n
    if not all(h.verdict for h in hyps.values()):
        return TorReport("hypothesis-unmet", hyps, {}, {}, None)
    if resolution is None:
        resolution = syzygy_resolution(M, i_max + 1)
    mods = list(resolution.modules)
    maps = list(resolution.maps)
    top = min(len(mods) - 1, i_max + 1)
    mods, maps = mods[:top + 1], maps[:top]
    cols = [GenFracComplex(x, F) for F in mods]
    # positions run F_top, ..., F_0 so that differentials raise the position
    order = list(range(top, -1, -1))
    seq_cols = [cols[i] for i in order]
    seq_maps = [induced_morphism(maps[i - 1], cols[i], cols[i - 1]) for i in order[:-1]]
    S = sequence_complex(seq_cols, seq_maps, n) if seq_maps else sequence_complex(seq_cols, [], n)
    tor: dict = {}
    stable = True
    tor0_stable = True
    for i in range(0, i_max + 1):
        tor[i] = {}
        for d in window:
            if i > top:
                tor[i][d] = 0
                continue
            cell = colimit_homology(S, top - i, d, levels, margin)
            if i == 0:
                tor0_stable = tor0_stable and cell.stable
            else:
                stable = stable and cell.stable
            tor[i][d] = cell.dimension
    direct = {}
    for d in window:
        cell = _space_colimit(G0, n, d, levels, margin)
        tor0_stable = tor0_stable and cell.stable
        direct[d] = cell.dimension
    # pieces of U^{-n}M may be infinite dimensional; then no comparison is made
    agrees = all(tor[0][d] == direct[d] for d in window) if tor0_stable else None
    vanish = all(v == 0 for i in range(1, i_max + 1) for v in tor[i].values())
    if not stable:
        status = "inconclusive"
    else:
        status = "vanishes" if vanish else "nonvanishing"
    return TorReport(status, hyps, tor, direct, agrees)
