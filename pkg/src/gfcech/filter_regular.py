"""Filter-regular sequences: definitional test, all-orders test, synthesis.

``x_1, ..., x_n`` is filter regular on ``M`` with respect to ``a`` when
``(x_1..x_i)M :_M x_{i+1}  ⊆  (x_1..x_i)M :_M a^∞`` for every ``i < n``.
Containment is checked generator by generator through membership.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graded import GradedModule
from .groebner import Submodule
from .polynomials import FreeVector, Poly, monomials_of_degree

MAX_UNCONDITIONED = 6


@dataclass
class StepReport:
    index: int
    element: Poly
    colon_gens: list
    saturation_gens: list
    saturation_exponent: int
    contained: bool
    witness: FreeVector | None = None

    def to_dict(self) -> dict:
        return {"index": self.index, "element": str(self.element),
                "colon": [str(g) for g in self.colon_gens],
                "saturation": [str(g) for g in self.saturation_gens],
                "saturation_exponent": self.saturation_exponent,
                "contained": self.contained,
                "witness": None if self.witness is None else str(self.witness)}


@dataclass
class FilterRegularReport:
    sequence: tuple
    ideal: tuple
    steps: list = field(default_factory=list)
    precondition_failures: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.precondition_failures:
            return "precondition-failed"
        return "filter-regular" if all(s.contained for s in self.steps) else "not-filter-regular"

    @property
    def verdict(self) -> bool:
        return self.status == "filter-regular"

    def __bool__(self):
        return self.verdict

    @property
    def witness(self):
        for s in self.steps:
            if not s.contained:
                return s.index, s.witness
        return None

    def to_dict(self) -> dict:
        return {"sequence": [str(g) for g in self.sequence], "ideal": [str(g) for g in self.ideal],
                "status": self.status, "verdict": self.verdict,
                "precondition_failures": [str(g) for g in self.precondition_failures],
                "steps": [s.to_dict() for s in self.steps]}


class _Checker:
    """Caches colons and saturations by the set of already used elements."""

    def __init__(self, M: GradedModule, a: Sequence[Poly]):
        self.M = M
        self.a = tuple(a)
        self._N: dict = {}
        self._sat: dict = {}
        self._step: dict = {}

    def N(self, prefix: frozenset, elems) -> Submodule:
        S = self._N.get(prefix)
        if S is None:
            S = self.M.ideal_times_module([elems[t] for t in sorted(prefix)])
            self._N[prefix] = S
        return S

    def saturation(self, prefix, elems):
        S = self._sat.get(prefix)
        if S is None:
            S = self.M.saturate(self.N(prefix, elems), self.a)
            self._sat[prefix] = S
        return S

    def step(self, prefix: frozenset, nxt: int, elems, pos: int) -> StepReport:
        key = (prefix, nxt)
        rep = self._step.get(key)
        if rep is None:
            M = self.M
            N = self.N(prefix, elems)
            C = M.colon(N, elems[nxt])
            sat, k = self.saturation(prefix, elems)
            witness = None
            for g in C.gens:
                if not sat.contains(g):
                    witness = M.relation_module.normal_form(g)
                    break
            rep = StepReport(pos, elems[nxt], _trim(C, M), _trim(sat, M), k, witness is None, witness)
            self._step[key] = rep
        return rep


def _trim(S: Submodule, M: GradedModule) -> list:
    """Generators of ``S/R``: Gröbner elements that are not relations."""
    R = M.relation_module
    return [g for g in S.groebner_basis if not R.contains(g)]


def _prepare(x, M: GradedModule, a):
    ring = M.ring
    xs = tuple(ring(g) for g in x)
    for g in xs:
        if not g.is_homogeneous():
            raise ValueError(f"sequence element {g} is not homogeneous")
    a = xs if a is None else tuple(ring(g) for g in a)
    for g in a:
        if not g.is_homogeneous():
            raise ValueError(f"ideal generator {g} is not homogeneous")
    return xs, a


def _outside(xs, a, ring) -> list:
    I = Submodule.ideal(ring, list(a) + list(ring.ideal))
    return [g for g in xs if not I.contains(g)]


def is_filter_regular(x: Sequence, M: GradedModule, a: Sequence | None = None,
                      _checker: _Checker | None = None) -> FilterRegularReport:
    """Definitional test; ``a`` defaults to the ideal generated by ``x``."""
    xs, a = _prepare(x, M, a)
    rep = FilterRegularReport(xs, a)
    rep.precondition_failures = _outside(xs, a, M.ring)
    if rep.precondition_failures:
        return rep
    chk = _checker or _Checker(M, a)
    for i in range(len(xs)):
        rep.steps.append(chk.step(frozenset(range(i)), i, xs, i))
    return rep


@dataclass
class UnconditionedReport:
    sequence: tuple
    verdict: bool
    failing_order: tuple | None
    failing_report: FilterRegularReport | None
    orders_checked: int

    def __bool__(self):
        return self.verdict

    def to_dict(self) -> dict:
        return {"sequence": [str(g) for g in self.sequence], "verdict": self.verdict,
                "failing_order": None if self.failing_order is None else [str(g) for g in self.failing_order],
                "orders_checked": self.orders_checked,
                "failing_report": None if self.failing_report is None else self.failing_report.to_dict()}


def is_unconditioned(x: Sequence, M: GradedModule, a: Sequence | None = None) -> UnconditionedReport:
    """Filter regular in every order (all ``n!`` permutations)."""
    xs, a = _prepare(x, M, a)
    if len(xs) > MAX_UNCONDITIONED:
        raise ValueError(f"refusing to enumerate {len(xs)}! orders; at most {MAX_UNCONDITIONED} "
                         "elements are supported, test a shorter sequence or single orders")
    bad = _outside(xs, a, M.ring)
    if bad:
        rep = FilterRegularReport(xs, a, precondition_failures=bad)
        return UnconditionedReport(xs, False, xs, rep, 0)
    chk = _Checker(M, a)
    count = 0
    for perm in itertools.permutations(range(len(xs))):
        count += 1
        rep = FilterRegularReport(tuple(xs[p] for p in perm), a)
        ok = True
        for i in range(len(perm)):
            st = chk.step(frozenset(perm[:i]), perm[i], xs, i)
            rep.steps.append(st)
            if not st.contained:
                ok = False
                break
        if not ok:
            return UnconditionedReport(xs, False, rep.sequence, rep, count)
    return UnconditionedReport(xs, True, None, None, count)


def check_power_stability(x: Sequence, exponents: Sequence[int], M: GradedModule,
                          a: Sequence | None = None) -> tuple:
    """``(filter regular?, filter regular with x_i^{t_i}?)`` for the same ideal."""
    xs, a = _prepare(x, M, a)
    if len(exponents) != len(xs) or any(t < 1 for t in exponents):
        raise ValueError("one positive exponent per element required")
    powered = [g ** t for g, t in zip(xs, exponents)]
    return (is_filter_regular(xs, M, a).verdict, is_filter_regular(powered, M, a).verdict)


@dataclass
class SynthesisResult:
    sequence: tuple
    trials: int
    seed: int
    verification: UnconditionedReport
    ideal_equal: bool

    @property
    def ok(self) -> bool:
        return self.verification.verdict and self.ideal_equal

    def to_dict(self) -> dict:
        return {"sequence": [str(g) for g in self.sequence], "trials": self.trials, "seed": self.seed,
                "ideal_equal": self.ideal_equal, "verification": self.verification.to_dict()}


class SynthesisError(RuntimeError):
    def __init__(self, msg, last_report=None):
        super().__init__(msg)
        self.last_report = last_report


def _random_form(ring, degree: int, rng: random.Random, bound: int = 9) -> Poly:
    F = ring.field
    terms = {}
    for m in monomials_of_degree(ring.weights, degree):
        c = F(rng.randint(-bound, bound))
        if c != F.zero:
            terms[m] = c
    return Poly(ring, terms)


def synthesize_generators(a_gens: Sequence, M: GradedModule, max_trials: int = 20,
                          seed: int = 0) -> SynthesisResult:
    """Generators of ``(a_gens)`` forming an unconditioned filter-regular sequence on M.

    Each ``x_{i+1}`` is ``a_{i+1}`` plus a random homogeneous combination of the
    chosen ``x``'s and the remaining ``a``'s; the unperturbed choice is tried
    first.  ``max_trials`` bounds the attempts per position.
    """
    if max_trials < 1:
        raise ValueError("max_trials must be positive")
    ring = M.ring
    a = tuple(ring(g) for g in a_gens)
    for g in a:
        if not g.is_homogeneous():
            raise ValueError(f"ideal generator {g} is not homogeneous")
    rng = random.Random(seed)
    chosen: list = []
    total = 0
    last = None
    for i, target in enumerate(a):
        helpers = chosen + list(a[i + 1:])
        dt = target.degree()
        for trial in range(max_trials):
            total += 1
            cand = target
            if trial and dt is not None:
                for h in helpers:
                    dh = h.degree()
                    if dh is None or dh > dt:
                        continue
                    mult = _random_form(ring, dt - dh, rng)
                    if mult:
                        cand = cand + mult * h
            if not cand:
                continue
            last = is_unconditioned(chosen + [cand], M, a)
            if last.verdict:
                chosen.append(cand)
                break
        else:
            raise SynthesisError(f"no acceptable replacement for {target} within {max_trials} trials",
                                 last)
    ver = is_unconditioned(chosen, M, a)
    from .cech import same_ideal
    eq = same_ideal(chosen, a, ring)
    return SynthesisResult(tuple(chosen), total, seed, ver, eq)
