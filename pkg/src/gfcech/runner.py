"""Execute session tasks and assemble deterministic reports."""

from __future__ import annotations

import csv
import json
import os
import platform
import time
from dataclasses import dataclass, field

from .cech import local_cohomology
from .comparison import (apply_gf_to_ses, koszul_resolution, syzygy_resolution, tor_vanishing_check,
                         two_element_case, verify_quasi_isomorphism, top_homology_iso_check)
from .filter_regular import FilterRegularReport, is_filter_regular, is_unconditioned, MAX_UNCONDITIONED
from .filter_regular import SynthesisError, synthesize_generators
from .genfrac import GenFracComplex, GFZeroCertificate, render_fraction
from .complexes import homology_table
from .graded import HomogeneousMap
from .polynomials import FreeVector
from .session import SessionSpec, TaskDecl, Workspace, build_workspace

REPORT_FORMAT = "gfcech-report/1"
DEFAULT_WINDOW = (-8, 2)
DEFAULT_LEVELS = 8
DEFAULT_MARGIN = 2
DEFAULT_SEED = 0
DEFAULT_TRIALS = 20
MAX_REPRESENTATIVES = 3
EMPTY = "—"


def versions() -> dict:
    from . import __version__
    import sympy
    return {"gfcech": __version__, "python": platform.python_version(), "sympy": sympy.__version__}


# ---------------------------------------------------------------------------
# certificates


def _wrap(v) -> str:
    s = str(v)
    return f"({s})" if " " in s or s.startswith("-") else s


def _power(g, delta) -> str:
    s = _wrap(g)
    if delta == 1:
        return s
    if s.startswith("(") or "*" in s or "^" in s:
        s = f"({s.strip('()')})" if not s.startswith("(") else s
    return f"{s}^{delta}"


def render_certificate(cert, x=None) -> str:
    """Human-readable text of a zero certificate, witness or lifting relation."""
    if cert is None or cert == {} or cert == () or cert == []:
        return EMPTY
    if isinstance(cert, GFZeroCertificate):
        lv = cert.level
        f = cert.fraction
        k = f.denominator.arity
        names = [str(g) for g in x] if x is not None else [f"x{t}" for t in range(1, k)]
        parts = [f"{_power(names[t], lv)}*{_wrap(m)}" for t, m in enumerate(cert.parts)]
        if cert.relation_part:
            parts.append(f"[{cert.relation_part}]")
        gens = ", ".join(_power(names[t], lv) for t in range(len(cert.parts)))
        rhs = " + ".join(parts) if parts else "0"
        lhs = f"{_wrap(cert.multiplier)}*{_wrap(f.numerator)}" if cert.multiplier != cert.multiplier.ring.one() \
            else _wrap(f.numerator)
        return f"{render_fraction(f)} = 0: δ={lv}; {lhs} = {rhs} in ({gens})M"
    if isinstance(cert, FilterRegularReport):
        w = cert.witness
        if w is None:
            return EMPTY
        i, v = w
        seq = cert.sequence
        if i == 0:
            return f"{_wrap(seq[0])}*{_wrap(v)} = 0 in M, but {v} is not in 0 :_M a^∞"
        prefix = ", ".join(str(g) for g in seq[:i])
        return (f"{_wrap(seq[i])}*{_wrap(v)} in ({prefix})M, but {v} is not in "
                f"({prefix})M :_M a^∞")
    if isinstance(cert, tuple) and len(cert) == 2:
        i, v = cert
        return f"step {i}: {v}"
    if isinstance(cert, dict) and "b" in cert:
        lv = cert["level"]
        return (f"deg {cert['degree']}, δ={lv}: x2^{lv}*{_wrap(cert['a'])} = x1^{lv}*{_wrap(cert['b'])}; "
                f"cycle ({cert['a']}/x1^{lv}, {cert['b']}/x2^{lv})"
                + ("" if cert.get("cycle", True) else " [NOT A CYCLE]"))
    return str(cert)


# ---------------------------------------------------------------------------
# tables


def table_dict(T, window) -> dict:
    degrees = list(window)
    spots = {}
    for k in T.spots():
        cells = [T.cells[(k, d)] for d in degrees]
        spots[str(k)] = {"dims": [c.dimension for c in cells], "stable": [c.stable for c in cells],
                         "levels": [c.level for c in cells]}
    return {"degrees": degrees, "all_stable": T.all_stable(), "spots": spots}


@dataclass
class TaskResult:
    index: int
    task: TaskDecl
    params: dict
    status: str = "ok"
    verdict: object = None
    negative: bool = False
    error: str | None = None
    hypotheses: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    csv_tables: dict = field(default_factory=dict)   # spot -> (header, rows)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"index": self.index, "kind": self.task.kind, "module": self.task.module,
                "sequence": self.task.seq, "params": self.params, "status": self.status,
                "verdict": self.verdict, "negative": self.negative, "error": self.error,
                "hypotheses": self.hypotheses, "tables": self.tables,
                "certificates": self.certificates, "details": self.details,
                "timing": {"seconds": round(self.seconds, 6)}}


def resolve_params(task: TaskDecl, spec: SessionSpec, seed: int | None = None,
                   field_name: str | None = None) -> dict:
    p = dict(task.params)
    out = {"window": list(p.get("window", DEFAULT_WINDOW)),
           "levels": p.get("levels", DEFAULT_LEVELS),
           "margin": p.get("margin", DEFAULT_MARGIN),
           "seed": seed if seed is not None else p.get("seed", DEFAULT_SEED),
           "field": field_name or p.get("field", spec.ring.field)}
    for key in ("ideal", "trials", "by", "imax", "resolution"):
        if key in p:
            out[key] = p[key]
    return out


def _rows_from_table(T, window, k):
    return [[d, T.cells[(k, d)].dimension, T.cells[(k, d)].stable, T.cells[(k, d)].level] for d in window]


def _table_task(res: TaskResult, C, window, levels, margin, name):
    T = homology_table(C, window, levels, margin)
    res.tables[name] = table_dict(T, window)
    res.verdict = "stable" if T.all_stable() else "inconclusive"
    for k in T.spots():
        res.csv_tables[k] = (["degree", "dimension", "stable", "level"], _rows_from_table(T, window, k))
    return T


def _run_localcohomology(res, ws, M, x, p):
    window = range(p["window"][0], p["window"][1] + 1)
    T = local_cohomology(x, M, window, p["levels"], p["margin"])
    res.tables["cech"] = table_dict(T, window)
    res.verdict = "stable" if T.all_stable() else "inconclusive"
    for k in T.spots():
        res.csv_tables[k] = (["degree", "dimension", "stable", "level"], _rows_from_table(T, window, k))


def _run_genfrac(res, ws, M, x, p):
    window = range(p["window"][0], p["window"][1] + 1)
    G = GenFracComplex(x, M)
    T = _table_task(res, G, window, p["levels"], p["margin"], "genfrac")
    reps = []
    for k in T.spots():
        for d in window:
            cell = T.cells[(k, d)]
            if not cell.dimension:
                continue
            lv = cell.level
            Q = G.space(k, lv)
            e = G.piece_degree(k, d, lv)
            shown = []
            for r in cell.representatives[:MAX_REPRESENTATIVES]:
                num = Q.element(r, e)
                if k == 0:
                    shown.append(str(num))
                else:
                    v = FreeVector(M.ring, M.shifts, dict(num.terms))
                    shown.append(render_fraction(G.fraction(v, (lv,) * k)))
            reps.append({"spot": k, "degree": d, "level": lv, "fractions": shown})
    res.certificates = reps


def _run_compare(res, ws, M, x, p):
    window = list(range(p["window"][0], p["window"][1] + 1))
    rep = verify_quasi_isomorphism(x, M, window, p["levels"], p["margin"])
    top = top_homology_iso_check(x, M, window, p["levels"], p["margin"])
    res.hypotheses["filter_regular"] = rep.hypothesis.to_dict()
    res.hypotheses["label"] = rep.label
    res.verdict = rep.verdict
    res.negative = rep.verdict != "iso" or not rep.hypothesis_met
    res.details["top_spot"] = {"verdict": top.verdict, "surjective": top.surjective,
                               "injective": top.injective}
    res.details["inconclusive"] = [list(c) for c in rep.inconclusive()]
    cech, gf = {}, {}
    for c in rep.cells:
        cech.setdefault(c.spot, {})[c.degree] = c.source_dim
        gf.setdefault(c.spot, {})[c.degree] = c.target_dim
        res.csv_tables.setdefault(c.spot, (["degree", "cech_dim", "genfrac_dim", "rank", "stable", "verdict"], []))
        res.csv_tables[c.spot][1].append([c.degree, c.source_dim, c.target_dim, c.rank, c.stable, c.verdict])
    for name, src in (("cech", cech), ("genfrac", gf)):
        res.tables[name] = {"degrees": window,
                            "spots": {str(k): {"dims": [src[k][d] for d in window]} for k in sorted(src)}}
    res.tables["induced"] = [c.to_dict() for c in rep.cells]
    if len(x) == 2:
        two = two_element_case(x[0], x[1], M, window, p["levels"], p["margin"])
        res.details["two_element"] = {"verdict": two.verdict, "injective": two.injective,
                                      "surjective": two.surjective}
        res.certificates = [render_certificate(c) for c in two.certificates]


def _ideal_of(ws: Workspace, p, x):
    return ws.ideals[p["ideal"]] if "ideal" in p else x


def _run_filtreg(res, ws, M, x, p):
    a = _ideal_of(ws, p, x)
    rep = is_filter_regular(x, M, a)
    res.hypotheses["filter_regular"] = rep.to_dict()
    res.verdict = rep.status
    res.negative = not rep.verdict
    if len(x) <= MAX_UNCONDITIONED:
        u = is_unconditioned(x, M, a)
        res.details["unconditioned"] = u.to_dict()
    res.certificates = [render_certificate(rep)] if rep.witness is not None else []


def _run_synth(res, ws, M, x, p):
    try:
        out = synthesize_generators(x, M, max_trials=p.get("trials", DEFAULT_TRIALS), seed=p["seed"])
    except SynthesisError as exc:
        res.verdict = "failed"
        res.negative = True
        res.details["synthesis"] = {"error": str(exc), "last_report":
                                    None if exc.last_report is None else exc.last_report.to_dict()}
        return
    res.details["synthesis"] = out.to_dict()
    res.hypotheses["unconditioned"] = out.verification.verdict
    res.hypotheses["ideal_equal"] = out.ideal_equal
    res.verdict = "ok" if out.ok else "failed"
    res.negative = not out.ok


def _run_ses(res, ws, M, x, p):
    if "by" not in p:
        raise ValueError("the ses task needs a multiplier: by <f>")
    f = ws.ring(p["by"])
    Np = M.twist(f.degree())
    inj = HomogeneousMap(Np, M, [f * M.generator(t) for t in range(M.rank)])
    Npp = M.quotient([f * M.generator(t) for t in range(M.rank)])
    surj = HomogeneousMap(M, Npp, [Npp.generator(t) for t in range(M.rank)])
    window = list(range(p["window"][0], p["window"][1] + 1))
    rep = apply_gf_to_ses(inj, surj, x, window, p["levels"], p["margin"])
    res.hypotheses["filter_regular"] = rep.hypothesis.to_dict()
    res.hypotheses["label"] = "hypothesis unmet" if rep.status == "hypothesis-unmet" else \
        ("hypothesis met" if rep.hypothesis.verdict else "hypothesis unmet")
    res.verdict = rep.status
    res.negative = rep.status != "exact"
    res.details["input_failures"] = rep.input_failures
    if rep.exactness is not None:
        res.tables["exactness"] = rep.exactness.to_dict()
        for c in rep.exactness.cells:
            res.csv_tables.setdefault(c.spot, (["degree", "exact", "injective", "middle", "surjective", "stable"], []))
            res.csv_tables[c.spot][1].append([c.degree, c.exact, c.injective, c.middle, c.surjective, c.stable])


def _run_tor(res, ws, M, x, p):
    kind = p.get("resolution")
    if kind is None:
        kind = "koszul" if M.rank == 1 else "syzygy"
    imax = p.get("imax", 1)
    resolution = koszul_resolution(M) if kind == "koszul" else syzygy_resolution(M, imax + 1)
    window = list(range(p["window"][0], p["window"][1] + 1))
    rep = tor_vanishing_check(x, M, resolution, imax, window, p["levels"], p["margin"])
    res.hypotheses = {k: v.to_dict() for k, v in rep.hypotheses.items()}
    res.verdict = rep.status
    res.negative = rep.status != "vanishes" or rep.tor0_agrees is False
    res.details["resolution"] = kind
    res.details["tor0_agrees"] = rep.tor0_agrees
    res.details["tor0_direct"] = [rep.tor0_direct.get(d) for d in window] if rep.tor0_direct else []
    res.tables["tor"] = {"degrees": window,
                         "spots": {str(i): {"dims": [cells[d] for d in window]} for i, cells in rep.tor.items()}}
    for i, cells in rep.tor.items():
        res.csv_tables[i] = (["degree", "dimension"], [[d, cells[d]] for d in window])


RUNNERS = {"localcohomology": _run_localcohomology, "genfrac": _run_genfrac, "compare": _run_compare,
           "filtreg": _run_filtreg, "synth": _run_synth, "ses": _run_ses, "tor": _run_tor}


@dataclass
class Report:
    spec: SessionSpec
    results: list
    seed: int | None
    seconds: float = 0.0

    def to_dict(self) -> dict:
        from .session import render_session
        return {"format": REPORT_FORMAT, "versions": versions(), "seed": self.seed,
                "session": render_session(self.spec).splitlines(),
                "tasks": [r.to_dict() for r in self.results],
                "summary": {"tasks": len(self.results),
                            "errors": sum(r.status == "error" for r in self.results),
                            "negative": sum(r.negative for r in self.results)},
                "timing": {"seconds": round(self.seconds, 6)}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def exit_code(self, assert_hypotheses: bool = False) -> int:
        if any(r.status == "error" for r in self.results):
            return 1
        if assert_hypotheses and any(r.negative for r in self.results):
            return 2
        return 0

    def write_csv(self, directory) -> list:
        os.makedirs(directory, exist_ok=True)
        written = []
        for r in self.results:
            for spot in sorted(r.csv_tables):
                header, rows = r.csv_tables[spot]
                path = os.path.join(directory, f"task{r.index:02d}_{r.task.kind}_spot{spot}.csv")
                with open(path, "w", newline="", encoding="utf-8") as fh:
                    w = csv.writer(fh)
                    w.writerow(header)
                    w.writerows(rows)
                written.append(path)
        return written


def strip_timing(payload):
    """Copy of a report payload without timing fields."""
    if isinstance(payload, dict):
        return {k: strip_timing(v) for k, v in payload.items() if k != "timing"}
    if isinstance(payload, list):
        return [strip_timing(v) for v in payload]
    return payload


def run_task(index: int, task: TaskDecl, spec: SessionSpec, workspaces: dict,
             seed: int | None = None, field_name: str | None = None) -> TaskResult:
    params = resolve_params(task, spec, seed, field_name)
    res = TaskResult(index, task, params)
    t0 = time.perf_counter()
    try:
        ws = workspaces.get(params["field"])
        if ws is None:
            ws = workspaces[params["field"]] = build_workspace(spec, params["field"])
        RUNNERS[task.kind](res, ws, ws.modules[task.module], ws.seqs[task.seq], params)
    except Exception as exc:  # isolate task failures
        res.status = "error"
        res.error = f"{type(exc).__name__}: {exc}"
        res.negative = True
        res.csv_tables = {}
    res.seconds = time.perf_counter() - t0
    return res


def run(spec: SessionSpec, seed: int | None = None, field_name: str | None = None) -> Report:
    t0 = time.perf_counter()
    workspaces: dict = {}
    results = [run_task(i, t, spec, workspaces, seed, field_name) for i, t in enumerate(spec.tasks)]
    return Report(spec, results, seed, time.perf_counter() - t0)

