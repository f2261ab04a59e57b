"""Line-based session files.

A session declares one ring, then named ideals, modules and sequences, then
tasks::

    ring Q[x,y] weights 1 1
    ideal I = x*y
    module M = quotient I
    module N = coker [[x, y]] shifts 0 0
    seq x = x+y, x-y
    task compare M x window -4:2 levels 8 margin 2

Blank lines and ``#`` comments are ignored.  Elements are stored in a
canonical rendering so that ``parse_session(render_session(s)) == s``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .fields import PrimeField, field_from_string
from .graded import GradedModule
from .polynomials import FreeVector, Poly, PolyRing, parse_polynomial, render_monomial, wdeg

TASK_KINDS = ("localcohomology", "genfrac", "compare", "filtreg", "synth", "ses", "tor")
COMMON_KEYS = ("window", "levels", "margin", "seed", "field")
TASK_KEYS = {
    "localcohomology": COMMON_KEYS,
    "genfrac": COMMON_KEYS,
    "compare": COMMON_KEYS,
    "filtreg": COMMON_KEYS + ("ideal",),
    "synth": COMMON_KEYS + ("trials",),
    "ses": COMMON_KEYS + ("by",),
    "tor": COMMON_KEYS + ("imax", "resolution"),
}
MAX_LEVELS = 64
MAX_TRIALS = 1000
MAX_IMAX = 6


class SessionError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        self.line, self.col, self.message = line, col, message
        super().__init__(f"line {line}, col {col}: {message}")


@dataclass(frozen=True)
class RingDecl:
    field: str
    names: tuple
    weights: tuple


@dataclass(frozen=True)
class IdealDecl:
    name: str
    gens: tuple


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    kind: str                 # quotient | coker | free
    shifts: tuple
    ideal: str | None = None
    columns: tuple = ()       # coker: each inner tuple is one relation column


@dataclass(frozen=True)
class SeqDecl:
    name: str
    gens: tuple


@dataclass(frozen=True)
class TaskDecl:
    kind: str
    module: str
    seq: str
    params: tuple = ()        # (key, value) pairs in source order

    def param(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class SessionSpec:
    ring: RingDecl
    ideals: tuple = ()
    modules: tuple = ()
    seqs: tuple = ()
    tasks: tuple = ()

    def ideal(self, name: str) -> IdealDecl:
        return next(i for i in self.ideals if i.name == name)

    def module(self, name: str) -> ModuleDecl:
        return next(m for m in self.modules if m.name == name)

    def seq(self, name: str) -> SeqDecl:
        return next(s for s in self.seqs if s.name == name)


# ---------------------------------------------------------------------------
# scanning helpers


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class _Line:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> SessionError:
        return SessionError(self.lineno, (self.pos if pos is None else pos) + 1, message)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def done(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def word(self, what: str = "a word") -> tuple:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and not self.text[self.pos].isspace():
            self.pos += 1
        if start == self.pos:
            raise self.error(f"expected {what}")
        return self.text[start:self.pos], start

    def name(self, what: str = "a name") -> tuple:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(), m.start()

    def expect(self, token: str):
        self.skip()
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected {token!r}")
        self.pos += len(token)

    def peek_word(self) -> str:
        self.skip()
        m = re.compile(r"\S+").match(self.text, self.pos)
        return m.group() if m else ""

    def rest(self) -> tuple:
        self.skip()
        start = self.pos
        self.pos = len(self.text)
        return self.text[start:], start


def _split_top(text: str, start: int, sep: str = ",") -> list:
    """Split on ``sep`` outside brackets; returns (piece, column) pairs."""
    out, depth, cur = [], 0, start
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append((text[cur - start:i], cur))
            cur = start + i + 1
    out.append((text[cur - start:], cur))
    result = []
    for piece, col in out:
        lead = len(piece) - len(piece.lstrip())
        result.append((piece.strip(), col + lead))
    return result


def _int(line: _Line, text: str, col: int, what: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", text):
        raise line.error(f"{what} must be an integer, got {text!r}", col)
    return int(text)


def _offending_term(f: Poly) -> str:
    terms = f.sorted_terms()
    d0 = wdeg(terms[0][0], f.ring.weights)
    for e, _c in terms:
        if wdeg(e, f.ring.weights) != d0:
            return (f"term {render_monomial(e, f.ring.names) or '1'} has degree "
                    f"{wdeg(e, f.ring.weights)}, expected {d0}")
    return ""


def _field_name(text: str) -> str:
    F = field_from_string(text)
    return f"fp:{F.p}" if isinstance(F, PrimeField) else "Q"


class _Parser:
    def __init__(self):
        self.ring_decl: RingDecl | None = None
        self.ring: PolyRing | None = None
        self.ideals: dict = {}
        self.modules: dict = {}
        self.seqs: dict = {}
        self.tasks: list = []

    def poly(self, line: _Line, text: str, col: int, what: str) -> Poly:
        if not text:
            raise line.error(f"empty {what}", col)
        try:
            f = parse_polynomial(text, self.ring)
        except ValueError as exc:
            raise line.error(f"{what}: {exc}", col) from None
        if not f.is_homogeneous():
            raise line.error(f"{what} {text!r} is not homogeneous: {_offending_term(f)}", col)
        return f

    def fresh(self, line: _Line, name: str, col: int):
        if name in self.ideals or name in self.modules or name in self.seqs:
            raise line.error(f"name {name!r} already declared", col)

    # -- declarations

    def ring_line(self, line: _Line):
        if self.ring_decl is not None:
            raise line.error("only one ring declaration is allowed", 0)
        line.skip()
        m = re.compile(r"([^\[\s]+)\[([^\]]*)\]").match(line.text, line.pos)
        if not m:
            raise line.error("expected <field>[v1,...,vn]")
        try:
            fname = _field_name(m.group(1))
        except ValueError as exc:
            raise line.error(str(exc), m.start(1)) from None
        names = []
        for v, col in _split_top(m.group(2), m.start(2)):
            if not _NAME.fullmatch(v):
                raise line.error(f"bad variable name {v!r}", col)
            if v in names:
                raise line.error(f"duplicate variable {v!r}", col)
            names.append(v)
        line.pos = m.end()
        weights = [1] * len(names)
        if not line.done():
            key, kcol = line.word("a key")
            if key != "weights":
                raise line.error(f"unknown key {key!r} in ring declaration", kcol)
            weights = []
            while not line.done():
                w, wcol = line.word()
                w = _int(line, w, wcol, "weight")
                if w < 1:
                    raise line.error(f"weights must be positive, got {w}", wcol)
                weights.append(w)
            if len(weights) != len(names):
                raise line.error(f"{len(names)} variables but {len(weights)} weights", kcol)
        self.ring_decl = RingDecl(fname, tuple(names), tuple(weights))
        self.ring = PolyRing(names, weights)

    def need_ring(self, line: _Line):
        if self.ring is None:
            raise line.error("the ring must be declared first", 0)

    def ideal_line(self, line: _Line):
        self.need_ring(line)
        name, col = line.name("an ideal name")
        self.fresh(line, name, col)
        line.expect("=")
        text, start = line.rest()
        gens = []
        if text:
            for piece, pcol in _split_top(text, start):
                gens.append(str(self.poly(line, piece, pcol, f"generator of {name}")))
        self.ideals[name] = IdealDecl(name, tuple(gens))

    def shifts(self, line: _Line, count: int | None) -> tuple:
        if line.done():
            return (0,) * (count if count is not None else 1)
        key, kcol = line.word("a key")
        if key != "shifts":
            raise line.error(f"unknown key {key!r} in module declaration", kcol)
        vals = []
        while not line.done():
            s, scol = line.word()
            vals.append(_int(line, s, scol, "shift"))
        if count is not None and len(vals) != count:
            raise line.error(f"expected {count} shifts, got {len(vals)}", kcol)
        if not vals:
            raise line.error("shifts needs at least one value", kcol)
        return tuple(vals)

    def module_line(self, line: _Line):
        self.need_ring(line)
        name, col = line.name("a module name")
        self.fresh(line, name, col)
        line.expect("=")
        kind, kcol = line.name("quotient, coker or free")
        if kind == "quotient":
            iname, icol = line.name("an ideal name")
            if iname not in self.ideals:
                raise line.error(f"unknown ideal {iname!r}", icol)
            shifts = self.shifts(line, 1)
            decl = ModuleDecl(name, kind, shifts, ideal=iname)
        elif kind == "coker":
            line.skip()
            start = line.pos
            if not line.text.startswith("[", start):
                raise line.error("expected [[...], ...]")
            depth, end = 0, None
            for i in range(start, len(line.text)):
                if line.text[i] == "[":
                    depth += 1
                elif line.text[i] == "]":
                    depth -= 1
                    if depth == 0:
                        end = i
                        break
            if end is None:
                raise line.error("unbalanced brackets", start)
            inner = line.text[start + 1:end]
            line.pos = end + 1
            raw = []
            if inner.strip():
                for piece, pcol in _split_top(inner, start + 1):
                    if not (piece.startswith("[") and piece.endswith("]")):
                        raise line.error("each relation must be a bracketed list", pcol)
                    raw.append(_split_top(piece[1:-1], pcol + 1))
            rank = len(raw[0]) if raw else None
            for r in raw:
                if len(r) != rank:
                    raise line.error("relations have different lengths", r[0][1])
            shifts = self.shifts(line, rank)
            rank = len(shifts)
            columns = []
            for r in raw:
                comps = [self.poly(line, p, c, "relation entry") if p != "0" else self.ring.zero()
                         for p, c in r]
                self.check_vector(line, comps, shifts, r[0][1])
                columns.append(tuple(str(c) for c in comps))
            decl = ModuleDecl(name, kind, shifts, columns=tuple(columns))
        elif kind == "free":
            decl = ModuleDecl(name, kind, self.shifts(line, None))
        else:
            raise line.error(f"unknown module kind {kind!r}", kcol)
        self.modules[name] = decl

    def check_vector(self, line, comps, shifts, col):
        degs = {c.degree() + s for c, s in zip(comps, shifts) if c}
        if len(degs) > 1:
            raise line.error(f"relation {[str(c) for c in comps]} is not homogeneous for shifts "
                             f"{list(shifts)}: component degrees plus shifts are {sorted(degs)}", col)

    def seq_line(self, line: _Line):
        self.need_ring(line)
        name, col = line.name("a sequence name")
        self.fresh(line, name, col)
        line.expect("=")
        text, start = line.rest()
        gens = []
        for piece, pcol in _split_top(text, start):
            f = self.poly(line, piece, pcol, f"element of {name}")
            if not f or f.degree() < 1:
                raise line.error(f"sequence elements need positive degree, got {piece!r}", pcol)
            gens.append(str(f))
        self.seqs[name] = SeqDecl(name, tuple(gens))

    def task_line(self, line: _Line):
        self.need_ring(line)
        kind, kcol = line.word("a task kind")
        if kind not in TASK_KINDS:
            raise line.error(f"unknown task kind {kind!r}; expected one of {', '.join(TASK_KINDS)}", kcol)
        mod, mcol = line.name("a module name")
        if mod not in self.modules:
            raise line.error(f"unknown module {mod!r}", mcol)
        seq, scol = line.name("a sequence name")
        if seq not in self.seqs:
            raise line.error(f"unknown sequence {seq!r}", scol)
        params, seen = [], set()
        while not line.done():
            key, col = line.word("a key")
            if key not in TASK_KEYS[kind]:
                raise line.error(f"unknown key {key!r} for task {kind}", col)
            if key in seen:
                raise line.error(f"key {key!r} given twice", col)
            seen.add(key)
            if line.done():
                raise line.error(f"key {key!r} needs a value")
            val, vcol = line.word("a value")
            params.append((key, self.value(line, kind, key, val, vcol)))
        lv = dict(params).get("levels", 8)
        mg = dict(params).get("margin", 2)
        if mg >= lv:
            raise line.error(f"margin {mg} must be smaller than levels {lv}", 0)
        self.tasks.append(TaskDecl(kind, mod, seq, tuple(params)))

    def value(self, line, kind, key, val, col):
        if key == "window":
            m = re.fullmatch(r"([+-]?\d+):([+-]?\d+)", val)
            if not m:
                raise line.error(f"window must look like lo:hi, got {val!r}", col)
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise line.error(f"empty window {val}", col)
            return (lo, hi)
        if key in ("levels", "margin", "seed", "trials", "imax"):
            v = _int(line, val, col, key)
            bounds = {"levels": (2, MAX_LEVELS), "margin": (1, MAX_LEVELS - 1), "seed": (0, 2 ** 63),
                      "trials": (1, MAX_TRIALS), "imax": (0, MAX_IMAX)}[key]
            if not bounds[0] <= v <= bounds[1]:
                raise line.error(f"{key} must lie in [{bounds[0]}, {bounds[1]}], got {v}", col)
            return v
        if key == "field":
            try:
                return _field_name(val)
            except ValueError as exc:
                raise line.error(str(exc), col) from None
        if key == "ideal":
            if val not in self.ideals:
                raise line.error(f"unknown ideal {val!r}", col)
            return val
        if key == "by":
            f = self.poly(line, val, col, "multiplier")
            if not f:
                raise line.error("multiplier must be nonzero", col)
            return str(f).replace(" ", "")
        if key == "resolution":
            if val not in ("koszul", "syzygy"):
                raise line.error(f"resolution must be koszul or syzygy, got {val!r}", col)
            return val
        raise line.error(f"unknown key {key!r}", col)  # pragma: no cover


def parse_session(text: str) -> SessionSpec:
    p = _Parser()
    handlers = {"ring": p.ring_line, "ideal": p.ideal_line, "module": p.module_line,
                "seq": p.seq_line, "task": p.task_line}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        line = _Line(body, lineno)
        if line.done():
            continue
        head, col = line.word()
        if head not in handlers:
            raise line.error(f"unknown declaration {head!r}", col)
        handlers[head](line)
    if p.ring_decl is None:
        raise SessionError(1, 1, "no ring declared")
    return SessionSpec(p.ring_decl, tuple(p.ideals.values()), tuple(p.modules.values()),
                       tuple(p.seqs.values()), tuple(p.tasks))


def _render_value(key, value) -> str:
    if key == "window":
        return f"{value[0]}:{value[1]}"
    return str(value)


def render_session(spec: SessionSpec) -> str:
    r = spec.ring
    lines = [f"ring {r.field}[{','.join(r.names)}] weights {' '.join(map(str, r.weights))}"]
    for i in spec.ideals:
        lines.append(f"ideal {i.name} = {', '.join(i.gens)}".rstrip())
    for m in spec.modules:
        shifts = " ".join(map(str, m.shifts))
        if m.kind == "quotient":
            lines.append(f"module {m.name} = quotient {m.ideal} shifts {shifts}")
        elif m.kind == "coker":
            cols = ", ".join("[" + ", ".join(c) + "]" for c in m.columns)
            lines.append(f"module {m.name} = coker [{cols}] shifts {shifts}")
        else:
            lines.append(f"module {m.name} = free shifts {shifts}")
    for s in spec.seqs:
        lines.append(f"seq {s.name} = {', '.join(s.gens)}")
    for t in spec.tasks:
        extra = "".join(f" {k} {_render_value(k, v)}" for k, v in t.params)
        lines.append(f"task {t.kind} {t.module} {t.seq}{extra}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# building algebra objects


@dataclass
class Workspace:
    """Rings, ideals, modules and sequences of a session over one field."""

    spec: SessionSpec
    field_name: str
    ring: PolyRing = field(init=False)
    ideals: dict = field(init=False, default_factory=dict)
    modules: dict = field(init=False, default_factory=dict)
    seqs: dict = field(init=False, default_factory=dict)

    def __post_init__(self):
        r = self.spec.ring
        self.ring = PolyRing(r.names, r.weights, field_from_string(self.field_name))
        R = self.ring
        for i in self.spec.ideals:
            self.ideals[i.name] = [R(g) for g in i.gens]
        for m in self.spec.modules:
            if m.kind == "quotient":
                self.modules[m.name] = GradedModule.cyclic(R, self.ideals[m.ideal], m.shifts[0])
            elif m.kind == "coker":
                rels = [FreeVector.from_components(R, [R(c) for c in col], m.shifts) for col in m.columns]
                self.modules[m.name] = GradedModule(R, m.shifts, rels, name=m.name)
            else:
                self.modules[m.name] = GradedModule.free(R, m.shifts)
        for s in self.spec.seqs:
            self.seqs[s.name] = [R(g) for g in s.gens]


def build_workspace(spec: SessionSpec, field_name: str | None = None) -> Workspace:
    return Workspace(spec, field_name or spec.ring.field)


def load_session(path) -> SessionSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_session(fh.read())

