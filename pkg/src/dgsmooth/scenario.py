"""Line-oriented scenario files: parsing, canonical printing, building.

    field Q                              | field Fp 5
    algebra A { gen x deg 0 wt 1 }
    algebra B = extend A { gen y deg 0 wt 1 ; gen e deg -1 wt 2 d = x*y }
    map phi : A -> B { x -> x }          (an empty body is the inclusion)
    window deg -4..0 wt 8
    task lci phi seq=[x1-x2] max_stages=8

Block bodies may span several lines; ``;`` also separates statements.
``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple, Union

from .cdga import AlgebraMap, DGAlgebra, PresentationError, extend, ground, inclusion, new_algebra
from .dgmod import Window
from .exactla import Field
from .expr import ExprError, parse_expr

VERBS = (
    "cohomology", "amplitude", "quasi_iso", "flat_check", "regular_seq", "perfect",
    "invertible", "smooth_equiv", "lci", "vdb", "rigid", "flathz",
)


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)
        self.line, self.col = line, col


@dataclass(frozen=True)
class GenDecl:
    name: str
    deg: int
    wt: int
    diff: Optional[str] = None


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    base: Optional[str]
    gens: Tuple[GenDecl, ...]
    line: int = dc_field(default=0, compare=False)


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: Tuple[Tuple[str, str], ...]
    line: int = dc_field(default=0, compare=False)


Param = Union[str, Tuple[str, ...]]


@dataclass(frozen=True)
class TaskDecl:
    verb: str
    target: str
    params: Tuple[Tuple[str, Param], ...] = ()
    line: int = dc_field(default=0, compare=False)

    def param(self, key: str, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class Scenario:
    field: Tuple[str, Optional[int]]
    decls: Tuple[Union[AlgebraDecl, MapDecl], ...]
    window: Optional[Tuple[int, int, int]]
    tasks: Tuple[TaskDecl, ...]


# ---------------------------------------------------------------------------
# parsing

_NAME = r"[A-Za-z_][A-Za-z_0-9'\-]*"
_ALG = re.compile(rf"^algebra\s+({_NAME})\s*(?:=\s*extend\s+({_NAME})\s*)?\{{(.*)$")
_MAP = re.compile(rf"^map\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})\s*\{{(.*)$")
_GEN = re.compile(rf"^gen\s+([A-Za-z_][A-Za-z_0-9']*)\s+deg\s+(-?\d+)\s+wt\s+(-?\d+)\s*(?:d\s*=\s*(.+))?$")
_IMG = re.compile(r"^([A-Za-z_][A-Za-z_0-9']*)\s*->\s*(.+)$")
_WIN = re.compile(r"^window\s+deg\s+(-?\d+)\s*\.\.\s*(-?\d+)\s+wt\s+(\d+)$")
_FIELD = re.compile(r"^field\s+(?:(Q)|Fp\s+(\d+))$")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def _check_expr(text: str, line: int, col: int) -> str:
    try:
        parse_expr(text)
    except ExprError as e:
        raise ScenarioError(f"bad expression {text!r}: {e.message}", line, col + e.pos) from None
    return " ".join(text.split())


def _split_top(text: str, seps: str) -> List[Tuple[str, int]]:
    """Split at separators outside brackets, keeping start offsets."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch in seps and depth == 0:
            out.append((text[start:i], start))
            start = i + 1
    out.append((text[start:], start))
    return [(s, o) for s, o in out if s.strip()]


def _body_statements(body: List[Tuple[str, int, int]], gen_split: bool):
    out = []
    for text, line, col in body:
        for part, off in _split_top(text, ";"):
            pieces = [part]
            if gen_split:
                idx = [m.start() for m in re.finditer(r"(?:^|\s)gen\s", part)]
                if len(idx) > 1:
                    pieces = [part[a:b] for a, b in zip(idx, idx[1:] + [len(part)])]
            sub = 0
            for p in pieces:
                lead = len(p) - len(p.lstrip())
                out.append((p.strip(), line, col + off + sub + lead))
                sub += len(p)
    return out


def parse_scenario(text: str) -> Scenario:
    raw = text.splitlines()
    field = None
    window = None
    decls: List = []
    tasks: List[TaskDecl] = []
    i = 0
    while i < len(raw):
        lineno = i + 1
        line = raw[i].split("#", 1)[0].rstrip()
        i += 1
        stripped = line.strip()
        if not stripped:
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        head = stripped.split()[0]
        if head == "field":
            m = _FIELD.match(stripped)
            if not m:
                raise ScenarioError("expected 'field Q' or 'field Fp <prime>'", lineno, col0)
            if field is not None:
                raise ScenarioError("field declared twice", lineno, col0)
            if m.group(1):
                field = ("Q", None)
            else:
                p = int(m.group(2))
                if not _is_prime(p):
                    raise ScenarioError(f"{p} is not prime", lineno, col0 + stripped.index(m.group(2)))
                field = ("Fp", p)
        elif head == "window":
            m = _WIN.match(stripped)
            if not m:
                raise ScenarioError("expected 'window deg <lo>..<hi> wt <cap>'", lineno, col0)
            lo, hi, cap = int(m.group(1)), int(m.group(2)), int(m.group(3))
            if lo > hi:
                raise ScenarioError(f"empty degree range {lo}..{hi}", lineno, col0)
            window = (lo, hi, cap)
        elif head in ("algebra", "map"):
            rx = _ALG if head == "algebra" else _MAP
            m = rx.match(stripped)
            if not m:
                raise ScenarioError(f"malformed {head} declaration", lineno, col0)
            rest = m.group(m.lastindex)
            rest_col = col0 + stripped.index("{") + 1
            body: List[Tuple[str, int, int]] = []
            closed = False
            cur, cur_line, cur_col = rest, lineno, rest_col
            while True:
                if "}" in cur:
                    pos = cur.index("}")
                    if cur[pos + 1:].strip():
                        raise ScenarioError("text after closing brace", cur_line, cur_col + pos + 1)
                    body.append((cur[:pos], cur_line, cur_col))
                    closed = True
                    break
                body.append((cur, cur_line, cur_col))
                if i >= len(raw):
                    break
                cur = raw[i].split("#", 1)[0]
                cur_line, cur_col = i + 1, 1
                i += 1
            if not closed:
                raise ScenarioError(f"unterminated {head} block", lineno, col0)
            stmts = _body_statements(body, head == "algebra")
            if head == "algebra":
                gens = []
                for s, ln, c in stmts:
                    g = _GEN.match(s)
                    if not g:
                        raise ScenarioError(f"expected 'gen <name> deg <d> wt <w> [d = <expr>]', got {s!r}", ln, c)
                    deg, wt = int(g.group(2)), int(g.group(3))
                    if deg > 0:
                        raise ScenarioError(f"generator {g.group(1)} has positive degree {deg}", ln, c)
                    if wt < 1:
                        raise ScenarioError(f"generator {g.group(1)} has weight {wt} < 1", ln, c)
                    diff = _check_expr(g.group(4), ln, c + s.index(g.group(4))) if g.group(4) else None
                    gens.append(GenDecl(g.group(1), deg, wt, diff))
                decls.append(AlgebraDecl(m.group(1), m.group(2), tuple(gens), line=lineno))
            else:
                imgs = []
                for s, ln, c in stmts:
                    for part, off in _split_top(s, ","):
                        g = _IMG.match(part.strip())
                        if not g:
                            raise ScenarioError(f"expected '<gen> -> <expr>', got {part.strip()!r}", ln, c + off)
                        imgs.append((g.group(1), _check_expr(g.group(2), ln, c + off)))
                decls.append(MapDecl(m.group(1), m.group(2), m.group(3), tuple(imgs), line=lineno))
        elif head == "task":
            parts = _split_top(stripped, " \t")
            if len(parts) < 3:
                raise ScenarioError("expected 'task <verb> <name> [key=value ...]'", lineno, col0)
            verb, target = parts[1][0], parts[2][0]
            if verb not in VERBS:
                raise ScenarioError(f"unknown task verb {verb!r}", lineno, col0 + parts[1][1])
            params = []
            for p, off in parts[3:]:
                if "=" not in p:
                    raise ScenarioError(f"expected key=value, got {p!r}", lineno, col0 + off)
                k, v = p.split("=", 1)
                if v.startswith("["):
                    if not v.endswith("]"):
                        raise ScenarioError("unterminated list", lineno, col0 + off)
                    items = tuple(" ".join(s.split()) for s, _ in _split_top(v[1:-1], ","))
                    params.append((k, items))
                else:
                    params.append((k, v))
            tasks.append(TaskDecl(verb, target, tuple(params), line=lineno))
        else:
            raise ScenarioError(f"unknown statement {head!r}", lineno, col0)
    if field is None:
        field = ("Q", None)
    sc = Scenario(field, tuple(decls), window, tuple(tasks))
    check_names(sc)
    return sc


def check_names(sc: Scenario) -> None:
    """Declaration-before-use and uniqueness of names."""
    algebras = {"k"}
    maps = set()
    for d in sc.decls:
        if d.name in algebras or d.name in maps:
            raise ScenarioError(f"name {d.name!r} declared twice", d.line, 1)
        if isinstance(d, AlgebraDecl):
            if d.base is not None and d.base not in algebras:
                raise ScenarioError(f"unknown base algebra {d.base!r}", d.line, 1)
            algebras.add(d.name)
        else:
            for nm in (d.source, d.target):
                if nm not in algebras:
                    raise ScenarioError(f"unknown algebra {nm!r}", d.line, 1)
            maps.add(d.name)
    for t in sc.tasks:
        if t.target not in algebras and t.target not in maps:
            raise ScenarioError(f"unknown name {t.target!r}", t.line, 1)


# ---------------------------------------------------------------------------
# printing


def _print_param(v: Param) -> str:
    return "[" + ", ".join(v) + "]" if isinstance(v, tuple) else v


def print_scenario(sc: Scenario) -> str:
    lines = ["field Q" if sc.field[0] == "Q" else f"field Fp {sc.field[1]}"]
    for d in sc.decls:
        if isinstance(d, AlgebraDecl):
            head = f"algebra {d.name}" + (f" = extend {d.base}" if d.base else "") + " {"
            lines.append(head)
            for g in d.gens:
                lines.append(f"  gen {g.name} deg {g.deg} wt {g.wt}" + (f" d = {g.diff}" if g.diff else ""))
            lines.append("}")
        else:
            lines.append(f"map {d.name} : {d.source} -> {d.target} {{")
            lines.extend(f"  {g} -> {e}" for g, e in d.images)
            lines.append("}")
    if sc.window is not None:
        lo, hi, cap = sc.window
        lines.append(f"window deg {lo}..{hi} wt {cap}")
    for t in sc.tasks:
        lines.append(" ".join(["task", t.verb, t.target] + [f"{k}={_print_param(v)}" for k, v in t.params]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# building


@dataclass
class Environment:
    field: Field
    algebras: Dict[str, DGAlgebra]
    maps: Dict[str, AlgebraMap]


def make_field(spec: Tuple[str, Optional[int]]) -> Field:
    return Field(None) if spec[0] == "Q" else Field(spec[1])


def build(sc: Scenario, field: Optional[Field] = None) -> Environment:
    fld = field or make_field(sc.field)
    algs: Dict[str, DGAlgebra] = {"k": ground(fld)}
    maps: Dict[str, AlgebraMap] = {}
    for d in sc.decls:
        try:
            if isinstance(d, AlgebraDecl):
                specs = [(g.name, g.deg, g.wt) for g in d.gens]
                diffs = {g.name: g.diff for g in d.gens if g.diff}
                if d.base is None:
                    algs[d.name] = new_algebra(specs, diffs, fld, name=d.name)
                else:
                    algs[d.name] = extend(algs[d.base], specs, diffs, name=d.name)[0]
            else:
                A, B = algs[d.source], algs[d.target]
                if not d.images:
                    maps[d.name] = inclusion(A, B)
                else:
                    given = dict(d.images)
                    unknown = [g for g in given if g not in A.index]
                    if unknown:
                        raise PresentationError(f"{d.source} has no generator {unknown[0]!r}")
                    f = AlgebraMap(A, B, {g.name: given.get(g.name) for g in A.gens}, name=d.name)
                    bad = f.violations()
                    if bad:
                        raise PresentationError("not a chain map: " + "; ".join(bad))
                    maps[d.name] = f
        except (PresentationError, ExprError, KeyError) as e:
            raise ScenarioError(f"{d.name}: {e}", d.line, 1) from None
    return Environment(fld, algs, maps)


def window_of(sc: Scenario, override: Optional[Window] = None) -> Window:
    if override is not None:
        return override
    if sc.window is None:
        return Window(-4, 0, 8)
    return Window(*sc.window)
