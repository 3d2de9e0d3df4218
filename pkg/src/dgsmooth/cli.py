"""Command-line driver: ``dgsmooth run <scenario> [options]``."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from typing import List, Optional

from . import __version__
from .cdga import AlgebraMap, DGAlgebra, H0Ring, PresentationError, augmentation, ground
from .derived import diagonal_retraction, flat_witness
from .dgmod import Window, as_module, cohomology, direct_sum
from .exactla import Field
from .expr import ExprError
from .scenario import Environment, Scenario, ScenarioError, TaskDecl, build, parse_scenario, window_of
from .verdicts import (
    Status,
    Verdict,
    amplitude,
    check_flat_dim0,
    diagonal_perfect,
    is_invertible,
    is_perfect,
    is_quasi_iso,
    is_regular_sequence,
    rigid_module,
    table_dict,
    verify_flathz,
    verify_lci,
    verify_smoothness_equivalence,
    verify_vdb,
    window_dict,
)

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class TaskError(ValueError):
    pass


def _algebra(env: Environment, name: str) -> DGAlgebra:
    if name not in env.algebras:
        raise TaskError(f"{name!r} is not an algebra")
    return env.algebras[name]


def _map(env: Environment, name: str) -> AlgebraMap:
    if name not in env.maps:
        raise TaskError(f"{name!r} is not a map")
    return env.maps[name]


def _int_param(t: TaskDecl, key: str, default: int) -> int:
    v = t.param(key)
    if v is None:
        return default
    try:
        return int(v)
    except (TypeError, ValueError):
        raise TaskError(f"{key} must be an integer") from None


def _seq(t: TaskDecl, A: DGAlgebra):
    v = t.param("seq")
    if v is None:
        return None
    if isinstance(v, str):
        v = (v,)
    return [A.parse(s) for s in v]


def _computed(payload: dict) -> dict:
    return {"status": "computed", **payload}


def run_task(env: Environment, t: TaskDecl, window: Window, max_stages: int) -> dict:
    stages = _int_param(t, "max_stages", max_stages)
    verb = t.verb
    if verb == "cohomology":
        A = _algebra(env, t.target)
        tab = cohomology(A, window)
        return _computed({"grid": tab.grid(), "table": table_dict(tab)})
    if verb == "amplitude":
        a = amplitude(_algebra(env, t.target), window)
        return _computed({"amplitude": a.to_dict()})
    if verb == "quasi_iso":
        return is_quasi_iso(_map(env, t.target), window).to_dict()
    if verb == "flat_check":
        return check_flat_dim0(flat_witness(_map(env, t.target)), window).to_dict()
    if verb == "regular_seq":
        A = _algebra(env, t.target)
        seq = _seq(t, A) or []
        R = H0Ring(A) if t.param("over", "dg") == "h0" else A
        return is_regular_sequence(R, seq, window).to_dict()
    if verb == "perfect":
        if t.target in env.maps:
            return diagonal_perfect(_map(env, t.target), window, stages).to_dict()
        A = _algebra(env, t.target)
        R = H0Ring(A) if t.param("over", "dg") == "h0" else A
        if t.param("module", "A") == "k":
            return is_perfect(as_module(ground(A.field)), R, window, stages, g=augmentation(R)).to_dict()
        return is_perfect(as_module(R), R, window, stages).to_dict()
    if verb == "invertible":
        A = _algebra(env, t.target)
        which = t.param("module", "A")
        M = {"A": as_module(A), "A+A": direct_sum(as_module(A), as_module(A))}.get(which)
        if M is None:
            raise TaskError(f"unknown module {which!r}; use A or A+A")
        return is_invertible(M, A, window).to_dict()
    if verb == "smooth_equiv":
        return verify_smoothness_equivalence(_map(env, t.target), window, stages).to_dict()
    if verb == "lci":
        phi = _map(env, t.target)
        seq = None
        if t.param("seq") is not None:
            E = diagonal_retraction(phi).E
            seq = _seq(t, E)
        v = verify_lci(phi, window, seq)
        return v.to_dict()
    if verb == "vdb":
        mods = t.param("modules")
        if isinstance(mods, str):
            mods = (mods,)
        return verify_vdb(_map(env, t.target), window, mods).to_dict()
    if verb == "rigid":
        _, v = rigid_module(_map(env, t.target), window)
        return v.to_dict()
    if verb == "flathz":
        return verify_flathz(_algebra(env, t.target), window, stages).to_dict()
    raise TaskError(f"unknown verb {verb!r}")


def run(
    sc: Scenario,
    window: Optional[Window] = None,
    field: Optional[Field] = None,
    max_stages: int = 8,
    timings: bool = False,
) -> dict:
    env = build(sc, field)
    win = window_of(sc, window)
    tasks = []
    for i, t in enumerate(sc.tasks):
        start = time.perf_counter()
        try:
            res = run_task(env, t, win, max_stages)
        except (TaskError, PresentationError, ExprError, ValueError) as e:
            res = {"status": "error", "error": str(e)}
        entry = {"index": i + 1, "verb": t.verb, "target": t.target, **res}
        if timings:
            entry["wall_time_s"] = round(time.perf_counter() - start, 3)
        tasks.append(entry)
    return {
        "version": __version__,
        "field": "Q" if env.field.p is None else f"Fp {env.field.p}",
        "window": window_dict(win),
        "tasks": tasks,
        "exit_code": exit_code(tasks),
    }


def exit_code(tasks: List[dict]) -> int:
    sts = [t["status"] for t in tasks]
    if "error" in sts:
        return EXIT_INPUT
    if Status.FAILS.value in sts:
        return EXIT_FAIL
    if Status.INCONCLUSIVE.value in sts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def format_structured(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _grid_lines(grid: dict) -> List[str]:
    ws = grid["weights"]
    width = max(3, max(len(str(w)) for w in ws) + 1)
    head = "      wt " + "".join(f"{w:>{width}}" for w in ws)
    rows = [head]
    for n, row in zip(grid["degrees"], grid["dims"]):
        rows.append(f"  H^{n:<4}  " + "".join(f"{d:>{width}}" for d in row))
    return rows


def _summary(task: dict) -> List[str]:
    ev = task.get("evidence", {})
    out = []
    for key in ("agreement", "n", "twist", "generator", "matched", "route", "betti", "sequence",
                "quasi_iso_to_h0", "summary", "construction"):
        if key in ev:
            out.append(f"  {key}: {ev[key]}")
    if "checks" in ev:
        for k, v in ev["checks"].items():
            out.append(f"  {k}: {v['status']}")
    for key in ("perfect_diagonal", "h0_smooth", "smooth"):
        if key in ev:
            out.append(f"  {key}: {ev[key]['status']}")
    if "witness" in ev:
        out.append(f"  witness: {json.dumps(ev['witness'], sort_keys=True, ensure_ascii=False)}")
    for c in task.get("caveats", []):
        out.append(f"  caveat: {c}")
    return out


def format_text(report: dict) -> str:
    w = report["window"]
    lines = [f"field {report['field']}  window deg {w['deg'][0]}..{w['deg'][1]} wt {w['wt_cap']}"]
    for t in report["tasks"]:
        lines.append(f"[{t['index']}] {t['verb']} {t['target']}: {t['status']}")
        if t["status"] == "error":
            lines.append(f"  error: {t['error']}")
        if "grid" in t:
            lines.extend(_grid_lines(t["grid"]))
        if "amplitude" in t:
            a = t["amplitude"]
            lines.append(f"  inf {a['inf']}  sup {a['sup']}  amp {a['amp']}" + ("  (touches window edge)" if a["boundary"] else ""))
        lines.extend(_summary(t))
        if "wall_time_s" in t:
            lines.append(f"  time: {t['wall_time_s']} s")
    lines.append(f"exit {report['exit_code']}")
    return "\n".join(lines) + "\n"


_WIN_ARG = re.compile(r"^deg:(-?\d+)\.\.(-?\d+),wt:(\d+)$")


def parse_window_arg(s: str) -> Window:
    m = _WIN_ARG.match(s.replace(" ", ""))
    if not m:
        raise argparse.ArgumentTypeError("expected deg:LO..HI,wt:CAP")
    lo, hi, cap = map(int, m.groups())
    if lo > hi:
        raise argparse.ArgumentTypeError("empty degree range")
    return Window(lo, hi, cap)


def parse_field_arg(s: str) -> Field:
    s = s.lower()
    if s == "q":
        return Field(None)
    m = re.match(r"^fp:(\d+)$", s)
    if not m:
        raise argparse.ArgumentTypeError("expected q or fp:P")
    try:
        return Field(int(m.group(1)))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def main(argv: Optional[List[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="dgsmooth", description="Verify smoothness, complete-intersection and duality statements for DG-algebra maps.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("scenario")
    r.add_argument("--format", choices=("text", "structured"), default="text")
    r.add_argument("--window", type=parse_window_arg)
    r.add_argument("--field", type=parse_field_arg)
    r.add_argument("--max-stages", type=int, default=8)
    r.add_argument("--out")
    r.add_argument("--timings", action="store_true", help="include wall time per task")
    p = sub.add_parser("print", help="print a scenario in canonical form")
    p.add_argument("scenario")
    args = ap.parse_args(argv)
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            sc = parse_scenario(fh.read())
        if args.cmd == "print":
            from .scenario import print_scenario

            sys.stdout.write(print_scenario(sc))
            return EXIT_OK
        build(sc, args.field)
    except (OSError, ScenarioError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    report = run(sc, args.window, args.field, args.max_stages, args.timings)
    text = format_structured(report) if args.format == "structured" else format_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report["exit_code"]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
