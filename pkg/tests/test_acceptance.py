"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""

import glob
import itertools
import os
import subprocess
import sys
import time

import pytest

from dgsmooth import examples as ex
from dgsmooth.cdga import H0Ring, basis, differential, ground, inclusion, multiply, tensor_over
from dgsmooth.derived import diagonal_retraction, koszul
from dgsmooth.dgmod import Window, as_module, cohomology, ext_table, tor_table
from dgsmooth.verdicts import (
    _duality_test_modules,
    check_flat_dim0,
    default_test_modules,
    is_invertible,
    is_regular_sequence,
    rigid_module,
    verify_flathz,
    verify_lci,
    verify_smoothness_equivalence,
    verify_vdb,
)
from dgsmooth.dgmod import hom_complex

RESULTS = []
ROOT = os.path.join(os.path.dirname(__file__), "..")


def _report(num, title, ok, elapsed, limit, detail=""):
    passed = ok and elapsed < limit
    line = f"{'PASS' if passed else 'FAIL'} criterion {num}: {title} ({elapsed:.2f}s, limit {limit}s){' ' + detail if detail else ''}"
    RESULTS.append(line)
    print(line, flush=True)
    return passed


def _timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


# 1 ---------------------------------------------------------------------------


def _structural():
    k = ground()
    P1, K1, D2, AMP = ex.P1(), ex.K1(), ex.D2(), ex.AMP()
    _, BAMP, phi_amp = ex.B_AMP()
    algs = {"P1": P1, "K1": K1, "D2": D2, "AMP": AMP, "B-AMP": BAMP}
    diagonals = {}
    for name in ("P1", "K1", "D2"):
        diagonals[name + "⊗" + name] = (tensor_over(k, algs[name], algs[name])[0], algs[name], algs[name])
    diagonals["B-AMP⊗B-AMP"] = (diagonal_retraction(phi_amp).E, None, None)
    everything = dict(algs)
    everything.update({n: v[0] for n, v in diagonals.items()})
    problems = []
    cap = 5
    for name, A in everything.items():
        monos = [A.element({m: 1}) for w in range(cap + 1) for n in range(-3, 1) for m in basis(A, n, w)]
        for x in monos:
            if not differential(A, differential(A, x)).is_zero():
                problems.append(f"{name}: d^2 {x}")
        small = [x for x in monos if x.wt <= 3]
        for x, y in itertools.product(small, small):
            xy = multiply(A, x, y)
            if xy != multiply(A, y, x).scale((-1) ** (x.deg * y.deg)):
                problems.append(f"{name}: commutativity {x},{y}")
            lhs = differential(A, xy)
            rhs = multiply(A, differential(A, x), y) + multiply(A, x, differential(A, y)).scale((-1) ** x.deg)
            if lhs != rhs:
                problems.append(f"{name}: Leibniz {x},{y}")
    win = Window(-4, 0, 6)
    for name, (E, B, C) in diagonals.items():
        if B is None:
            # AMP<x1, x2>: cohomology of AMP convolved with a polynomial ring on two weight-1 variables
            hA = cohomology(ex.AMP(), win)
            rhs = {(n, w): sum(hA.dim(n, a) * (w - a + 1) for a in range(w + 1)) for n in win.degrees() for w in range(7)}
        else:
            hB = cohomology(B, Window(-8, 0, 6))
            rhs = {(n, w): sum(hB.dim(i, a) * hB.dim(n - i, w - a) for i in range(n - 0, 1) for a in range(w + 1))
                   for n in win.degrees() for w in range(7)}
            for n in win.degrees():
                for w in range(7):
                    bb = sum(len(basis(B, i, a)) * len(basis(B, n - i, w - a)) for i in range(n - 8, 1) for a in range(w + 1))
                    if bb != len(basis(E, n, w)):
                        problems.append(f"{name}: basis convolution at {(n, w)}")
        hE = cohomology(E, win)
        for key, v in rhs.items():
            if hE.dim(*key) != v:
                problems.append(f"{name}: Künneth at {key}: {hE.dim(*key)} vs {v}")
    return not problems, "; ".join(problems[:3])


def test_criterion_1_structural():
    ok, detail, dt = _timed(_structural)
    assert _report(1, "d^2 = 0, sign laws, Künneth convolution on examples and diagonals", ok, dt, 5, detail)


# 2 ---------------------------------------------------------------------------


def _battery():
    A, B, phi = ex.B_AMP()
    mods = default_test_modules(A)
    v = check_flat_dim0(phi, Window(-4, 0, 10), mods)
    bat = v.evidence["battery"]
    ok = len(bat) >= 3 and v.holds and all(not b["mismatches"] and b["amplitude_ok"] for b in bat)
    return ok, f"modules={[b['module'] for b in bat]}"


def test_criterion_2_base_change_battery():
    ok, detail, dt = _timed(_battery)
    assert _report(2, "base-change battery for AMP -> B-AMP", ok, dt, 30, detail)


# 3 ---------------------------------------------------------------------------


def _main_theorem():
    win = Window(-6, 0, 12)
    bad = []
    for label, phi in ex.smooth_maps():
        s = verify_smoothness_equivalence(phi, win, 8)
        l = verify_lci(phi, win)
        subs_ok = all(c["status"] == "holds-on-window" for c in l.evidence["checks"].values())
        h0 = s.evidence["h0_smooth"]["status"] == "holds-on-window"
        perf = s.evidence["perfect_diagonal"]["status"] == "holds-on-window"
        if not (s.holds and s.evidence["agreement"] and l.holds and subs_ok and h0 and perf):
            bad.append(label)
    k, D2 = ground(), ex.D2()
    phi = inclusion(k, D2)
    s = verify_smoothness_equivalence(phi, win, 8)
    l = verify_lci(phi, win)
    pd = s.evidence["perfect_diagonal"]
    nonterm = pd["status"] == "fails-with-witness" and pd["evidence"]["witness"].get("not_perfect_within_stages") == 8
    h0_fail = s.evidence["h0_smooth"]["status"] == "fails-with-witness"
    lci_fail = l.evidence["checks"]["koszul_quasi_iso"]["status"] == "fails-with-witness"
    if not (nonterm and h0_fail and lci_fail and s.evidence["agreement"] is True):
        bad.append("k->D2")
    return not bad, f"disagreeing: {bad}" if bad else f"D2 betti {pd['evidence']['betti']}"


def test_criterion_3_main_theorem_agreement():
    ok, detail, dt = _timed(_main_theorem)
    assert _report(3, "smooth_equiv and lci agree on four maps", ok, dt, 120, detail)


# 4 ---------------------------------------------------------------------------


def _regular():
    win = Window(-4, 0, 10)
    P2 = ex.P2()
    E = diagonal_retraction(ex.B_AMP()[2]).E
    D2 = ex.D2()
    out = []
    for R, seq, want in [
        (P2, [P2.parse("x - y")], True),
        (E, [E.parse("x1 - x2")], True),
        (H0Ring(D2), [D2.gen("x")], False),
    ]:
        v = is_regular_sequence(R, seq, win)
        inj, hil = v.evidence["injectivity"]["passes"], v.evidence["hilbert"]["passes"]
        out.append(inj == want and hil == want)
    return all(out), str(out)


def test_criterion_4_regular_sequences():
    ok, detail, dt = _timed(_regular)
    assert _report(4, "regular-sequence certificates by two routes", ok, dt, 30, detail)


# 5 ---------------------------------------------------------------------------


def _duality():
    win = Window(-6, 2, 10)
    expected = {"k->k[x]": 1, "k->k[x,y]": 2, "AMP->B-AMP": 1}
    notes = []
    ok = True
    for label, phi in ex.smooth_maps():
        cert = verify_lci(phi, win).certificate
        D, P, n = cert.diagonal, cert.P, cert.n
        inv = is_invertible(hom_complex(P, as_module(D.E)), D.phi.target, win, g=D.iota1)
        tw = inv.evidence["generator_weight"]
        ok &= inv.holds and n == expected[label] and abs(tw) == expected[label] and inv.evidence["shift"] == n
        tor_win = Window(win.deg_lo - n, win.deg_hi - n, win.wt_cap - tw)
        for mod, X, g in _duality_test_modules(D):
            ext = ext_table(P, X, win, g)
            tor = tor_table(P, X, tor_win, g, wt_lo=0)
            for i in win.degrees():
                for w in ext.weights():
                    if ext.dim(i, w) != tor.dim(i - n, w - tw):
                        ok = False
                        notes.append(f"{label}/{mod} at {(i, w)}")
        notes.append(f"{label}: n={n} twist={tw}")
    return ok, "; ".join(notes[:6])


def test_criterion_5_duality():
    ok, detail, dt = _timed(_duality)
    assert _report(5, "Ext^i_w = Tor_{n-i, w-twist} for E, B, B[1]", ok, dt, 120, detail)


# 6 ---------------------------------------------------------------------------


def _rigid():
    res = []
    for label, phi in ex.smooth_maps():
        _, v = rigid_module(phi, Window(-6, 2, 10))
        res.append(v.holds)
    return all(res), str(res)


def test_criterion_6_rigidity():
    ok, detail, dt = _timed(_rigid)
    assert _report(6, "RHom_E(B, N⊗N) has the cohomology of N", ok, dt, 60, detail)


# 7 ---------------------------------------------------------------------------


def _flathz():
    win = Window(-6, 0, 10)
    K1 = verify_flathz(ex.K1(), win)
    AMP = verify_flathz(ex.AMP(), win)
    smooth = lambda v: v.evidence["smooth"]["status"] == "holds-on-window"
    ok = smooth(K1) and K1.evidence["quasi_iso_to_h0"]
    ok &= not smooth(AMP) and not AMP.evidence["quasi_iso_to_h0"]
    ok &= AMP.evidence.get("summary") == "not homologically smooth within budget"
    forbidden = []
    for name, A in [("K1", ex.K1()), ("AMP", ex.AMP()), ("P1", ex.P1()), ("P2", ex.P2()), ("D2", ex.D2()),
                    ("B-AMP", ex.B_AMP()[1])]:
        v = verify_flathz(A, win)
        if v.fails or (smooth(v) and v.evidence["amplitude"]["amp"]):
            forbidden.append(name)
    return ok and not forbidden, f"forbidden quadrant: {forbidden}"


def test_criterion_7_flathz():
    ok, detail, dt = _timed(_flathz)
    assert _report(7, "smooth over a field forces A ≃ H^0(A)", ok, dt, 60, detail)


# 8 ---------------------------------------------------------------------------


def _lifts():
    A = ex.AMP()
    win = Window(-3, 0, 8)
    u2 = A.parse("u^2")
    lifts = [u2, u2 + A.gen("e1").d(), u2 + A.gen("e1").d().scale(-3), A.zero((0, 2))]
    tables = [cohomology(koszul(A, [a], normalize=False)[0], win) for a in lifts]
    tables.append(cohomology(koszul(A, [u2])[0], win))
    return all(t.same_dims(tables[0]) for t in tables), f"{len(tables)} lifts"


def test_criterion_8_lift_independence():
    ok, detail, dt = _timed(_lifts)
    assert _report(8, "Koszul tables independent of the lift of u^2", ok, dt, 30, detail)


# 9 ---------------------------------------------------------------------------


def _determinism():
    files = sorted(glob.glob(os.path.join(ROOT, "scenarios", "*.scn")))
    outs = []
    for _ in range(2):
        run = []
        for f in files:
            p = subprocess.run([sys.executable, "-m", "dgsmooth.cli", "run", f, "--format", "structured"],
                               capture_output=True)
            run.append(p.stdout)
        outs.append(run)
    same = all(a == b and a for a, b in zip(*outs))
    return same and len(files) >= 5, f"{len(files)} scenarios"


def test_criterion_9_determinism():
    ok, detail, dt = _timed(_determinism)
    assert _report(9, "structured reports byte-identical across runs", ok, dt, 600, detail)
