"""Theorem-level checks returning three-valued verdicts with evidence."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .cdga import (
    AlgebraMap,
    DGAlgebra,
    Element,
    GradedRing,
    H0Ring,
    PresentationError,
    RingMap,
    h0_map,
    identity_map,
    inclusion,
    ground,
)
from .derived import (
    Diagonal,
    FlatMapWitness,
    default_diagonal_sequence,
    diagonal_retraction,
    flat_witness,
    in_kernel_h0,
    koszul,
    reduced_module,
)
from .dgmod import (
    AlgebraChainMap,
    ChainMap,
    CohomologyTable,
    Complex,
    ModuleMap,
    SemiFreeModule,
    Symbol,
    Window,
    as_complex,
    as_module,
    cohomology,
    cone,
    ext_table,
    hom_complex,
    koszul_module,
    semifree_resolution,
    shift,
    tensor_module,
    tensor_modules,
    tor_table,
)
from .exactla import Echelon


class Status(str, Enum):
    HOLDS = "holds-on-window"
    FAILS = "fails-with-witness"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    status: Status
    window: Window
    evidence: dict = dc_field(default_factory=dict)
    caveats: List[str] = dc_field(default_factory=list)
    certificate: object = dc_field(default=None, repr=False, compare=False)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "window": window_dict(self.window),
            "evidence": self.evidence,
            "caveats": list(self.caveats),
        }


def window_dict(w: Window) -> dict:
    return {"deg": [w.deg_lo, w.deg_hi], "wt_cap": w.wt_cap}


def table_dict(t: CohomologyTable) -> dict:
    return {"wt_lo": t.wt_lo, "nonzero": [[n, w, d] for (n, w), d in t.nonzero().items()]}


def _combine(parts: Sequence[Verdict]) -> Status:
    if any(p.fails for p in parts):
        return Status.FAILS
    if all(p.holds for p in parts):
        return Status.HOLDS
    return Status.INCONCLUSIVE


# ---------------------------------------------------------------------------
# amplitude and quasi-isomorphisms


@dataclass
class Amplitude:
    inf: Optional[int]
    sup: Optional[int]
    amp: Optional[int]
    boundary: bool

    def to_dict(self):
        return {"inf": self.inf, "sup": self.sup, "amp": self.amp, "boundary": self.boundary}


def amplitude(M, window: Window, table: Optional[CohomologyTable] = None) -> Amplitude:
    """inf/sup of nonzero cohomology rows; ``boundary`` flags rows at a window
    edge beyond which the complex still has chains."""
    C = as_complex(M)
    t = table or cohomology(C, window)
    rows = t.rows_nonzero()
    if not rows:
        return Amplitude(None, None, None, False)
    lo, hi = rows[0], rows[-1]
    clo, chi = C.nonzero_degrees(window.wt_cap)
    boundary = (lo == window.deg_lo and clo < window.deg_lo) or (hi == window.deg_hi and chi > window.deg_hi)
    return Amplitude(lo, hi, hi - lo, boundary)


def _as_chain_map(f) -> ChainMap:
    if isinstance(f, ChainMap):
        return f
    if isinstance(f, RingMap):
        return AlgebraChainMap(f)
    raise TypeError(f"cannot view {type(f).__name__} as a chain map")


def is_quasi_iso(f, window: Window) -> Verdict:
    """Cone acyclicity on degrees ``deg_lo - 1 .. deg_hi``, which is exactly
    what an isomorphism on H^n for every n in the window needs."""
    f = _as_chain_map(f)
    C = cone(f)
    wide = Window(window.deg_lo - 1, window.deg_hi, window.wt_cap)
    t = cohomology(C, wide)
    nz = t.nonzero()
    ev = {"cone": table_dict(t)}
    if nz:
        (n, w), d = next(iter(nz.items()))
        ev["witness"] = {"degree": n, "weight": w, "dim": d}
        return Verdict(Status.FAILS, window, ev)
    return Verdict(Status.HOLDS, window, ev)


# ---------------------------------------------------------------------------
# cohomology as an H^0-module


def _degree0_generators(A: GradedRing) -> List[Element]:
    if isinstance(A, DGAlgebra):
        return [A.gen(g.name) for g in A.gens if g.deg == 0]
    return list(A.ideal_generators())


def _action_matrix(M: Complex, terms, n: int, w: int, dw: int) -> Tuple[int, int, int]:
    """(rank, dim source, dim target) of multiplication H^n_w → H^n_{w+dw}."""
    src = M.homology(n, w)
    dst = M.homology(n, w + dw)
    ech = Echelon(M.field)
    for z in src.rep_vectors():
        img = M.act_vec(terms, z)
        ech.add(dst.coords(M.to_vector(n, w + dw, img)))
    return ech.rank, len(src), len(dst)


def base_change_dims(
    phi: AlgebraMap, M: SemiFreeModule, window: Window, RA: H0Ring, RB: H0Ring
) -> Dict[Tuple[int, int], int]:
    """Dims of ``H^0(B) ⊗_{H^0(A)} H^n(M)`` per stratum, by a presentation of
    the tensor product over the degree-0 generators of ``A``."""
    A = phi.source
    gens = [(g, RB.nf_terms(phi.apply_terms(g.terms))) for g in _degree0_generators(A)]
    wlo = min(M.min_weight(), 0)
    out = {}
    for n in window.degrees():
        for w in range(wlo, window.wt_cap + 1):
            # pairs (w1, index in H0(B)_{w1}) x (w2, rep index)
            cells = []
            for w2 in range(wlo, w + 1):
                hN = len(M.homology(n, w2))
                bB = RB.basis(0, w - w2)
                cells.extend((w - w2, b, w2, h) for b in bB for h in range(hN))
            if not cells:
                out[(n, w)] = 0
                continue
            pos = {c: i for i, c in enumerate(cells)}
            ech = Echelon(M.field)
            for g, gB in gens:
                for w2 in range(wlo, w - g.wt + 1):
                    H = M.homology(n, w2)
                    if not len(H):
                        continue
                    Ht = M.homology(n, w2 + g.wt)
                    w1 = w - w2 - g.wt
                    for b in RB.basis(0, w1):
                        bg = RB.mul_terms({b: 1}, gB)
                        for h, z in enumerate(H.rep_vectors()):
                            rel: Dict[int, object] = {}
                            for t, c in bg.items():
                                key = pos[(w1 + g.wt, t, w2, h)]
                                rel[key] = rel.get(key, 0) + c
                            gz = M.act_vec(g.terms, z)
                            for h2, c in Ht.coords(M.to_vector(n, w2 + g.wt, gz)).items():
                                key = pos[(w1, b, w2 + g.wt, h2)]
                                rel[key] = rel.get(key, 0) - c
                            ech.add({k: v for k, v in rel.items() if v})
            out[(n, w)] = len(cells) - ech.rank
    return out


def default_test_modules(A: DGAlgebra) -> List[Tuple[str, SemiFreeModule]]:
    mods = [("A", as_module(A))]
    for g in _degree0_generators(A):
        mods.append((f"K(A;{g})", koszul_module(A, [g], name=f"K(A;{g})")))
    mods.append(("A[1]", shift(as_module(A), 1)))
    return mods


def flat_battery(
    phi: AlgebraMap, modules: Sequence[Tuple[str, SemiFreeModule]], window: Window
) -> List[dict]:
    """Per test module: both sides of the base-change formula and the amplitude test."""
    A, B = phi.source, phi.target
    RA, RB = H0Ring(A), H0Ring(B)
    out = []
    for label, M in modules:
        lhs = cohomology(tensor_module(M, phi), window, wt_lo=min(M.min_weight(), 0))
        rhs = base_change_dims(phi, M, window, RA, RB)
        mism = [[n, w, lhs.dim(n, w), d] for (n, w), d in sorted(rhs.items()) if lhs.dim(n, w) != d]
        aM = amplitude(M, window)
        aB = amplitude(tensor_module(M, phi), window, lhs)
        amp_ok = aB.amp is None or (aM.amp is not None and aB.amp <= aM.amp)
        out.append({
            "module": label,
            "lhs": table_dict(lhs),
            "mismatches": mism,
            "amp_source": aM.amp,
            "amp_base_change": aB.amp,
            "amplitude_ok": amp_ok,
        })
    return out


def h0_free_probe(phi: AlgebraMap, window: Window) -> dict:
    """First two stages of a minimal resolution of H^0(B) over H^0(A)."""
    RA, RB = H0Ring(phi.source), H0Ring(phi.target)
    g = h0_map(phi, RA, RB)
    res = semifree_resolution(as_module(RB), RA, Window(-1, 0, window.wt_cap), max_stages=2, g=g)
    first = [s for s in res.P.symbols if s.deg == -1]
    return {"generators": len([s for s in res.P.symbols if s.deg == 0]), "relations": len(first),
            "free": not first}


def check_flat_dim0(
    w: FlatMapWitness | AlgebraMap,
    window: Window,
    test_modules: Optional[Sequence[Tuple[str, SemiFreeModule]]] = None,
) -> Verdict:
    if isinstance(w, AlgebraMap):
        w = flat_witness(w)
    phi = w.phi
    mods = list(test_modules) if test_modules is not None else default_test_modules(phi.source)
    battery = flat_battery(phi, mods, window)
    probe = h0_free_probe(phi, window)
    ev = {"construction": w.tag, "battery": battery, "h0_probe": probe}
    bad = [b["module"] for b in battery if b["mismatches"] or not b["amplitude_ok"]]
    if bad or not probe["free"]:
        ev["witness"] = {"modules": bad, "h0_relations": probe["relations"]}
        return Verdict(Status.FAILS, window, ev)
    if w.tag == "free-extension":
        return Verdict(Status.HOLDS, window, ev)
    return Verdict(Status.INCONCLUSIVE, window, ev, ["battery-only flatness"])


# ---------------------------------------------------------------------------
# regular sequences


def _ring_elements(R: GradedRing, seq) -> List[Element]:
    out = []
    for a in seq:
        if isinstance(R, H0Ring):
            a = R.algebra.coerce(a) if a.ring is not R else a
            out.append(Element(R, R.nf_terms(a.terms), a.bideg))
        else:
            out.append(R.coerce(a))
    return out


def hilbert_transform_check(R: GradedRing, seq: Sequence[Element], window: Window) -> dict:
    """Row-wise ``∏(1 - t^{w_i})`` transform of H(R) against H(K(R; seq))."""
    from itertools import combinations

    base = cohomology(as_module(R), window)
    K = koszul_module(R, seq)
    kt = cohomology(K, window)
    wts = [a.wt for a in seq]
    mism = []
    for n in window.degrees():
        for w in range(0, window.wt_cap + 1):
            pred = 0
            for k in range(len(seq) + 1):
                for S in combinations(range(len(seq)), k):
                    pred += (-1) ** k * base.dim(n, w - sum(wts[i] for i in S))
            if pred != kt.dim(n, w):
                mism.append([n, w, kt.dim(n, w), pred])
    return {"koszul": table_dict(kt), "mismatches": mism, "passes": not mism}


def injectivity_check(R: GradedRing, seq: Sequence[Element], window: Window) -> dict:
    """Multiplication by ``a_{i+1}`` on H^{inf} of ``K(R; a_1..a_i)``."""
    steps = []
    ok = True
    for i, a in enumerate(seq):
        K = koszul_module(R, list(seq[:i]))
        amp = amplitude(K, window)
        if amp.inf is None:
            steps.append({"element": str(a), "inf": None, "injective": True})
            continue
        bad = []
        for w in range(0, window.wt_cap - a.wt + 1):
            rank, ds, _ = _action_matrix(K, a.terms, amp.inf, w, a.wt)
            if rank < ds:
                bad.append([w, ds, rank])
        steps.append({"element": str(a), "inf": amp.inf, "injective": not bad, "kernel_at": bad})
        ok = ok and not bad
    return {"steps": steps, "passes": ok}


def is_regular_sequence(R: GradedRing, seq: Sequence, window: Window) -> Verdict:
    seq = _ring_elements(R, seq)
    inj = injectivity_check(R, seq, window)
    hil = hilbert_transform_check(R, seq, window)
    ev = {"injectivity": inj, "hilbert": hil, "agreement": inj["passes"] == hil["passes"]}
    caveats = []
    if seq and window.wt_cap < max(a.wt for a in seq):
        caveats.append("weight cap below the sequence weights")
    if inj["passes"] and hil["passes"]:
        return Verdict(Status.HOLDS, window, ev, caveats)
    ev["witness"] = {"injectivity": [s for s in inj["steps"] if not s["injective"]],
                     "hilbert": hil["mismatches"][:5]}
    return Verdict(Status.FAILS, window, ev, caveats)


# ---------------------------------------------------------------------------
# perfect and invertible modules


def is_perfect(
    M,
    ring: GradedRing,
    window: Window,
    max_stages: int = 8,
    g: Optional[RingMap] = None,
    witness: Optional[ChainMap] = None,
) -> Verdict:
    """Witness route first, then a minimal-resolution search.

    ``M`` is a module over ``ring`` (directly, or through ``g``).  A
    semi-free ``M`` is reduced to ``H^0(ring)`` before the search.
    """
    ev: dict = {}
    if witness is not None:
        q = is_quasi_iso(witness, window)
        ev["witness_route"] = {"status": q.status.value, **q.evidence}
        if q.holds:
            ev["route"] = "witness"
            ev["symbols"] = [[s.deg, s.wt] for s in witness.source.symbols]
            return Verdict(Status.HOLDS, window, ev)
    if max_stages <= 0:
        ev["route"] = "none"
        return Verdict(Status.INCONCLUSIVE, window, ev, ["no resolution stages allowed"])
    X = as_complex(M)
    if g is None and isinstance(X, SemiFreeModule) and isinstance(ring, DGAlgebra):
        R = H0Ring(ring)
        res = semifree_resolution(reduced_module(X, R), R, window, max_stages)
        ev["route"] = "search-reduced"
    else:
        res = semifree_resolution(X, ring, window, max_stages, g=g)
        ev["route"] = "search"
    ev["betti"] = res.betti
    ev["stage_degrees"] = res.stage_degrees
    ev["generators"] = [list(x) for x in res.generators]
    ev["valid_stages"] = res.valid_below
    if res.inconclusive:
        return Verdict(Status.INCONCLUSIVE, window, ev, ["window too small to certify a stage"])
    if res.terminated:
        return Verdict(Status.HOLDS, window, ev)
    ev["witness"] = {"not_perfect_within_stages": max_stages, "betti": res.betti}
    return Verdict(Status.FAILS, window, ev, [f"resolution truncated after {max_stages} stages"])


def cyclic_free_check(M: Complex, R: GradedRing, window: Window, g: Optional[RingMap] = None) -> dict:
    """Is H(M) ≅ H(R) shifted, via multiplication by one class?"""
    HM = cohomology(M, window)
    nz = HM.nonzero()
    if not nz:
        return {"passes": False, "reason": "zero cohomology"}
    w0 = min(w for (_, w) in nz)
    low = [(n, w) for (n, w) in nz if w == w0]
    if len(low) != 1 or nz[low[0]] != 1:
        return {"passes": False, "reason": "more than one generator in lowest weight",
                "lowest": [[n, w, nz[(n, w)]] for n, w in low]}
    n0 = low[0][0]
    z = M.homology(n0, w0).rep_vectors()[0]
    RM = as_module(R)
    bad = []
    for m in range(window.deg_lo - n0, window.deg_hi - n0 + 1):
        for w in range(0, window.wt_cap - w0 + 1):
            src = RM.homology(m, w) if RM.degree_bounds(w)[0] <= m <= RM.degree_bounds(w)[1] else None
            ds = len(src) if src is not None else 0
            dt = HM.dim(m + n0, w + w0)
            if ds != dt:
                bad.append([m + n0, w + w0, dt, ds])
                continue
            if not ds:
                continue
            ech = Echelon(M.field)
            tgt = M.homology(m + n0, w + w0)
            for r in src.rep_vectors():
                terms = {mono: c for (mono, _), c in r.items()}
                if g is not None:
                    terms = g.apply_terms(terms)
                img = M.act_vec(terms, z)
                ech.add(tgt.coords(M.to_vector(m + n0, w + w0, img)))
            if ech.rank != ds:
                bad.append([m + n0, w + w0, dt, ech.rank])
    return {"passes": not bad, "generator": [n0, w0], "mismatches": bad}


def is_invertible(M, R: GradedRing, window: Window, g: Optional[RingMap] = None) -> Verdict:
    """Free of rank one up to shift and weight twist, by a generator whose
    multiples fill every stratum of the window.  Semi-free modules are also
    checked after reduction to H^0."""
    M = as_complex(M)
    direct = cyclic_free_check(M, R, window, g)
    ev = {"direct": direct}
    parts = [direct["passes"]]
    if g is None and isinstance(M, SemiFreeModule) and isinstance(R, DGAlgebra):
        RR = H0Ring(R)
        red = cyclic_free_check(reduced_module(M, RR), RR, window)
        ev["reduced"] = red
        parts.append(red["passes"])
    if all(parts):
        n0, w0 = direct["generator"]
        ev["shift"] = n0
        ev["generator_weight"] = w0
        return Verdict(Status.HOLDS, window, ev)
    ev["witness"] = {k: v for k, v in direct.items() if k != "passes"}
    return Verdict(Status.FAILS, window, ev)


# ---------------------------------------------------------------------------
# smoothness of H^0(φ)


def _series_product(a: Sequence[int], b: Sequence[int], cap: int) -> List[int]:
    return [sum(a[i] * b[w - i] for i in range(w + 1)) for w in range(cap + 1)]


def indecomposables(F: H0Ring, cap: int) -> List[int]:
    """Per weight, dim of ``m / m^2`` for the irrelevant ideal ``m`` of ``F``."""
    out = [0]
    for w in range(1, cap + 1):
        basis = F.basis(0, w)
        idx = {m: i for i, m in enumerate(basis)}
        ech = Echelon(F.field)
        for w1 in range(1, w // 2 + 1):
            for a in F.basis(0, w1):
                for b in F.basis(0, w - w1):
                    ech.add({idx[t]: c for t, c in F.mul_mono(a, b).items()})
        out.append(len(basis) - ech.rank)
    return out


def polynomial_series(gen_weights: Sequence[int], cap: int) -> List[int]:
    """Coefficients of ``∏ 1/(1 - t^{d})`` up to ``cap``."""
    s = [1] + [0] * cap
    for d in gen_weights:
        for w in range(d, cap + 1):
            s[w] += s[w - d]
    return s


def h0_smooth(phi: AlgebraMap, window: Window) -> Verdict:
    """Graded smoothness of ``H^0(A) → H^0(B)``: B-side Hilbert series equals
    the A-side times the fiber's (flatness), and the fiber is a polynomial
    ring on its indecomposables."""
    A, B = phi.source, phi.target
    cap = window.wt_cap
    RA, RB = H0Ring(A), H0Ring(B)
    F = H0Ring(B, extra=[phi(g) for g in _degree0_generators(A)])
    hA = [RA.hilbert(w) for w in range(cap + 1)]
    hB = [RB.hilbert(w) for w in range(cap + 1)]
    hF = [F.hilbert(w) for w in range(cap + 1)]
    flat_pred = _series_product(hA, hF, cap)
    ind = indecomposables(F, cap)
    gen_wts = [w for w in range(1, cap + 1) for _ in range(ind[w])]
    poly = polynomial_series(gen_wts, cap)
    ev = {
        "hilbert_source": hA,
        "hilbert_target": hB,
        "hilbert_fiber": hF,
        "fiber_generator_weights": gen_wts,
        "flat": hB == flat_pred,
        "fiber_polynomial": hF == poly,
    }
    if ev["flat"] and ev["fiber_polynomial"]:
        return Verdict(Status.HOLDS, window, ev)
    wit = {}
    if not ev["flat"]:
        w = next(i for i in range(cap + 1) if hB[i] != flat_pred[i])
        wit["flatness"] = {"weight": w, "target": hB[w], "predicted": flat_pred[w]}
    if not ev["fiber_polynomial"]:
        w = next(i for i in range(cap + 1) if hF[i] != poly[i])
        wit["fiber_relation"] = {"weight": w, "fiber": hF[w], "polynomial": poly[w]}
    ev["witness"] = wit
    return Verdict(Status.FAILS, window, ev)


# ---------------------------------------------------------------------------
# the diagonal: perfectness, complete intersection, duality


def koszul_witness(D: Diagonal, seq: Sequence[Element]) -> ModuleMap:
    """``K(E; seq) → B`` through Δ, sending 1 ↦ 1 and every ξ_S ↦ 0."""
    B = D.phi.target
    P = koszul_module(D.E, seq, name="K(E)")
    XB = as_module(B)
    images = [{(B.one_key(), 0): 1}] + [{} for _ in range(P.rank - 1)]
    return ModuleMap(P, XB, images, g=D.delta)


def diagonal_perfect(phi: AlgebraMap, window: Window, max_stages: int = 8) -> Verdict:
    D = diagonal_retraction(phi)
    seq = default_diagonal_sequence(D)
    eps = koszul_witness(D, seq)
    v = is_perfect(as_module(D.phi.target), D.E, window, max_stages, g=D.delta, witness=eps)
    v.evidence["sequence"] = [str(a) for a in seq]
    return v


def verify_smoothness_equivalence(phi: AlgebraMap, window: Window, max_stages: int = 8) -> Verdict:
    w = flat_witness(phi)
    a = diagonal_perfect(phi, window, max_stages)
    b = h0_smooth(phi, window)
    ev = {"flat": w.tag, "perfect_diagonal": a.to_dict(), "h0_smooth": b.to_dict()}
    caveats = ["battery-only flatness"] if w.tag != "free-extension" else []
    caveats += a.caveats
    if a.status is Status.INCONCLUSIVE:
        ev["agreement"] = None
        return Verdict(Status.INCONCLUSIVE, window, ev, caveats)
    ev["agreement"] = a.holds == b.holds
    if a.holds and b.holds:
        return Verdict(Status.HOLDS, window, ev, caveats)
    if not ev["agreement"]:
        ev["witness"] = {
            "disagreement": {"perfect_diagonal": a.status.value, "h0_smooth": b.status.value},
            "diagnosis": "hypothesis violation" if w.tag != "free-extension" else "engine defect",
        }
    else:
        ev["witness"] = {"both_sides_fail": True}
    return Verdict(Status.FAILS, window, ev, caveats)


@dataclass
class LciCertificate:
    diagonal: Diagonal
    sequence: List[Element]
    P: SemiFreeModule
    n: int
    w0: int


def verify_lci(phi: AlgebraMap, window: Window, seq: Optional[Sequence] = None) -> Verdict:
    D = diagonal_retraction(phi)
    E, B = D.E, D.phi.target
    default = default_diagonal_sequence(D)
    if seq is None:
        seq = default
    else:
        seq = [E.coerce(E.parse(a) if isinstance(a, str) else a) for a in seq]
        if seq and not default:
            raise PresentationError("the kernel of H0(Δ) is zero but a nonempty sequence was given")
    subs: Dict[str, Verdict] = {}
    bad = in_kernel_h0(D, seq)
    subs["kernel"] = Verdict(Status.FAILS if bad else Status.HOLDS, window, {"outside_kernel": bad})
    K, kappa = koszul(E, seq)
    subs["koszul_quasi_iso"] = is_quasi_iso(D.iota1.compose(kappa), window)
    RE = H0Ring(E)
    reg0 = is_regular_sequence(RE, seq, window)
    quot = H0Ring(E, extra=seq)
    RB = H0Ring(B)
    hq = [quot.hilbert(w) for w in range(window.wt_cap + 1)]
    hb = [RB.hilbert(w) for w in range(window.wt_cap + 1)]
    ev0 = {"regular": reg0.to_dict(), "quotient_hilbert": hq, "target_hilbert": hb}
    st0 = Status.HOLDS if reg0.holds and hq == hb else Status.FAILS
    subs["h0_lci"] = Verdict(st0, window, ev0)
    amp = amplitude(E, window)
    if amp.inf is None or amp.boundary:
        subs["dg_regular"] = Verdict(Status.INCONCLUSIVE, window, {"amplitude": amp.to_dict()},
                                     ["amplitude not finite in window"])
    else:
        subs["dg_regular"] = is_regular_sequence(E, seq, window)
    ev = {"sequence": [str(a) for a in seq], "n": len(seq), "w0": sum(a.wt for a in seq),
          "checks": {k: v.to_dict() for k, v in subs.items()}}
    status = _combine(list(subs.values()))
    if status is Status.FAILS:
        ev["witness"] = {"failed": [k for k, v in subs.items() if v.fails]}
    v = Verdict(status, window, ev)
    v.certificate = LciCertificate(D, list(seq), koszul_module(E, seq, name="K(E)"), len(seq),
                                   sum(a.wt for a in seq))
    return v


def _duality_test_modules(D: Diagonal):
    B = D.phi.target
    return [
        ("E", as_module(D.E), None),
        ("B", as_module(B), D.delta),
        ("B[1]", shift(as_module(B), 1), D.delta),
    ]


def verify_vdb(phi: AlgebraMap, window: Window, modules: Optional[Sequence[str]] = None) -> Verdict:
    """Ext^i_w(B, X) against Tor_{n-i}(B, X) at weight ``w + w0``."""
    lci = verify_lci(phi, window)
    if not lci.holds:
        raise PresentationError("no complete-intersection certificate for the diagonal")
    cert: LciCertificate = lci.certificate
    D, P, n, w0 = cert.diagonal, cert.P, cert.n, cert.w0
    E, B = D.E, D.phi.target
    M = hom_complex(P, as_module(E))
    inv = is_invertible(M, B, window, g=D.iota1)
    tor_win = Window(window.deg_lo - n, window.deg_hi - n, window.wt_cap + w0)
    tests = _duality_test_modules(D)
    if modules is not None:
        tests = [t for t in tests if t[0] in modules]
    reports = []
    matched = inv.holds
    for label, X, g in tests:
        ext = ext_table(P, X, window, g)
        tor = tor_table(P, X, tor_win, g, wt_lo=0)
        mism, literal, sym = [], True, []
        for i in window.degrees():
            for w in ext.weights():
                if ext.dim(i, w) != tor.dim(i - n, w + w0):
                    mism.append([i, w, ext.dim(i, w), tor.dim(i - n, w + w0)])
                if w - w0 >= 0 and ext.dim(i, w) != tor.dim(i - n, w - w0):
                    literal = False
        for j in range(0, n - window.deg_lo + 1):
            if not (window.deg_lo <= n - j <= window.deg_hi):
                continue
            for w in range(0, window.wt_cap + 1):
                if tor.dim(-j, w) != ext.dim(n - j, w - w0):
                    sym.append([j, w, tor.dim(-j, w), ext.dim(n - j, w - w0)])
        ok = not mism and not sym
        matched = matched and ok
        reports.append({"module": label, "ext": table_dict(ext), "tor": table_dict(tor),
                        "mismatches": mism, "symmetric_mismatches": sym, "matched": ok,
                        "matches_with_opposite_twist": literal})
    ev = {"n": n, "twist": w0, "invertible": inv.to_dict(), "modules": reports, "matched": matched}
    if inv.holds:
        ev["generator"] = [inv.evidence["shift"], inv.evidence["generator_weight"]]
    if not matched:
        ev["witness"] = {"unmatched": [r["module"] for r in reports if not r["matched"]],
                         "invertible": inv.status.value}
    v = Verdict(Status.HOLDS if matched else Status.FAILS, window, ev)
    v.certificate = cert
    return v


def rigid_module(phi: AlgebraMap, window: Window) -> Tuple[SemiFreeModule, Verdict]:
    """``N`` = B shifted to degree ``-n`` and weight ``w0``; compare
    ``RHom_E(B, N ⊗_A N)`` with ``N`` stratum by stratum."""
    lci = verify_lci(phi, window)
    if not lci.holds:
        raise PresentationError("no complete-intersection certificate for the diagonal")
    cert: LciCertificate = lci.certificate
    D, P, n, w0 = cert.diagonal, cert.P, cert.n, cert.w0
    B = D.phi.target
    inv = is_invertible(hom_complex(P, as_module(D.E)), B, window, g=D.iota1)
    if not inv.holds:
        raise PresentationError("the dualizing module is not invertible")
    N = SemiFreeModule(B, [Symbol("n", -n, w0)], [{}], name="N")
    NN = tensor_modules(tensor_module(N, D.iota1), tensor_module(N, D.iota2), name="N⊗N")
    lhs = ext_table(P, NN, window)
    rhs = cohomology(N, window, wt_lo=lhs.wt_lo)
    mism = lhs.mismatches(rhs)
    ev = {"N": {"degree": -n, "weight": w0}, "lhs": table_dict(lhs), "rhs": table_dict(rhs)}
    if mism:
        ev["witness"] = {"mismatches": [list(m) for m in mism[:10]]}
        return N, Verdict(Status.FAILS, window, ev)
    return N, Verdict(Status.HOLDS, window, ev)


def verify_flathz(A: DGAlgebra, window: Window, max_stages: int = 8) -> Verdict:
    """Homological smoothness over the field forces ``A → H^0(A)`` to be a
    quasi-isomorphism; fails only on the forbidden combination."""
    k = ground(A.field)
    phi = inclusion(k, A)
    a = diagonal_perfect(phi, window, max_stages)
    t = cohomology(A, window)
    negative = [n for n in t.rows_nonzero() if n < 0]
    amp = amplitude(A, window, t)
    ev = {"smooth": a.to_dict(), "negative_rows": negative, "amplitude": amp.to_dict(),
          "quasi_iso_to_h0": not negative}
    if a.holds and negative:
        ev["witness"] = {"forbidden": "smooth with nonzero negative cohomology", "rows": negative}
        return Verdict(Status.FAILS, window, ev)
    if a.status is Status.INCONCLUSIVE and negative:
        return Verdict(Status.INCONCLUSIVE, window, ev, a.caveats)
    if not a.holds:
        ev["summary"] = "not homologically smooth within budget"
    return Verdict(Status.HOLDS, window, ev, a.caveats)
