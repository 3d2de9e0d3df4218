"""Semi-free DG-modules and stratified complexes.

Every complex here is graded by (cohomological degree, weight) with
finite-dimensional strata, and the differential preserves weight.  All
cohomology is computed one stratum at a time by exact elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .cdga import (
    AlgebraMap,
    DGAlgebra,
    Element,
    GradedRing,
    Mono,
    PresentationError,
    RingMap,
    format_terms,
)
from .exactla import Echelon, Field, kernel_of_rows

Key = object
Vec = Dict[Key, object]


@dataclass(frozen=True)
class Window:
    deg_lo: int
    deg_hi: int
    wt_cap: int

    def __post_init__(self):
        if self.deg_lo > self.deg_hi:
            raise ValueError(f"empty degree range {self.deg_lo}..{self.deg_hi}")
        if self.wt_cap < 0:
            raise ValueError("weight cap must be non-negative")

    def degrees(self) -> range:
        return range(self.deg_lo, self.deg_hi + 1)

    def describe(self) -> str:
        return f"deg {self.deg_lo}..{self.deg_hi} wt {self.wt_cap}"


def _add_into(out: Vec, key: Key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class Complex:
    """A bigraded complex of vector spaces with a weight-preserving d of degree +1."""

    field: Field

    def basis(self, n: int, w: int) -> List[Key]:
        raise NotImplementedError

    def d(self, key: Key) -> Vec:
        raise NotImplementedError

    def degree_bounds(self, w: int) -> Tuple[int, int]:
        """Degrees outside this range at weight ``w`` are zero (lo > hi = empty)."""
        raise NotImplementedError

    def min_weight(self) -> int:
        raise NotImplementedError

    def act(self, terms: Mapping[Mono, object], key: Key) -> Vec:
        raise NotImplementedError(f"{type(self).__name__} carries no ring action")

    # ---- cached stratum machinery
    def _caches(self):
        c = self.__dict__.get("_cx_cache")
        if c is None:
            c = {"index": {}, "rows": {}, "rank": {}, "hom": {}}
            self.__dict__["_cx_cache"] = c
        return c

    def index(self, n: int, w: int) -> Dict[Key, int]:
        cache = self._caches()["index"]
        idx = cache.get((n, w))
        if idx is None:
            idx = {k: i for i, k in enumerate(self.basis(n, w))}
            cache[(n, w)] = idx
        return idx

    def to_vector(self, n: int, w: int, v: Mapping[Key, object]) -> Dict[int, object]:
        idx = self.index(n, w)
        fld = self.field
        out = {}
        for k, c in v.items():
            c = fld.norm(c)
            if c:
                if k not in idx:
                    raise KeyError(f"{k!r} is not a basis element of stratum {(n, w)}")
                out[idx[k]] = c
        return out

    def from_vector(self, n: int, w: int, vec: Mapping[int, object]) -> Vec:
        b = self.basis(n, w)
        return {b[i]: c for i, c in vec.items() if c}

    def d_rows(self, n: int, w: int) -> List[Dict[int, object]]:
        cache = self._caches()["rows"]
        rows = cache.get((n, w))
        if rows is None:
            rows = [self.to_vector(n + 1, w, self.d(k)) for k in self.basis(n, w)]
            cache[(n, w)] = rows
        return rows

    def d_rank(self, n: int, w: int) -> int:
        cache = self._caches()["rank"]
        r = cache.get((n, w))
        if r is None:
            lo, hi = self.degree_bounds(w)
            if not (lo <= n <= hi) or not (lo <= n + 1 <= hi):
                r = 0
            else:
                ech = Echelon(self.field)
                for row in self.d_rows(n, w):
                    ech.add(row)
                r = ech.rank
            cache[(n, w)] = r
        return r

    def hdim(self, n: int, w: int) -> int:
        lo, hi = self.degree_bounds(w)
        if not (lo <= n <= hi):
            return 0
        dim = len(self.basis(n, w))
        if not dim:
            return 0
        return dim - self.d_rank(n, w) - self.d_rank(n - 1, w)

    def homology(self, n: int, w: int) -> "HomologyStratum":
        cache = self._caches()["hom"]
        h = cache.get((n, w))
        if h is None:
            h = HomologyStratum(self, n, w)
            cache[(n, w)] = h
        return h

    def d_vec(self, v: Mapping[Key, object]) -> Vec:
        out: Vec = {}
        for k, c in v.items():
            for k2, c2 in self.d(k).items():
                _add_into(out, k2, c * c2)
        return {k: self.field.norm(c) for k, c in out.items() if self.field.norm(c)}

    def act_vec(self, terms: Mapping[Mono, object], v: Mapping[Key, object]) -> Vec:
        out: Vec = {}
        for k, c in v.items():
            for k2, c2 in self.act(terms, k).items():
                _add_into(out, k2, c * c2)
        return {k: self.field.norm(c) for k, c in out.items() if self.field.norm(c)}

    def nonzero_degrees(self, wt_cap: int) -> Tuple[int, int]:
        lo, hi = 10**9, -(10**9)
        for w in range(self.min_weight(), wt_cap + 1):
            a, b = self.degree_bounds(w)
            if a <= b:
                lo, hi = min(lo, a), max(hi, b)
        return lo, hi


class HomologyStratum:
    """Cocycles, boundaries and a chosen basis of cohomology at one stratum."""

    def __init__(self, C: Complex, n: int, w: int):
        self.complex = C
        self.n, self.w = n, w
        fld = C.field
        dim = len(C.basis(n, w))
        self.dim = dim
        lo, hi = C.degree_bounds(w)
        if dim and lo <= n + 1 <= hi:
            kernel = kernel_of_rows(C.d_rows(n, w), fld)
        else:
            kernel = [{i: 1} for i in range(dim)]
        self.cycles = kernel
        self.boundaries = C.d_rows(n - 1, w) if dim and lo <= n - 1 <= hi else []
        ech = Echelon(fld, track=True)
        for i, b in enumerate(self.boundaries):
            ech.add(b, tag=("b", i))
        self.boundary_rank = ech.rank
        self.reps: List[Dict[int, object]] = []
        for z in kernel:
            if ech.add(z, tag=("h", len(self.reps))):
                self.reps.append(z)
        self._ech = ech

    def __len__(self):
        return len(self.reps)

    def coords(self, z: Mapping[int, object]) -> Dict[int, object]:
        """Coordinates of the class of cocycle vector ``z`` in the rep basis."""
        exp = self._ech.expand(z)
        if exp is None:
            raise ValueError("vector is not a cocycle")
        return {t[1]: c for t, c in exp.items() if t[0] == "h"}

    def is_boundary(self, z: Mapping[int, object]) -> bool:
        return not self.coords(z)

    def rep_vectors(self) -> List[Vec]:
        return [self.complex.from_vector(self.n, self.w, r) for r in self.reps]


@dataclass
class CohomologyTable:
    window: Window
    wt_lo: int
    dims: Dict[Tuple[int, int], int]
    representatives: Optional[Dict[Tuple[int, int], List[Vec]]] = None

    def dim(self, n: int, w: int) -> int:
        return self.dims.get((n, w), 0)

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {k: v for k, v in sorted(self.dims.items()) if v}

    def row(self, n: int) -> List[int]:
        return [self.dim(n, w) for w in range(self.wt_lo, self.window.wt_cap + 1)]

    def rows_nonzero(self) -> List[int]:
        return sorted({n for (n, _), v in self.dims.items() if v})

    def weights(self) -> range:
        return range(self.wt_lo, self.window.wt_cap + 1)

    def grid(self) -> dict:
        degs = list(range(self.window.deg_hi, self.window.deg_lo - 1, -1))
        return {
            "degrees": degs,
            "weights": list(self.weights()),
            "dims": [self.row(n) for n in degs],
        }

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def same_dims(self, other: "CohomologyTable") -> bool:
        keys = set(self.dims) | set(other.dims)
        return all(self.dim(*k) == other.dim(*k) for k in keys)

    def mismatches(self, other: "CohomologyTable") -> List[Tuple[int, int, int, int]]:
        keys = sorted(set(self.dims) | set(other.dims))
        return [(n, w, self.dim(n, w), other.dim(n, w)) for n, w in keys if self.dim(n, w) != other.dim(n, w)]


def cohomology(
    M, window: Window, wt_lo: Optional[int] = None, representatives: bool = False
) -> CohomologyTable:
    """Stratum dimensions of H(M) over the window, weights ``wt_lo..wt_cap``."""
    C = as_complex(M)
    if wt_lo is None:
        wt_lo = min(C.min_weight(), 0)
    dims = {}
    reps = {} if representatives else None
    for w in range(wt_lo, window.wt_cap + 1):
        lo, hi = C.degree_bounds(w)
        for n in window.degrees():
            if lo <= n <= hi:
                if representatives:
                    h = C.homology(n, w)
                    dims[(n, w)] = len(h)
                    reps[(n, w)] = h.rep_vectors()
                else:
                    dims[(n, w)] = C.hdim(n, w)
            else:
                dims[(n, w)] = 0
    return CohomologyTable(window, wt_lo, dims, reps)


# ---------------------------------------------------------------------------
# semi-free modules


@dataclass(frozen=True)
class Symbol:
    name: str
    deg: int
    wt: int


class SemiFreeModule(Complex):
    """``⊕ R·s_j`` with ``d(s_j) = Σ a·s_k`` over strictly earlier ``k``.

    Basis keys are ``(monomial, j)``; ``diff[j]`` is a dict over such keys.
    """

    def __init__(
        self,
        ring: GradedRing,
        symbols: Sequence[Symbol],
        diff: Sequence[Mapping[Tuple[Mono, int], object]],
        name: str = "",
        validate: bool = True,
    ):
        self.ring = ring
        self.field = ring.field
        self.symbols = tuple(symbols)
        self.name = name
        fld = self.field
        self.diff: List[Dict[Tuple[Mono, int], object]] = []
        for j, dj in enumerate(diff):
            self.diff.append({k: fld.norm(c) for k, c in dj.items() if fld.norm(c)})
        if len(self.diff) != len(self.symbols):
            raise PresentationError("one differential per symbol is required")
        if validate:
            self.validate()

    def validate(self) -> None:
        R = self.ring
        for j, s in enumerate(self.symbols):
            for (m, k), c in self.diff[j].items():
                if not 0 <= k < j:
                    raise PresentationError(
                        f"d({s.name}) involves symbol #{k}: differential must be strictly triangular"
                    )
                dm, wm = R.bideg(m)
                t = self.symbols[k]
                if (dm + t.deg, wm + t.wt) != (s.deg + 1, s.wt):
                    raise PresentationError(
                        f"d({s.name}) has a term of bidegree {(dm + t.deg, wm + t.wt)}, expected {(s.deg + 1, s.wt)}"
                    )
        for j, s in enumerate(self.symbols):
            dd = self.d_vec(self.diff[j])
            if dd:
                raise PresentationError(f"d(d({s.name})) is not zero")

    def __repr__(self):
        return f"SemiFreeModule({self.name or '?'}: {[(s.name, s.deg, s.wt) for s in self.symbols]})"

    @property
    def rank(self) -> int:
        return len(self.symbols)

    def basis(self, n: int, w: int) -> List[Key]:
        R = self.ring
        out = []
        for j, s in enumerate(self.symbols):
            if w - s.wt >= 0:
                out.extend((m, j) for m in R.basis(n - s.deg, w - s.wt))
        return out

    def d(self, key) -> Vec:
        m, j = key
        R = self.ring
        out: Vec = {}
        for t, c in R.d_mono(m).items():
            _add_into(out, (t, j), c)
        dj = self.diff[j]
        if dj:
            sign = -1 if R.bideg(m)[0] % 2 else 1
            for (a, k), c in dj.items():
                for t, c2 in R.mul_mono(m, a).items():
                    _add_into(out, (t, k), sign * c * c2)
        return out

    def act(self, terms, key) -> Vec:
        m, j = key
        out: Vec = {}
        R = self.ring
        for a, c in terms.items():
            for t, c2 in R.mul_mono(a, m).items():
                _add_into(out, (t, j), c * c2)
        return out

    def degree_bounds(self, w: int) -> Tuple[int, int]:
        lo, hi = 10**9, -(10**9)
        for s in self.symbols:
            if w - s.wt >= 0:
                a, b = self.ring.degree_bounds(w - s.wt)
                if a <= b:
                    lo, hi = min(lo, a + s.deg), max(hi, b + s.deg)
        return lo, hi

    def min_weight(self) -> int:
        return min((s.wt for s in self.symbols), default=0)

    def symbol_element(self, j: int) -> Vec:
        return {(self.ring.one_key(), j): 1}

    def describe_diff(self, j: int) -> str:
        parts = []
        for (m, k), c in sorted(self.diff[j].items(), key=lambda kv: (kv[0][1], kv[0][0])):
            parts.append(f"({format_terms(self.ring, {m: c})})*{self.symbols[k].name}")
        return " + ".join(parts) or "0"


def free_module(
    ring: GradedRing,
    basis_specs: Iterable = (("1", 0, 0),),
    diff: Optional[Mapping[str, Mapping[str, object]]] = None,
    name: str = "",
) -> SemiFreeModule:
    """Semi-free module from symbol specs ``(name, deg, wt)`` and a differential
    ``{symbol: {earlier symbol: ring element or expression}}``."""
    syms = [b if isinstance(b, Symbol) else Symbol(*b) for b in basis_specs]
    pos = {s.name: j for j, s in enumerate(syms)}
    if len(pos) != len(syms):
        raise PresentationError("duplicate symbol names")
    diffs: List[Dict] = [{} for _ in syms]
    for sname, comb in (diff or {}).items():
        if sname not in pos:
            raise PresentationError(f"unknown symbol {sname!r}")
        j = pos[sname]
        for tname, coef in comb.items():
            if tname not in pos:
                raise PresentationError(f"unknown symbol {tname!r}")
            if isinstance(coef, str):
                if not isinstance(ring, DGAlgebra):
                    raise PresentationError("string coefficients need a DG-algebra")
                coef = ring.parse(coef)
            elif not isinstance(coef, Element):
                coef = ring.element({ring.one_key(): coef})
            for m, c in coef.terms.items():
                diffs[j][(m, pos[tname])] = diffs[j].get((m, pos[tname]), 0) + c
    return SemiFreeModule(ring, syms, diffs, name=name)


def as_module(R: GradedRing) -> SemiFreeModule:
    mod = getattr(R, "_as_module", None)
    if mod is None:
        mod = SemiFreeModule(R, [Symbol("1", 0, 0)], [{}], name=getattr(R, "name", ""))
        R._as_module = mod
    return mod


def as_complex(M) -> Complex:
    if isinstance(M, Complex):
        return M
    if isinstance(M, GradedRing):
        return as_module(M)
    raise TypeError(f"cannot view {type(M).__name__} as a complex")


def shift(M: SemiFreeModule, n: int) -> SemiFreeModule:
    """``M[n]``: degrees lowered by ``n``, differential multiplied by (-1)^n."""
    if n == 0:
        return M
    sign = -1 if n % 2 else 1
    syms = [Symbol(s.name, s.deg - n, s.wt) for s in M.symbols]
    diffs = [{k: sign * c for k, c in dj.items()} for dj in M.diff]
    return SemiFreeModule(M.ring, syms, diffs, name=f"{M.name}[{n}]", validate=False)


def twist(M: SemiFreeModule, dw: int) -> SemiFreeModule:
    """Raise every symbol weight by ``dw``."""
    syms = [Symbol(s.name, s.deg, s.wt + dw) for s in M.symbols]
    return SemiFreeModule(M.ring, syms, M.diff, name=f"{M.name}({dw})", validate=False)


def direct_sum(M: SemiFreeModule, N: SemiFreeModule) -> SemiFreeModule:
    if M.ring is not N.ring:
        raise PresentationError("summands live over different rings")
    off = M.rank
    syms = list(M.symbols) + [Symbol(s.name + "'", s.deg, s.wt) for s in N.symbols]
    diffs = list(M.diff) + [{(m, k + off): c for (m, k), c in dj.items()} for dj in N.diff]
    return SemiFreeModule(M.ring, syms, diffs, name=f"{M.name}⊕{N.name}", validate=False)


def koszul_module(R: GradedRing, seq: Sequence[Element], name: str = "") -> SemiFreeModule:
    """Koszul complex on degree-0 elements as a semi-free ``R``-module.

    Symbols are subsets ``S`` (exterior monomials ξ_S), ordered by size.
    """
    from itertools import combinations

    for a in seq:
        if a.ring is not R:
            raise PresentationError("Koszul element over a different ring")
        if not a.is_zero() and a.deg != 0:
            raise PresentationError("Koszul elements must have degree 0")
    n = len(seq)
    subsets = [S for k in range(n + 1) for S in combinations(range(n), k)]
    pos = {S: j for j, S in enumerate(subsets)}
    syms = []
    diffs = []
    for S in subsets:
        label = "ξ" + "".join(str(i + 1) for i in S) if S else "1"
        syms.append(Symbol(label, -len(S), sum(seq[i].wt for i in S)))
        dj: Dict = {}
        for k, i in enumerate(S):
            sign = -1 if k % 2 else 1
            rest = pos[S[:k] + S[k + 1:]]
            for m, c in seq[i].terms.items():
                dj[(m, rest)] = dj.get((m, rest), 0) + sign * c
        diffs.append(dj)
    return SemiFreeModule(R, syms, diffs, name=name or "K")


# ---------------------------------------------------------------------------
# maps and cones


class ChainMap:
    """Degree-0 map of complexes, given on basis keys."""

    source: Complex
    target: Complex

    def apply(self, key: Key) -> Vec:
        raise NotImplementedError

    def apply_vec(self, v: Mapping[Key, object]) -> Vec:
        out: Vec = {}
        for k, c in v.items():
            for k2, c2 in self.apply(k).items():
                _add_into(out, k2, c * c2)
        fld = self.target.field
        return {k: fld.norm(c) for k, c in out.items() if fld.norm(c)}

    def commutes_on(self, keys: Iterable[Key]) -> List[Key]:
        bad = []
        for k in keys:
            if self.target.d_vec(self.apply(k)) != self.apply_vec(self.source.d(k)):
                bad.append(k)
        return bad


class ModuleMap(ChainMap):
    """``R``-linear map out of a semi-free module, ``s_j ↦ images[j]``; the
    target is a module over ``S`` and ``R`` acts through ``g``."""

    def __init__(self, source: SemiFreeModule, target: Complex, images: Sequence[Vec], g: Optional[RingMap] = None):
        self.source = source
        self.target = target
        self.g = g
        self.images = [dict(v) for v in images]
        if len(self.images) != source.rank:
            raise PresentationError("one image per symbol is required")

    def apply(self, key) -> Vec:
        m, j = key
        img = self.images[j]
        if not img:
            return {}
        terms = self.g.apply_mono(m) if self.g is not None else {m: 1}
        if not terms:
            return {}
        return self.target.act_vec(terms, img)

    def validate(self) -> List[str]:
        bad = []
        S = self.source
        for j, s in enumerate(S.symbols):
            lhs = self.target.d_vec(self.images[j])
            rhs = self.apply_vec(S.diff[j])
            if lhs != rhs:
                bad.append(s.name)
        return bad


class AlgebraChainMap(ChainMap):
    """A DG-algebra map viewed as a map of rank-1 modules."""

    def __init__(self, f: RingMap):
        self.f = f
        self.source = as_module(f.source)
        self.target = as_module(f.target)

    def apply(self, key) -> Vec:
        m, _ = key
        return {(t, 0): c for t, c in self.f.apply_mono(m).items()}


class ZeroComplex(Complex):
    def __init__(self, field: Field):
        self.field = field

    def basis(self, n, w):
        return []

    def d(self, key):
        return {}

    def degree_bounds(self, w):
        return (1, 0)

    def min_weight(self):
        return 0


class ZeroMap(ChainMap):
    def __init__(self, source: Complex, target: Complex):
        self.source, self.target = source, target

    def apply(self, key):
        return {}


class Cone(Complex):
    """``cone(f)^n = source^{n+1} ⊕ target^n`` with
    ``d(a, b) = (-d a, f(a) + d b)``; keys ``("s", a)`` and ``("t", b)``."""

    def __init__(self, f: ChainMap):
        self.f = f
        self.field = f.target.field

    def basis(self, n, w):
        src = [("s", k) for k in self.f.source.basis(n + 1, w)]
        return src + [("t", k) for k in self.f.target.basis(n, w)]

    def d(self, key) -> Vec:
        tag, k = key
        if tag == "t":
            return {("t", k2): c for k2, c in self.f.target.d(k).items()}
        out = {("s", k2): -c for k2, c in self.f.source.d(k).items()}
        for k2, c in self.f.apply(k).items():
            out[("t", k2)] = c
        return out

    def degree_bounds(self, w):
        a, b = self.f.source.degree_bounds(w)
        c, e = self.f.target.degree_bounds(w)
        lo = min(a - 1 if a <= b else 10**9, c if c <= e else 10**9)
        hi = max(b - 1 if a <= b else -(10**9), e if c <= e else -(10**9))
        return lo, hi

    def min_weight(self):
        return min(self.f.source.min_weight(), self.f.target.min_weight())


def cone(f: ChainMap) -> Cone:
    return Cone(f)


# ---------------------------------------------------------------------------
# change of rings, tensor and Hom


def tensor_module(M: SemiFreeModule, g: RingMap, name: str = "") -> SemiFreeModule:
    """``S ⊗_R M`` for ``g: R → S``: same symbols, coefficients pushed through ``g``."""
    if g.source is not M.ring:
        raise PresentationError("ring map does not start at the module's ring")
    diffs = []
    for dj in M.diff:
        out: Dict = {}
        for (m, k), c in dj.items():
            for t, v in g.apply_mono(m).items():
                _add_into(out, (t, k), c * v)
        diffs.append(out)
    return SemiFreeModule(g.target, M.symbols, diffs, name=name or f"{M.name}⊗", validate=False)


def tensor_modules(M: SemiFreeModule, N: SemiFreeModule, name: str = "") -> SemiFreeModule:
    """``M ⊗_R N`` for semi-free modules over one ring."""
    if M.ring is not N.ring:
        raise PresentationError("tensor factors live over different rings")
    R = M.ring
    pairs = sorted(((j, l) for j in range(M.rank) for l in range(N.rank)), key=lambda p: (p[0] + p[1], p[0]))
    pos = {p: i for i, p in enumerate(pairs)}
    syms = []
    diffs = []
    for j, l in pairs:
        s, t = M.symbols[j], N.symbols[l]
        syms.append(Symbol(f"{s.name}⊗{t.name}", s.deg + t.deg, s.wt + t.wt))
        out: Dict = {}
        for (m, k), c in M.diff[j].items():
            _add_into(out, (m, pos[(k, l)]), c)
        for (m, k), c in N.diff[l].items():
            sign = -1 if (s.deg + s.deg * R.bideg(m)[0]) % 2 else 1
            _add_into(out, (m, pos[(j, k)]), sign * c)
        diffs.append(out)
    return SemiFreeModule(R, syms, diffs, name=name or f"{M.name}⊗{N.name}", validate=False)


class HomComplex(Complex):
    """``Hom_R(P, X)`` for finite semi-free ``P`` and a module ``X`` over
    ``S`` on which ``R`` acts through ``g``.  Keys ``(j, x)`` stand for the
    map sending ``s_j ↦ x`` and every other symbol to 0."""

    def __init__(self, P: SemiFreeModule, X: Complex, g: Optional[RingMap] = None):
        self.P, self.X, self.g = P, X, g
        self.field = X.field
        # back[j] = [(i, a, c)] for each term c*a*s_j of d(s_i)
        self.back: List[List[Tuple[int, Mono, object]]] = [[] for _ in P.symbols]
        for i, di in enumerate(P.diff):
            for (a, j), c in di.items():
                self.back[j].append((i, a, c))

    def basis(self, n, w):
        out = []
        for j, s in enumerate(self.P.symbols):
            out.extend((j, x) for x in self.X.basis(n + s.deg, w + s.wt))
        return out

    def d(self, key) -> Vec:
        j, x = key
        s = self.P.symbols[j]
        n = self.X.ring.bideg(x[0])[0] + self.X.symbols[x[1]].deg - s.deg if isinstance(self.X, SemiFreeModule) else None
        if n is None:
            raise TypeError("Hom target must be a semi-free module")
        out: Vec = {}
        for x2, c in self.X.d(x).items():
            _add_into(out, (j, x2), c)
        R = self.P.ring
        for i, a, c in self.back[j]:
            da = R.bideg(a)[0]
            sign = -1 if (n + da * n) % 2 else 1
            terms = self.g.apply_mono(a) if self.g is not None else {a: 1}
            for x2, c2 in self.X.act_vec(terms, {x: 1}).items():
                _add_into(out, (i, x2), sign * c * c2)
        return out

    def act(self, terms, key) -> Vec:
        j, x = key
        return {(j, x2): c for x2, c in self.X.act(terms, x).items()}

    def degree_bounds(self, w):
        lo, hi = 10**9, -(10**9)
        for s in self.P.symbols:
            a, b = self.X.degree_bounds(w + s.wt)
            if a <= b:
                lo, hi = min(lo, a - s.deg), max(hi, b - s.deg)
        return lo, hi

    def min_weight(self):
        return self.X.min_weight() - max((s.wt for s in self.P.symbols), default=0)


def hom_complex(P: SemiFreeModule, X, g: Optional[RingMap] = None) -> HomComplex:
    if not isinstance(P, SemiFreeModule):
        raise PresentationError("Hom source must be a finite semi-free module")
    return HomComplex(P, as_complex(X), g)


def hom_dual(P: SemiFreeModule, name: str = "") -> SemiFreeModule:
    """``Hom_R(P, R)`` as a semi-free module on the dual symbols (reversed order)."""
    R = P.ring
    r = P.rank
    syms = [Symbol(P.symbols[j].name + "*", -P.symbols[j].deg, -P.symbols[j].wt) for j in reversed(range(r))]
    pos = {j: r - 1 - j for j in range(r)}
    diffs: List[Dict] = [{} for _ in range(r)]
    for i, di in enumerate(P.diff):
        for (a, j), c in di.items():
            n = -P.symbols[j].deg
            da = R.bideg(a)[0]
            sign = -1 if (n + da * n) % 2 else 1
            _add_into(diffs[pos[j]], (a, pos[i]), sign * c)
    return SemiFreeModule(R, syms, diffs, name=name or f"{P.name}*")


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class Resolution:
    P: SemiFreeModule
    eps: ModuleMap
    minimal: bool
    terminated: bool
    betti: List[int]
    stage_degrees: List[int]
    generators: List[Tuple[int, int]]
    valid_below: int
    inconclusive: bool = False
    notes: List[str] = dc_field(default_factory=list)


def semifree_resolution(
    X: Complex,
    ring: GradedRing,
    window: Window,
    max_stages: int = 8,
    g: Optional[RingMap] = None,
) -> Resolution:
    """Minimal cycle-killing resolution ``P → X`` over ``ring``.

    Stage ``i`` adjoins symbols in degree ``top - i`` chosen in increasing
    weight, each killing a cohomology class of the cone of the current map.
    ``terminated`` means the cone is acyclic at every weight up to the cap.
    """
    X = as_complex(X)
    cap = window.wt_cap
    symbols: List[Symbol] = []
    diffs: List[Dict] = []
    images: List[Vec] = []
    wlo = min(X.min_weight(), 0)
    xlo, top = X.nonzero_degrees(cap)
    P = SemiFreeModule(ring, [], [], name="P", validate=False)
    eps = ModuleMap(P, X, [], g)
    betti: List[int] = []
    degrees: List[int] = []
    if xlo > top or max_stages <= 0:
        terminated = xlo > top
        return Resolution(P, eps, True, terminated, [], [], [], 0, inconclusive=not terminated)

    def rebuild():
        nonlocal P, eps
        P = SemiFreeModule(ring, symbols, diffs, name="P", validate=False)
        eps = ModuleMap(P, X, images, g)
        return Cone(eps)

    C = rebuild()
    stage = 0
    n = top
    while stage < max_stages:
        bottom = C.nonzero_degrees(cap)[0]
        if n < bottom:
            break
        added = 0
        for w in range(wlo, cap + 1):
            h = C.homology(n, w)
            if not len(h):
                continue
            for z in h.rep_vectors():
                p = {k: -c for (tag, k), c in z.items() if tag == "s"}
                x = {k: c for (tag, k), c in z.items() if tag == "t"}
                j = len(symbols)
                symbols.append(Symbol(f"s{j}", n, w))
                diffs.append(p)
                images.append(x)
                added += 1
            C = rebuild()
        betti.append(added)
        degrees.append(n)
        stage += 1
        n -= 1
    # remaining obstruction below the last processed degree
    terminated = True
    bottom = C.nonzero_degrees(cap)[0]
    for m in range(n, bottom - 1, -1):
        if any(C.hdim(m, w) for w in range(wlo, cap + 1)):
            terminated = False
            break
    P.validate()
    return Resolution(
        P,
        eps,
        True,
        terminated,
        betti,
        degrees,
        [(s.deg, s.wt) for s in symbols],
        valid_below=stage,
    )


def tor_table(P: SemiFreeModule, X: SemiFreeModule, window: Window, g: Optional[RingMap] = None,
              wt_lo: Optional[int] = None) -> CohomologyTable:
    """Cohomology of ``P ⊗_R X``; Tor_i sits in degree ``-i``."""
    PX = tensor_module(P, g) if g is not None else P
    return cohomology(tensor_modules(PX, X), window, wt_lo)


def ext_table(P: SemiFreeModule, X, window: Window, g: Optional[RingMap] = None,
              wt_lo: Optional[int] = None) -> CohomologyTable:
    return cohomology(hom_complex(P, X, g), window, wt_lo)
