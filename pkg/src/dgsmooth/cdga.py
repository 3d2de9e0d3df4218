"""Free graded-commutative non-positive DG-algebras with a weight grading.

A monomial is an exponent tuple aligned with the generator list; odd
generators carry exponent 0 or 1.  Elements are dicts ``{monomial: coeff}``
wrapped in :class:`Element`, always homogeneous in (degree, weight).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .exactla import Echelon, Field, QQ
from .expr import parse_expr

Mono = Tuple[int, ...]
Terms = Dict[Mono, object]
Bideg = Tuple[int, int]


class PresentationError(ValueError):
    """Raised for invalid algebra presentations and maps."""


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    deg: int
    wt: int

    def __post_init__(self):
        if self.deg > 0:
            raise PresentationError(f"generator {self.name} has positive degree {self.deg}")
        if self.wt < 1:
            raise PresentationError(f"generator {self.name} has weight {self.wt} < 1")


class GradedRing:
    """Common surface of DG-algebras and stratified quotient rings.

    Keys are exponent tuples.  Subclasses provide ``basis``, ``mul_mono``,
    ``d_mono`` and ``degree_bounds``.
    """

    field: Field
    name: str

    def bideg(self, m: Mono) -> Bideg:
        raise NotImplementedError

    def one_key(self) -> Mono:
        raise NotImplementedError

    def basis(self, deg: int, wt: int) -> List[Mono]:
        raise NotImplementedError

    def mul_mono(self, a: Mono, b: Mono) -> Terms:
        raise NotImplementedError

    def d_mono(self, m: Mono) -> Terms:
        raise NotImplementedError

    def degree_bounds(self, wt: int) -> Tuple[int, int]:
        raise NotImplementedError

    def ideal_generators(self) -> List["Element"]:
        """Generators of the graded maximal ideal sitting in degree 0."""
        raise NotImplementedError

    # element helpers
    def element(self, terms: Mapping[Mono, object], bideg: Optional[Bideg] = None) -> "Element":
        return Element(self, terms, bideg)

    def one(self) -> "Element":
        return Element(self, {self.one_key(): 1})

    def zero(self, bideg: Bideg = (0, 0)) -> "Element":
        return Element(self, {}, bideg)

    def mul_terms(self, x: Mapping[Mono, object], y: Mapping[Mono, object]) -> Terms:
        fld = self.field
        out: Terms = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for m, c in self.mul_mono(a, b).items():
                    out[m] = out.get(m, 0) + ca * cb * c
        return _clean(out, fld)

    def d_terms(self, x: Mapping[Mono, object]) -> Terms:
        out: Terms = {}
        for a, ca in x.items():
            for m, c in self.d_mono(a).items():
                out[m] = out.get(m, 0) + ca * c
        return _clean(out, self.field)


def _clean(terms: Mapping, fld: Field) -> dict:
    out = {}
    for k, v in terms.items():
        v = fld.norm(v)
        if v:
            out[k] = v
    return out


class Element:
    """Homogeneous element of a :class:`GradedRing`."""

    __slots__ = ("ring", "terms", "bideg")

    def __init__(self, ring: GradedRing, terms: Mapping[Mono, object], bideg: Optional[Bideg] = None):
        terms = _clean(terms, ring.field)
        degs = {ring.bideg(m) for m in terms}
        if len(degs) > 1:
            raise PresentationError(f"inhomogeneous element with bidegrees {sorted(degs)}")
        if degs:
            (found,) = degs
            if bideg is not None and bideg != found:
                raise PresentationError(f"element has bidegree {found}, expected {bideg}")
            bideg = found
        self.ring = ring
        self.terms = terms
        self.bideg = bideg if bideg is not None else (0, 0)

    @property
    def deg(self) -> int:
        return self.bideg[0]

    @property
    def wt(self) -> int:
        return self.bideg[1]

    def is_zero(self) -> bool:
        return not self.terms

    def _same(self, other: "Element") -> None:
        if other.ring is not self.ring:
            raise PresentationError("elements live over different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.ring, out, self.bideg if not other.terms else other.bideg)

    def __neg__(self) -> "Element":
        return Element(self.ring, {m: -c for m, c in self.terms.items()}, self.bideg)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        return Element(self.ring, {m: c * v for m, v in self.terms.items()}, self.bideg)

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._same(other)
        bd = (self.deg + other.deg, self.wt + other.wt)
        return Element(self.ring, self.ring.mul_terms(self.terms, other.terms), bd)

    __rmul__ = scale

    def d(self) -> "Element":
        return Element(self.ring, self.ring.d_terms(self.terms), (self.deg + 1, self.wt))

    def __eq__(self, other):
        return isinstance(other, Element) and other.ring is self.ring and other.terms == self.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        return f"Element({format_terms(self.ring, self.terms)})"

    def __str__(self):
        return format_terms(self.ring, self.terms)


def format_terms(ring: GradedRing, terms: Mapping[Mono, object]) -> str:
    names = getattr(ring, "names", None)
    if not terms:
        return "0"
    parts = []
    for m in sorted(terms, reverse=True):
        c = terms[m]
        factors = []
        for i, e in enumerate(m):
            if e:
                nm = names[i] if names else f"g{i}"
                factors.append(nm if e == 1 else f"{nm}^{e}")
        if not factors:
            body = str(abs(c)) if c < 0 else str(c)
        elif c in (1, -1):
            body = "*".join(factors)
        else:
            body = f"{abs(c) if c < 0 else c}*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


DiffSpec = Union[None, int, str, Element, Mapping[Mono, object]]


class DGAlgebra(GradedRing):
    """Semi-free graded-commutative DG-algebra ``k[g_0, ..., g_{N-1}]``."""

    def __init__(
        self,
        gens: Sequence[GeneratorSpec],
        diffs: Sequence[Mapping[Mono, object]],
        field: Field = QQ,
        base: Optional["DGAlgebra"] = None,
        name: str = "",
    ):
        self.gens = tuple(gens)
        self.field = field
        self.base = base
        self.name = name
        self.names = [g.name for g in self.gens]
        if len(set(self.names)) != len(self.names):
            raise PresentationError(f"duplicate generator names in {self.names}")
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        self.odd = tuple(i for i, g in enumerate(self.gens) if g.deg % 2)
        self._odd_set = frozenset(self.odd)
        self._mul_cache: Dict[Tuple[Mono, Mono], Terms] = {}
        self._d_cache: Dict[Mono, Terms] = {}
        self._weight_tables: Dict[int, Dict[int, List[Mono]]] = {}
        n = len(self.gens)
        self._diffs: List[Terms] = []
        for i, (g, dg) in enumerate(zip(self.gens, diffs)):
            dg = _clean(dg, field)
            for m in dg:
                if len(m) != n:
                    raise PresentationError(f"d({g.name}) has a monomial of the wrong length")
                if any(m[j] for j in range(i, n)):
                    raise PresentationError(f"d({g.name}) involves {g.name} or a later generator")
                if self.bideg(m) != (g.deg + 1, g.wt):
                    raise PresentationError(
                        f"d({g.name}) has bidegree {self.bideg(m)}, expected {(g.deg + 1, g.wt)}"
                    )
                if any(m[j] > 1 for j in self.odd):
                    raise PresentationError(f"d({g.name}) contains an odd square")
            self._diffs.append(dg)
        for i, g in enumerate(self.gens):
            dd = self.d_terms(self._diffs[i])
            if dd:
                raise PresentationError(f"d(d({g.name})) = {format_terms(self, dd)} is not zero")

    def __repr__(self):
        return f"DGAlgebra({self.name or '?'}: {', '.join(f'{g.name}{(g.deg, g.wt)}' for g in self.gens)})"

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def bideg(self, m: Mono) -> Bideg:
        deg = wt = 0
        for g, e in zip(self.gens, m):
            if e:
                deg += g.deg * e
                wt += g.wt * e
        return deg, wt

    def one_key(self) -> Mono:
        return (0,) * len(self.gens)

    def gen(self, name: str) -> Element:
        i = self.index[name]
        m = [0] * len(self.gens)
        m[i] = 1
        return Element(self, {tuple(m): 1})

    def diff_of(self, name: str) -> Element:
        g = self.gens[self.index[name]]
        return Element(self, self._diffs[self.index[name]], (g.deg + 1, g.wt))

    def gen_diff_terms(self, i: int) -> Terms:
        return self._diffs[i]

    def _weight_table(self, wt: int) -> Dict[int, List[Mono]]:
        table = self._weight_tables.get(wt)
        if table is not None:
            return table
        gens = self.gens
        n = len(gens)
        table = {}
        exps = [0] * n

        def rec(i: int, rem: int, deg: int):
            if i == n:
                if rem == 0:
                    table.setdefault(deg, []).append(tuple(exps))
                return
            g = gens[i]
            top = rem // g.wt
            if i in self._odd_set:
                top = min(top, 1)
            for e in range(top, -1, -1):
                exps[i] = e
                rec(i + 1, rem - e * g.wt, deg + e * g.deg)
            exps[i] = 0

        if wt >= 0:
            rec(0, wt, 0)
        self._weight_tables[wt] = table
        return table

    def basis(self, deg: int, wt: int) -> List[Mono]:
        return self._weight_table(wt).get(deg, [])

    def degree_bounds(self, wt: int) -> Tuple[int, int]:
        table = self._weight_table(wt)
        if not table:
            return (1, 0)
        return min(table), max(table)

    def mul_mono(self, a: Mono, b: Mono) -> Terms:
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        sign = 1
        odd = self.odd
        result: Terms
        clash = False
        for i in odd:
            if a[i] and b[i]:
                clash = True
                break
        if clash:
            result = {}
        else:
            # move each odd factor of b left past the odd factors of a with larger index
            count = 0
            for j in odd:
                if b[j]:
                    for i in odd:
                        if i > j and a[i]:
                            count += 1
            if count % 2:
                sign = -1
            result = {tuple(x + y for x, y in zip(a, b)): self.field.norm(sign)}
        self._mul_cache[key] = result
        return result

    def d_mono(self, m: Mono) -> Terms:
        hit = self._d_cache.get(m)
        if hit is not None:
            return hit
        n = len(m)
        out: Terms = {}
        prefix_deg = 0
        for i, e in enumerate(m):
            if not e:
                continue
            dg = self._diffs[i]
            if dg:
                left = m[:i] + (e - 1,) + (0,) * (n - i - 1)
                right = (0,) * (i + 1) + m[i + 1:]
                coef = e if prefix_deg % 2 == 0 else -e
                for t, c in dg.items():
                    for lt, c1 in self.mul_mono(left, t).items():
                        for rt, c2 in self.mul_mono(lt, right).items():
                            out[rt] = out.get(rt, 0) + coef * c * c1 * c2
            prefix_deg += self.gens[i].deg * e
        out = _clean(out, self.field)
        self._d_cache[m] = out
        return out

    def ideal_generators(self) -> List[Element]:
        return [self.gen(g.name) for g in self.gens if g.deg == 0]

    def parse(self, text: str) -> Element:
        """Evaluate an expression like ``x^2 - 2*e*y`` in this algebra."""
        total: Terms = {}
        bideg = None
        for coeff, factors in parse_expr(text):
            term: Terms = {self.one_key(): 1}
            for nm, power in factors:
                if nm not in self.index:
                    raise PresentationError(f"unknown generator {nm!r}")
                g = self.gen(nm).terms
                for _ in range(power):
                    term = self.mul_terms(term, g)
            for mono, c in term.items():
                total[mono] = total.get(mono, 0) + coeff * c
        return Element(self, total, bideg)

    def coerce(self, x: DiffSpec, bideg: Optional[Bideg] = None) -> Element:
        if x is None or (isinstance(x, int) and x == 0):
            return Element(self, {}, bideg)
        if isinstance(x, str):
            el = self.parse(x)
            return Element(self, el.terms, bideg)
        if isinstance(x, Element):
            if x.ring is self:
                return x
            src = x.ring
            if isinstance(src, DGAlgebra) and is_extension_of(self, src):
                return Element(self, pad_terms(x.terms, self.ngens), bideg)
            raise PresentationError("element belongs to an unrelated algebra")
        return Element(self, {pad(m, self.ngens): c for m, c in x.items()}, bideg)


def pad(m: Mono, n: int) -> Mono:
    return m + (0,) * (n - len(m)) if len(m) < n else m


def pad_terms(terms: Mapping[Mono, object], n: int) -> Terms:
    return {pad(m, n): c for m, c in terms.items()}


def _as_specs(gens: Iterable) -> List[GeneratorSpec]:
    out = []
    for g in gens:
        out.append(g if isinstance(g, GeneratorSpec) else GeneratorSpec(*g))
    return out


def new_algebra(
    gens: Iterable,
    diffs: Optional[Mapping[str, DiffSpec]] = None,
    field: Field = QQ,
    name: str = "",
    base: Optional[DGAlgebra] = None,
) -> DGAlgebra:
    """Build and validate a DG-algebra; ``diffs`` maps generator names to
    expressions (strings, elements over an earlier algebra, or term dicts)."""
    specs = _as_specs(gens)
    diffs = dict(diffs or {})
    names = {g.name for g in specs}
    for nm in diffs:
        if nm not in names:
            raise PresentationError(f"differential given for unknown generator {nm!r}")
    skeleton = DGAlgebra(specs, [{}] * len(specs), field, name=name)
    terms = []
    for g in specs:
        el = skeleton.coerce(diffs.get(g.name), None)
        if not el.is_zero() and el.bideg != (g.deg + 1, g.wt):
            raise PresentationError(f"d({g.name}) has bidegree {el.bideg}, expected {(g.deg + 1, g.wt)}")
        terms.append(el.terms)
    return DGAlgebra(specs, terms, field, base=base, name=name)


def ground(field: Field = QQ) -> DGAlgebra:
    """The base field as a DG-algebra with no generators."""
    return DGAlgebra([], [], field, name="k")


def is_extension_of(B: DGAlgebra, A: DGAlgebra) -> bool:
    """True if A's presentation is a prefix of B's."""
    if A is B:
        return True
    if A.field != B.field or A.ngens > B.ngens:
        return False
    for i, g in enumerate(A.gens):
        if B.gens[i] != g:
            return False
        if pad_terms(A.gen_diff_terms(i), B.ngens) != B.gen_diff_terms(i):
            return False
    return True


def multiply(A: GradedRing, x: Element, y: Element) -> Element:
    if x.ring is not A or y.ring is not A:
        raise PresentationError("elements live over a different algebra")
    return x * y


def differential(A: GradedRing, x: Element) -> Element:
    if x.ring is not A:
        raise PresentationError("element lives over a different algebra")
    return x.d()


def basis(A: GradedRing, deg: int, wt: int) -> List[Mono]:
    return A.basis(deg, wt)


# ---------------------------------------------------------------------------
# ring maps


class RingMap:
    """Map of graded rings given on monomials."""

    def __init__(self, source: GradedRing, target: GradedRing, name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        self._cache: Dict[Mono, Terms] = {}

    def _image(self, m: Mono) -> Terms:
        raise NotImplementedError

    def apply_mono(self, m: Mono) -> Terms:
        hit = self._cache.get(m)
        if hit is None:
            hit = self._image(m)
            self._cache[m] = hit
        return hit

    def apply_terms(self, x: Mapping[Mono, object]) -> Terms:
        out: Terms = {}
        for m, c in x.items():
            for t, v in self.apply_mono(m).items():
                out[t] = out.get(t, 0) + c * v
        return _clean(out, self.target.field)

    def __call__(self, x: Element) -> Element:
        return Element(self.target, self.apply_terms(x.terms), x.bideg)


class AlgebraMap(RingMap):
    """Map of DG-algebras determined by generator images."""

    def __init__(self, source: DGAlgebra, target: DGAlgebra, images: Mapping[str, DiffSpec], name: str = ""):
        super().__init__(source, target, name)
        self.images: List[Element] = []
        for g in source.gens:
            img = images.get(g.name)
            el = target.coerce(img, (g.deg, g.wt))
            self.images.append(el)

    def _image(self, m: Mono) -> Terms:
        tgt = self.target
        out: Terms = {tgt.one_key(): 1}
        for i, e in enumerate(m):
            for _ in range(e):
                out = tgt.mul_terms(out, self.images[i].terms)
                if not out:
                    return {}
        return out

    def image_of(self, name: str) -> Element:
        return self.images[self.source.index[name]]

    def violations(self) -> List[str]:
        """Generators on which bidegree or the chain-map law fails."""
        bad = []
        src, tgt = self.source, self.target
        for i, g in enumerate(src.gens):
            img = self.images[i]
            if not img.is_zero() and img.bideg != (g.deg, g.wt):
                bad.append(f"{g.name}: image has bidegree {img.bideg}, expected {(g.deg, g.wt)}")
                continue
            lhs = tgt.d_terms(img.terms)
            rhs = self.apply_terms(src.gen_diff_terms(i))
            if lhs != rhs:
                bad.append(
                    f"{g.name}: d(image) = {format_terms(tgt, lhs)} but image(d) = {format_terms(tgt, rhs)}"
                )
        return bad

    def compose(self, then: "AlgebraMap") -> "AlgebraMap":
        """``then ∘ self``."""
        if then.source is not self.target:
            raise PresentationError("maps are not composable")
        return AlgebraMap(
            self.source, then.target, {g.name: then(img) for g, img in zip(self.source.gens, self.images)}
        )


class FunctionMap(RingMap):
    def __init__(self, source: GradedRing, target: GradedRing, fn: Callable[[Mono], Terms], name: str = ""):
        super().__init__(source, target, name)
        self._fn = fn

    def _image(self, m: Mono) -> Terms:
        return self._fn(m)


def identity_map(A: DGAlgebra) -> AlgebraMap:
    return AlgebraMap(A, A, {g.name: A.gen(g.name) for g in A.gens}, name="id")


def inclusion(A: DGAlgebra, B: DGAlgebra) -> AlgebraMap:
    if not is_extension_of(B, A):
        raise PresentationError(f"{B.name or 'target'} is not an extension of {A.name or 'source'}")
    return AlgebraMap(A, B, {g.name: B.gen(g.name) for g in A.gens}, name="incl")


def augmentation(R: GradedRing, k: Optional[DGAlgebra] = None) -> RingMap:
    """Projection of a connected ring onto its weight-0 part."""
    k = k or ground(R.field)
    one = R.one_key()

    def fn(m):
        return {(): 1} if m == one else {}

    return FunctionMap(R, k, fn, name="aug")


@dataclass
class MapCheck:
    valid: bool
    problems: List[str]


def check_map(f: AlgebraMap, retraction: Optional[AlgebraMap] = None) -> MapCheck:
    """Validate a DG-algebra map and optionally a retraction ``retraction ∘ f = id``."""
    problems = f.violations()
    if retraction is not None:
        problems += [f"retraction leg: {p}" for p in retraction.violations()]
        if retraction.source is not f.target or retraction.target is not f.source:
            problems.append("retraction does not go back to the source")
        else:
            A = f.source
            for g in A.gens:
                back = retraction(f.image_of(g.name))
                if back != A.gen(g.name):
                    problems.append(f"retraction sends {g.name} to {back}")
    return MapCheck(not problems, problems)


# ---------------------------------------------------------------------------
# constructions


def extend(
    A: DGAlgebra, newgens: Iterable, newdiffs: Optional[Mapping[str, DiffSpec]] = None, name: str = ""
) -> Tuple[DGAlgebra, AlgebraMap]:
    """Semi-free extension of ``A`` by new generators."""
    specs = list(A.gens) + _as_specs(newgens)
    diffs: Dict[str, DiffSpec] = {g.name: A.gen_diff_terms(i) for i, g in enumerate(A.gens)}
    for nm, v in (newdiffs or {}).items():
        if nm in A.index:
            raise PresentationError(f"cannot redefine d({nm}) of the base algebra")
        diffs[nm] = v
    B = new_algebra(specs, diffs, A.field, name=name, base=A)
    return B, inclusion(A, B)


def new_generators(B: DGAlgebra, A: DGAlgebra) -> List[int]:
    if not is_extension_of(B, A):
        raise PresentationError(f"{B.name or 'algebra'} is not an extension of {A.name or 'base'}")
    return list(range(A.ngens, B.ngens))


def tensor_over(
    A: DGAlgebra, B: DGAlgebra, C: DGAlgebra, suffixes: Tuple[str, str] = ("1", "2"), name: str = ""
) -> Tuple[DGAlgebra, AlgebraMap, AlgebraMap]:
    """``B ⊗_A C`` for semi-free extensions ``B``, ``C`` of ``A``."""
    nb = new_generators(B, A)
    nc = new_generators(C, A)
    na = A.ngens
    specs = list(A.gens)
    taken = set(A.names)
    rename_b, rename_c = {}, {}
    for which, src, idxs, ren in ((0, B, nb, rename_b), (1, C, nc, rename_c)):
        for i in idxs:
            g = src.gens[i]
            nm = g.name + suffixes[which]
            while nm in taken:
                nm += "'"
            taken.add(nm)
            ren[i] = len(specs)
            specs.append(GeneratorSpec(nm, g.deg, g.wt))
    n = len(specs)

    def transport(terms: Terms, ren: Dict[int, int]) -> Terms:
        out = {}
        for m, c in terms.items():
            t = [0] * n
            for i, e in enumerate(m):
                if e:
                    t[i if i < na else ren[i]] = e
            out[tuple(t)] = c
        return out

    diffs = [pad_terms(A.gen_diff_terms(i), n) for i in range(na)]
    diffs += [transport(B.gen_diff_terms(i), rename_b) for i in nb]
    diffs += [transport(C.gen_diff_terms(i), rename_c) for i in nc]
    E = DGAlgebra(specs, diffs, A.field, base=A, name=name or f"{B.name}⊗{C.name}")
    iota_b = AlgebraMap(B, E, {g.name: E.gen(specs[i if i < na else rename_b[i]].name) for i, g in enumerate(B.gens)})
    iota_c = AlgebraMap(C, E, {g.name: E.gen(specs[i if i < na else rename_c[i]].name) for i, g in enumerate(C.gens)})
    return E, iota_b, iota_c


# ---------------------------------------------------------------------------
# H^0 as a stratified quotient ring


class H0Ring(GradedRing):
    """``A^0 / (d(A^{-1}) + extra)`` computed one weight at a time.

    Keys are the coset-representative (standard) monomials of ``A``.
    """

    def __init__(self, algebra: DGAlgebra, extra: Sequence[Element] = (), name: str = ""):
        self.algebra = algebra
        self.field = algebra.field
        self.names = algebra.names
        self.name = name or f"H0({algebra.name})"
        self.extra = []
        for r in extra:
            r = algebra.coerce(r)
            if not r.is_zero() and r.deg != 0:
                raise PresentationError("extra relations must have degree 0")
            if not r.is_zero():
                self.extra.append(r)
        self._strata: Dict[int, Tuple[List[Mono], Dict[Mono, int], Echelon, List[Mono]]] = {}
        self._mul: Dict[Tuple[Mono, Mono], Terms] = {}

    def _stratum(self, wt: int):
        hit = self._strata.get(wt)
        if hit is not None:
            return hit
        A = self.algebra
        amb = A.basis(0, wt)
        idx = {m: i for i, m in enumerate(amb)}
        N = len(amb)
        ech = Echelon(self.field)

        def add(terms):
            ech.add({N - 1 - idx[m]: c for m, c in terms.items()})

        for m in A.basis(-1, wt):
            add(A.d_mono(m))
        for r in self.extra:
            for m in A.basis(0, wt - r.wt):
                add(A.mul_terms({m: 1}, r.terms))
        piv = {N - 1 - c for c in ech.rows}
        std = [m for i, m in enumerate(amb) if i not in piv]
        hit = (amb, idx, ech, std)
        self._strata[wt] = hit
        return hit

    def relation_rank(self, wt: int) -> int:
        return self._stratum(wt)[2].rank

    def hilbert(self, wt: int) -> int:
        return len(self._stratum(wt)[3])

    def nf_terms(self, terms: Mapping[Mono, object]) -> Terms:
        """Normal form of a degree-0 homogeneous combination of monomials."""
        if not terms:
            return {}
        A = self.algebra
        wts = {A.bideg(m) for m in terms}
        out: Terms = {}
        for deg, wt in wts:
            part = {m: c for m, c in terms.items() if A.bideg(m) == (deg, wt)}
            if deg != 0:
                continue
            amb, idx, ech, _ = self._stratum(wt)
            N = len(amb)
            res = ech.residual({N - 1 - idx[m]: c for m, c in part.items()})
            for c, v in res.items():
                out[amb[N - 1 - c]] = v
        return out

    def nf(self, x: Element) -> Element:
        return Element(self, self.nf_terms(self.algebra.coerce(x).terms), x.bideg if x.deg == 0 else (0, x.wt))

    def bideg(self, m: Mono) -> Bideg:
        return self.algebra.bideg(m)

    def one_key(self) -> Mono:
        return self.algebra.one_key()

    def basis(self, deg: int, wt: int) -> List[Mono]:
        if deg != 0 or wt < 0:
            return []
        return self._stratum(wt)[3]

    def mul_mono(self, a: Mono, b: Mono) -> Terms:
        key = (a, b)
        hit = self._mul.get(key)
        if hit is None:
            hit = self.nf_terms(self.algebra.mul_mono(a, b))
            self._mul[key] = hit
        return hit

    def d_mono(self, m: Mono) -> Terms:
        return {}

    def degree_bounds(self, wt: int) -> Tuple[int, int]:
        return (0, 0) if self.basis(0, wt) else (1, 0)

    def ideal_generators(self) -> List[Element]:
        out = []
        for g in self.algebra.ideal_generators():
            nfg = self.nf_terms(g.terms)
            if nfg:
                out.append(Element(self, nfg, (0, g.wt)))
        return out

    def element(self, terms, bideg=None) -> Element:
        return Element(self, self.nf_terms(terms), bideg)


def h0(A: DGAlgebra, wt_cap: int = 0, extra: Sequence[Element] = ()) -> H0Ring:
    """H^0 of ``A``; strata up to ``wt_cap`` are computed eagerly, the rest lazily."""
    R = H0Ring(A, extra)
    for w in range(wt_cap + 1):
        R.hilbert(w)
    return R


def h0_projection(A: DGAlgebra, R: Optional[H0Ring] = None) -> RingMap:
    R = R or H0Ring(A)

    def fn(m):
        return R.nf_terms({m: 1}) if A.bideg(m)[0] == 0 else {}

    return FunctionMap(A, R, fn, name="h0")


def h0_map(f: AlgebraMap, RA: H0Ring, RB: H0Ring) -> RingMap:
    """``H^0(f)`` between stratified quotient rings."""

    def fn(m):
        return RB.nf_terms(f.apply_mono(m))

    return FunctionMap(RA, RB, fn, name="H0")
