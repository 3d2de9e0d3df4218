"""Exact linear algebra over the rationals and prime fields.

Vectors are sparse dicts ``{index: value}`` with zero entries absent.  Over
the rationals values are ``int`` or ``Fraction``; over F_p they are ints in
``[0, p)``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Vector = Dict[int, object]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """Either the rationals (``p is None``) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: Optional[int] = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    def spec(self) -> str:
        return "Q" if self.p is None else f"Fp {self.p}"

    def norm(self, x):
        """Canonical representative of ``x``."""
        p = self.p
        if p is None:
            if type(x) is Fraction and x.denominator == 1:
                return x.numerator
            return x
        if type(x) is Fraction:
            return x.numerator * pow(x.denominator, -1, p) % p
        return x % p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("division by zero in field")
        if self.p is None:
            return self.norm(Fraction(1, 1) / x)
        return pow(x, -1, self.p)

    def div(self, x, y):
        return self.norm(x * self.inv(y)) if self.p is not None else self.norm(Fraction(x) / y)


QQ = Field(None)


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field."""

    value: object
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.norm(self.value))

    def _check(self, other: "Scalar") -> None:
        if other.field != self.field:
            raise ValueError(f"mixed fields {self.field} and {other.field}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.value + other.value, self.field)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.value - other.value, self.field)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.value * other.value, self.field)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field.div(self.value, other.value), self.field)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.value, self.field)

    def __bool__(self):
        return bool(self.value)


@dataclass(frozen=True)
class StratumMatrix:
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], object]
    field: Field = QQ

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            v = self.field.norm(v)
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_scalars(cls, rows: int, cols: int, entries: Mapping[Tuple[int, int], Scalar]) -> "StratumMatrix":
        fields = {s.field for s in entries.values()}
        if len(fields) > 1:
            raise ValueError(f"mixed field specs among entries: {sorted(map(repr, fields))}")
        fld = fields.pop() if fields else QQ
        return cls(rows, cols, {k: s.value for k, s in entries.items()}, fld)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], field: Field = QQ) -> "StratumMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r) if v}, field)

    def row_vectors(self) -> List[Vector]:
        out: List[Vector] = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def dense(self) -> List[List]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out


@dataclass(frozen=True)
class RrefResult:
    rank: int
    kernel: List[List]
    pivots: List[int]
    reduced: List[Vector] = dc_field(repr=False, default_factory=list)


def rref(m: StratumMatrix) -> RrefResult:
    """Reduced row echelon form with leftmost-nonzero / smallest-row pivoting."""
    fld = m.field
    rows = [dict(r) for r in m.row_vectors()]
    pivots: List[int] = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, len(rows)) if rows[i].get(c)), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = fld.inv(rows[r][c])
        rows[r] = {k: fld.norm(v * inv) for k, v in rows[r].items()}
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i].get(c):
                a = rows[i][c]
                row = rows[i]
                for k, v in prow.items():
                    nv = fld.norm(row.get(k, 0) - a * v)
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    pivset = set(pivots)
    kernel = []
    for free in range(m.cols):
        if free in pivset:
            continue
        vec = [0] * m.cols
        vec[free] = 1
        for i, pc in enumerate(pivots):
            v = rows[i].get(free)
            if v:
                vec[pc] = fld.norm(-v)
        kernel.append(vec)
    return RrefResult(len(pivots), kernel, pivots, rows[: len(pivots)])


class Echelon:
    """Incremental row-echelon basis of a subspace, pivot = smallest column.

    Over the rationals rows are kept integral (fraction-free elimination);
    over F_p rows are normalized so the pivot is 1.  With ``track=True`` each
    stored row remembers its expression in the inserted vectors, which gives
    kernels and coordinates.
    """

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.track = track
        self.rows: Dict[int, Vector] = {}
        self.combos: Dict[int, Dict[object, object]] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _prepare(self, vec: Mapping[int, object]) -> Tuple[object, Vector]:
        fld = self.field
        if fld.p is not None:
            p = fld.p
            return 1, {k: v % p for k, v in vec.items() if v % p}
        den = 1
        for v in vec.values():
            if type(v) is Fraction and v.denominator != 1:
                den = den * v.denominator // gcd(den, v.denominator)
        if den == 1:
            return 1, {k: int(v) for k, v in vec.items() if v}
        return den, {k: int(v * den) for k, v in vec.items() if v}

    def reduce(self, vec: Mapping[int, object]):
        """Return ``(scale, residual, coeffs)`` with
        ``scale*vec - sum(coeffs[c] * rows[c]) == residual`` and the residual
        vanishing on every pivot column."""
        scale, v = self._prepare(vec)
        rows = self.rows
        coeffs: Dict[int, object] = {}
        p = self.field.p
        heap = [c for c in v if c in rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = v.get(c)
            if not a:
                continue
            row = rows[c]
            if p is not None:
                # pivot is 1
                for k, x in row.items():
                    nv = (v.get(k, 0) - a * x) % p
                    if nv:
                        if k not in v and k in rows:
                            heapq.heappush(heap, k)
                        v[k] = nv
                    else:
                        v.pop(k, None)
                if self.track:
                    coeffs[c] = (coeffs.get(c, 0) + a) % p
                continue
            piv = row[c]
            g = gcd(a, piv)
            mp, ma = piv // g, a // g
            if mp < 0:
                mp, ma = -mp, -ma
            if mp != 1:
                for k in v:
                    v[k] *= mp
                scale *= mp
                if self.track:
                    for k in coeffs:
                        coeffs[k] *= mp
            for k, x in row.items():
                nv = v.get(k, 0) - ma * x
                if nv:
                    if k not in v and k in rows:
                        heapq.heappush(heap, k)
                    v[k] = nv
                else:
                    v.pop(k, None)
            if self.track:
                coeffs[c] = coeffs.get(c, 0) + ma
        return scale, v, coeffs

    def add(self, vec: Mapping[int, object], tag: object = None) -> bool:
        """Insert ``vec``; return True if it was independent."""
        scale, res, coeffs = self.reduce(vec)
        if not res:
            return False
        if self.track:
            combo: Dict[object, object] = {tag: scale}
            for c, a in coeffs.items():
                for t, x in self.combos[c].items():
                    combo[t] = combo.get(t, 0) - a * x
            combo = {t: x for t, x in combo.items() if x}
        piv = min(res)
        p = self.field.p
        if p is not None:
            inv = pow(res[piv], -1, p)
            if inv != 1:
                res = {k: x * inv % p for k, x in res.items()}
                if self.track:
                    combo = {t: x * inv % p for t, x in combo.items()}
        elif not self.track:
            g = 0
            for x in res.values():
                g = gcd(g, x)
                if g == 1:
                    break
            if res[piv] < 0:
                g = -g
            if g != 1:
                res = {k: x // g for k, x in res.items()}
        self.rows[piv] = res
        if self.track:
            self.combos[piv] = combo
        return True

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self.reduce(vec)[1]

    def relation(self, vec: Mapping[int, object], tag: object) -> Optional[Dict[object, object]]:
        """If ``vec`` is in the span, the linear relation ``scale*tag - ...``
        among inserted vectors (by tag) that witnesses it; else None."""
        scale, res, coeffs = self.reduce(vec)
        if res:
            return None
        rel: Dict[object, object] = {tag: scale}
        for c, a in coeffs.items():
            for t, x in self.combos[c].items():
                rel[t] = rel.get(t, 0) - a * x
        fld = self.field
        return {t: fld.norm(x) for t, x in rel.items() if fld.norm(x)}

    def expand(self, vec: Mapping[int, object]) -> Optional[Dict[object, object]]:
        """Exact coefficients expressing ``vec`` in the inserted vectors."""
        scale, res, coeffs = self.reduce(vec)
        if res:
            return None
        fld = self.field
        out: Dict[object, object] = {}
        for c, a in coeffs.items():
            for t, x in self.combos[c].items():
                out[t] = out.get(t, 0) + a * x
        inv = fld.inv(fld.norm(scale))
        return {t: fld.norm(x * inv) for t, x in out.items() if fld.norm(x * inv)}

    def residual(self, vec: Mapping[int, object]) -> Vector:
        """Exact normal form of ``vec`` modulo the span (pivot columns cleared)."""
        scale, res, _ = self.reduce(vec)
        fld = self.field
        if scale == 1:
            return {k: fld.norm(x) for k, x in res.items()}
        return {k: fld.norm(Fraction(x, scale)) for k, x in res.items()}


def rank_of(vectors: Iterable[Mapping[int, object]], field: Field) -> int:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return ech.rank


def rank(m: StratumMatrix) -> int:
    return rank_of(m.row_vectors(), m.field)


def kernel_of_rows(vectors: Sequence[Mapping[int, object]], field: Field) -> List[Dict[int, object]]:
    """Basis of ``{c : sum_i c_i * vectors[i] == 0}`` as sparse dicts over i."""
    ech = Echelon(field, track=True)
    kernel = []
    for i, v in enumerate(vectors):
        if not ech.add(v, tag=i):
            rel = ech.relation(v, tag=i)
            kernel.append(rel)
    return kernel


def quotient_basis(sub: Sequence[Sequence], ambient_dim: int, field: Field = QQ) -> List[int]:
    """Standard-basis indices completing ``sub`` to the ambient space,
    chosen greedily from the smallest index."""
    ech = Echelon(field)
    for vec in sub:
        if len(vec) != ambient_dim:
            raise ValueError(f"vector of length {len(vec)} in ambient dimension {ambient_dim}")
        # reversed columns: smallest-column pivots become largest-index pivots
        ech.add({ambient_dim - 1 - i: x for i, x in enumerate(vec) if x})
    pivots = {ambient_dim - 1 - c for c in ech.rows}
    return [i for i in range(ambient_dim) if i not in pivots]
