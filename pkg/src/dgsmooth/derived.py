"""Koszul algebras, reductions to H^0, diagonals of flat extensions."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

from .cdga import (
    AlgebraMap,
    DGAlgebra,
    Element,
    H0Ring,
    PresentationError,
    check_map,
    extend,
    h0_map,
    h0_projection,
    identity_map,
    is_extension_of,
    new_generators,
    tensor_over,
)
from .dgmod import CohomologyTable, SemiFreeModule, Window, cohomology, tensor_module


def _fresh(A: DGAlgebra, base: str) -> str:
    nm = base
    while nm in A.index:
        nm += "'"
    return nm


def koszul(
    A: DGAlgebra, elems: Sequence, normalize: bool = True, name: str = ""
) -> Tuple[DGAlgebra, AlgebraMap]:
    """Adjoin exterior generators ``ξ_i`` of degree -1 with ``d ξ_i = lift(a_i)``.

    With ``normalize`` the lift is the H^0 normal form of the given
    representative; otherwise the representative itself is used.
    """
    elems = [A.coerce(a) for a in elems]
    if not elems:
        return A, identity_map(A)
    R = H0Ring(A) if normalize else None
    gens, diffs = [], {}
    for i, a in enumerate(elems):
        if a.wt < 1:
            raise PresentationError(f"Koszul element {a} needs positive weight")
        if a.deg != 0:
            raise PresentationError(f"Koszul element {a} does not have degree 0")
        nm = _fresh(A, f"ξ{i + 1}")
        gens.append((nm, -1, a.wt))
        lift = a if R is None else Element(A, R.nf_terms(a.terms), a.bideg)
        diffs[nm] = lift.terms
    K, kappa = extend(A, gens, diffs, name=name or f"K({A.name})")
    return K, kappa


def reduction(M: SemiFreeModule, window: Window, R: Optional[H0Ring] = None) -> CohomologyTable:
    """Cohomology of ``M ⊗_A H^0(A)``."""
    A = M.ring
    R = R or H0Ring(A)
    return cohomology(tensor_module(M, h0_projection(A, R)), window)


def reduced_module(M: SemiFreeModule, R: Optional[H0Ring] = None) -> SemiFreeModule:
    A = M.ring
    R = R or H0Ring(A)
    return tensor_module(M, h0_projection(A, R))


@dataclass
class FlatMapWitness:
    phi: AlgebraMap
    tag: str  # "free-extension" or "user-claimed"
    battery: List[str] = dc_field(default_factory=list)


def is_free_extension(phi: AlgebraMap) -> bool:
    """``B = A⟨free generators⟩`` with ``d`` of each new generator inside ``A``
    and every new generator of degree 0 (so the extension is flat)."""
    A, B = phi.source, phi.target
    if not is_extension_of(B, A):
        return False
    if any(phi.image_of(g.name) != B.gen(g.name) for g in A.gens):
        return False
    for i in new_generators(B, A):
        if B.gens[i].deg != 0 or B.gen_diff_terms(i):
            return False
    return True


def flat_witness(phi: AlgebraMap) -> FlatMapWitness:
    return FlatMapWitness(phi, "free-extension" if is_free_extension(phi) else "user-claimed")


@dataclass
class Diagonal:
    E: DGAlgebra
    iota1: AlgebraMap
    iota2: AlgebraMap
    delta: AlgebraMap
    phi: AlgebraMap


def diagonal_retraction(phi: AlgebraMap) -> Diagonal:
    """``B → B ⊗_A B → B`` for a semi-free extension ``B`` of ``A``."""
    A, B = phi.source, phi.target
    if not is_extension_of(B, A):
        raise PresentationError(f"{B.name} is not a semi-free extension of {A.name}")
    E, i1, i2 = tensor_over(A, B, B, name=f"{B.name}⊗{B.name}")
    images = {g.name: B.gen(g.name) for g in A.gens}
    for i in new_generators(B, A):
        g = B.gens[i]
        images[E.names[_gen_index(i1, g.name)]] = B.gen(g.name)
        images[E.names[_gen_index(i2, g.name)]] = B.gen(g.name)
    delta = AlgebraMap(E, B, images, name="Δ")
    chk = check_map(i1, delta)
    if not chk.valid:
        raise PresentationError("diagonal is not a retraction: " + "; ".join(chk.problems))
    return Diagonal(E, i1, i2, delta, phi)


def _gen_index(iota: AlgebraMap, name: str) -> int:
    img = iota.image_of(name)
    (m,) = img.terms
    return next(i for i, e in enumerate(m) if e)


def default_diagonal_sequence(D: Diagonal) -> List[Element]:
    """``g⊗1 - 1⊗g`` for every degree-0 new generator ``g`` of ``B``."""
    A, B = D.phi.source, D.phi.target
    R_E = H0Ring(D.E)
    R_B = H0Ring(B)
    H0d = h0_map(D.delta, R_E, R_B)
    out = []
    for i in new_generators(B, A):
        g = B.gens[i]
        if g.deg != 0:
            continue
        a = D.iota1.image_of(g.name) - D.iota2.image_of(g.name)
        if H0d.apply_terms(R_E.nf_terms(a.terms)):
            raise AssertionError(f"{a} is not in the kernel of H0(Δ)")
        out.append(a)
    return out


def in_kernel_h0(D: Diagonal, seq: Sequence[Element]) -> List[str]:
    """Names of sequence elements whose class survives under ``H^0(Δ)``."""
    R_B = H0Ring(D.phi.target)
    bad = []
    for a in seq:
        img = D.delta(a)
        if R_B.nf_terms(img.terms):
            bad.append(str(a))
    return bad
