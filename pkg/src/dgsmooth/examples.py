"""The standard small algebras and maps used throughout the tests and scenarios."""

from __future__ import annotations

from .cdga import AlgebraMap, DGAlgebra, extend, ground, inclusion, new_algebra
from .exactla import QQ, Field


def k(field: Field = QQ) -> DGAlgebra:
    return ground(field)


def P1(field: Field = QQ) -> DGAlgebra:
    """k[x]."""
    return new_algebra([("x", 0, 1)], field=field, name="P1")


def P2(field: Field = QQ) -> DGAlgebra:
    """k[x, y]."""
    return new_algebra([("x", 0, 1), ("y", 0, 1)], field=field, name="P2")


def K1(field: Field = QQ) -> DGAlgebra:
    """Koszul algebra of x over k[x]."""
    return new_algebra([("x", 0, 1), ("e", -1, 1)], {"e": "x"}, field=field, name="K1")


def D2(field: Field = QQ) -> DGAlgebra:
    """Koszul algebra of x^2 over k[x], a model of k[x]/(x^2)."""
    return new_algebra([("x", 0, 1), ("e", -1, 2)], {"e": "x^2"}, field=field, name="D2")


def AMP(field: Field = QQ) -> DGAlgebra:
    """k[u] with u^2 and u^3 killed freely; cohomology of amplitude one."""
    return new_algebra(
        [("u", 0, 1), ("e1", -1, 2), ("e2", -1, 3)], {"e1": "u^2", "e2": "u^3"}, field=field, name="AMP"
    )


def B_AMP(field: Field = QQ):
    """AMP[x] with its inclusion."""
    A = AMP(field)
    B, phi = extend(A, [("x", 0, 1)], name="B-AMP")
    return A, B, phi


def over_field(B: DGAlgebra) -> AlgebraMap:
    return inclusion(ground(B.field), B)


def smooth_maps(field: Field = QQ):
    """(label, φ) for the three smooth test maps."""
    _, _, amp = B_AMP(field)
    return [("k->k[x]", over_field(P1(field))), ("k->k[x,y]", over_field(P2(field))), ("AMP->B-AMP", amp)]
