"""Parser for element expressions such as ``2*x^2*e - 1/3*y + 1``.

Juxtaposition is not multiplication: factors must be joined by ``*``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

Term = Tuple[Fraction, List[Tuple[str, int]]]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(\S))")


class ExprError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}")
        self.message = message
        self.pos = pos


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        else:
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def parse_expr(text: str) -> List[Term]:
    """Parse into a list of ``(coefficient, [(generator, power), ...])``."""
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    terms: List[Term] = []
    sign = 1
    first = True
    while True:
        kind, val, pos = peek()
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        elif not first:
            raise ExprError(f"expected '+' or '-', found {val!r}", pos)
        first = False
        coeff = Fraction(sign)
        factors: List[Tuple[str, int]] = []
        expect_factor = True
        while expect_factor:
            kind, val, pos = take()
            if kind == "num":
                num = Fraction(val)
                if peek()[0] == "op" and peek()[1] == "/":
                    take()
                    k2, v2, p2 = take()
                    if k2 != "num" or v2 == 0:
                        raise ExprError("expected nonzero denominator", p2)
                    num /= v2
                coeff *= num
            elif kind == "name":
                power = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    take()
                    k2, v2, p2 = take()
                    if k2 != "num":
                        raise ExprError("expected integer exponent", p2)
                    power = v2
                factors.append((val, power))
            else:
                raise ExprError(f"expected coefficient or generator, found {val!r}", pos)
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                take()
            elif kind in ("num", "name"):
                raise ExprError("implicit multiplication is not allowed; use '*'", pos)
            else:
                expect_factor = False
        terms.append((coeff, factors))
        if peek()[0] == "end":
            return terms
