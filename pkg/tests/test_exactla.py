from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgsmooth.exactla import (
    QQ,
    Echelon,
    Field,
    Scalar,
    StratumMatrix,
    kernel_of_rows,
    quotient_basis,
    rank,
    rref,
)


def test_empty_matrix():
    r = rref(StratumMatrix(0, 0, {}))
    assert r.rank == 0 and r.kernel == []


def test_identity():
    r = rref(StratumMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert r.rank == 3 and r.kernel == [] and r.pivots == [0, 1, 2]


def test_rank_one_kernel():
    r = rref(StratumMatrix.from_dense([[1, 2], [2, 4]]))
    assert r.rank == 1
    assert r.kernel == [[-2, 1]]


def test_zero_entries_dropped():
    m = StratumMatrix(2, 2, {(0, 0): 0, (1, 1): 3})
    assert m.entries == {(1, 1): 3}


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        StratumMatrix.from_scalars(1, 2, {(0, 0): Scalar(1, QQ), (0, 1): Scalar(1, Field(5))})


def test_scalar_canonical_mod_p():
    assert Scalar(-1, Field(7)).value == 6
    with pytest.raises(ZeroDivisionError):
        Scalar(1, Field(7)) / Scalar(7, Field(7))
    with pytest.raises(ZeroDivisionError):
        Scalar(1) / Scalar(0)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        Field(6)


def test_quotient_basis_examples():
    assert quotient_basis([], 2) == [0, 1]
    assert quotient_basis([(1, 0)], 2) == [1]
    assert quotient_basis([(1, 1), (1, -1)], 2) == []


def test_quotient_basis_greedy_smallest():
    # span{e0 + e2}: e0 and e1 complete it; e2 is the pivot
    assert quotient_basis([(1, 0, 1)], 3) == [0, 1]
    assert quotient_basis([(0, 1, 1), (1, 0, 0)], 3) == [1]


def _brute_greedy(sub, n):
    def unit(c):
        return [int(j == c) for j in range(n)]

    chosen = []
    for i in range(n):
        before = rank(StratumMatrix.from_dense([list(v) for v in sub] + [unit(c) for c in chosen]))
        after = rank(StratumMatrix.from_dense([list(v) for v in sub] + [unit(c) for c in chosen + [i]]))
        if after > before:
            chosen.append(i)
    return chosen


small = st.integers(-3, 3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_plus_nullity(data):
    m = StratumMatrix.from_dense(data)
    r = rref(m)
    assert r.rank + len(r.kernel) == m.cols
    for v in r.kernel:
        for row in data:
            assert sum(Fraction(a) * b for a, b in zip(row, v)) == 0


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_idempotent(data):
    m = StratumMatrix.from_dense(data)
    r1 = rref(m)
    again = StratumMatrix(len(r1.reduced), m.cols, {(i, j): v for i, row in enumerate(r1.reduced) for j, v in row.items()})
    r2 = rref(again)
    assert (r2.rank, len(r2.kernel), r2.pivots) == (r1.rank, len(r1.kernel), r1.pivots)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_q_vs_fp(data):
    """Rank over Q equals rank over F_p for a large p (no elimination
    denominators reach 10007 at this size), and never exceeds it for small p."""
    q = rank(StratumMatrix.from_dense(data))
    assert rank(StratumMatrix.from_dense(data, Field(10007))) == q
    for p in (2, 3, 5):
        assert rank(StratumMatrix.from_dense(data, Field(p))) <= q


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_echelon_matches_rref(data):
    m = StratumMatrix.from_dense(data)
    ech = Echelon(QQ)
    for row in m.row_vectors():
        ech.add(row)
    assert ech.rank == rref(m).rank
    kern = kernel_of_rows(m.row_vectors(), QQ)
    assert len(kern) == m.rows - ech.rank
    for rel in kern:
        for j in range(m.cols):
            assert sum(c * Fraction(data[i][j]) for i, c in rel.items()) == 0


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4))
def test_quotient_basis_is_greedy(data):
    n = len(data[0])
    assert quotient_basis(data, n) == _brute_greedy(data, n)


@settings(max_examples=40, deadline=None)
@given(matrices(4, 5))
def test_expand_recovers_coordinates(data):
    ech = Echelon(QQ, track=True)
    rows = StratumMatrix.from_dense(data).row_vectors()
    kept = []
    for i, r in enumerate(rows):
        if ech.add(r, tag=i):
            kept.append(i)
    for r in rows:
        coeffs = ech.expand(r)
        assert coeffs is not None
        recon = {}
        for t, c in coeffs.items():
            for j, v in rows[t].items():
                recon[j] = recon.get(j, 0) + c * v
        assert {j: v for j, v in recon.items() if v} == {j: Fraction(v) for j, v in r.items() if v}
