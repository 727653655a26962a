from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from flagforge.errors import FieldError, ShapeMismatch
from flagforge.exactfield import (
    GF,
    QQ,
    Field,
    ScalarMatrix,
    kernel_basis,
    left_null_witness,
    rank,
    rref,
    solve,
)

small = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


def _matvec(rows, v, p=0):
    out = [sum(Fraction(a) * b for a, b in zip(row, v)) for row in rows]
    return [x % p for x in out] if p else out


@given(matrices())
def test_rref_matches_sympy(rows):
    R, piv, rk = rref(ScalarMatrix(QQ, rows))
    S, spiv = sympy.Matrix(rows).rref()
    assert list(piv) == list(spiv)
    assert rk == len(spiv)
    assert [[Fraction(x) for x in r] for r in R.rows] == [
        [Fraction(int(e.p), int(e.q)) for e in S.row(i)] for i in range(S.rows)
    ]


@given(matrices(), st.sampled_from([2, 3, 5, 7]))
def test_kernel_mod_p(rows, p):
    F = GF(p)
    m = ScalarMatrix(F, [[x % p for x in r] for r in rows])
    ker = kernel_basis(m)
    assert len(ker) + rank(m) == m.ncols
    for v in ker:
        assert all(x == 0 for x in _matvec(m.rows, v, p))


@given(matrices())
def test_kernel_over_q(rows):
    m = ScalarMatrix(QQ, rows)
    ker = kernel_basis(m)
    assert len(ker) == m.ncols - rank(m)
    for v in ker:
        assert all(x == 0 for x in _matvec(rows, v))


@given(matrices(), st.lists(small, min_size=6, max_size=6))
def test_solve_or_certify(rows, bfull):
    b = bfull[: len(rows)]
    m = ScalarMatrix(QQ, rows)
    x = solve(m, b)
    if x is not None:
        assert _matvec(rows, x) == [Fraction(v) for v in b]
    else:
        y = left_null_witness(QQ, m.sparse_rows(), m.ncols, b)
        assert y is not None
        for c in range(m.ncols):
            assert sum(Fraction(y[r]) * rows[r][c] for r in range(len(rows))) == 0
        assert sum(Fraction(a) * v for a, v in zip(y, b)) == 1


def test_inconsistent_system_small():
    m = ScalarMatrix(QQ, [[1, 1], [2, 2]])
    assert solve(m, [1, 3]) is None
    y = left_null_witness(QQ, m.sparse_rows(), 2, [1, 3])
    assert y is not None and y[0] * 1 + y[1] * 3 == 1


def test_field_coercion():
    F = GF(7)
    assert F(Fraction(1, 3)) == 5
    assert F("-2/5") == (-2 * pow(5, -1, 7)) % 7
    assert QQ("3/6") == Fraction(1, 2)
    assert F.inv(3) * 3 % 7 == 1
    with pytest.raises(FieldError):
        GF(6)
    with pytest.raises(FieldError):
        GF(5)(Fraction(1, 5))
    assert Field(7) is F


def test_shape_checks():
    with pytest.raises(ShapeMismatch):
        ScalarMatrix(QQ, [[1, 2], [3]])
    with pytest.raises(ShapeMismatch):
        solve(ScalarMatrix(QQ, [[1, 2]]), [1, 2])
