"""Exact scalars over QQ or GF(p) and dense exact linear algebra.

Matrices are stored dense and row-major.  Elimination works on sparse
row dictionaries internally, which keeps the big but very sparse systems
coming out of endomorphism complexes cheap; the reduced row echelon form
is unique, so the internal representation never leaks into results.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import FieldError, ShapeMismatch

__all__ = [
    "Field",
    "QQ",
    "GF",
    "ScalarMatrix",
    "rref",
    "kernel_basis",
    "solve",
    "rank",
    "left_null_witness",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


class Field:
    """The rationals (characteristic 0) or a prime field GF(p)."""

    __slots__ = ("characteristic",)
    _cache: dict[int, "Field"] = {}

    def __new__(cls, characteristic: int = 0):
        cached = cls._cache.get(characteristic)
        if cached is not None:
            return cached
        if characteristic != 0:
            if not isinstance(characteristic, int) or not _is_prime(characteristic):
                raise FieldError(f"characteristic {characteristic!r} is not a prime")
            if characteristic >= 2**31:
                raise FieldError("prime characteristic must be below 2**31")
        obj = super().__new__(cls)
        obj.characteristic = characteristic
        cls._cache[characteristic] = obj
        return obj

    def __reduce__(self):
        return (Field, (self.characteristic,))

    def __repr__(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def __call__(self, value):
        """Coerce an int, Fraction or string like '3' or '-2/5' into the field."""
        p = self.characteristic
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return value % p if p else value
        if isinstance(value, Fraction):
            if p == 0:
                return value.numerator if value.denominator == 1 else value
            den = value.denominator % p
            if den == 0:
                raise FieldError(f"denominator of {value} vanishes mod {p}")
            return (value.numerator * pow(den, -1, p)) % p
        raise FieldError(f"cannot coerce {value!r} into {self!r}")

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        if p:
            return pow(a, -1, p)
        return 1 / Fraction(a) if isinstance(a, int) else 1 / a

    def normalize(self, a):
        p = self.characteristic
        if p:
            return a % p
        if isinstance(a, Fraction) and a.denominator == 1:
            return a.numerator
        return a

    def elements(self):
        """All field elements (finite fields only), in the order 0..p-1."""
        if not self.characteristic:
            raise FieldError("QQ is infinite")
        return range(self.characteristic)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class ScalarMatrix:
    """Dense row-major matrix over a Field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ShapeMismatch("ragged matrix rows")

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "ScalarMatrix":
        return cls(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "ScalarMatrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_sparse(cls, field: Field, nrows: int, ncols: int, entries: dict) -> "ScalarMatrix":
        m = cls.zeros(field, nrows, ncols)
        for (i, j), v in entries.items():
            m.rows[i][j] = field.normalize(v)
        return m

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ScalarMatrix)
            and self.field is other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"ScalarMatrix({self.field!r}, {self.rows!r})"

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(self.field, [[row[j] for row in self.rows] for j in range(self.ncols)], self.nrows)

    def matvec(self, v: Sequence) -> list:
        if len(v) != self.ncols:
            raise ShapeMismatch(f"vector of length {len(v)} against {self.ncols} columns")
        f = self.field
        return [f.normalize(sum(a * b for a, b in zip(row, v) if a and b)) for row in self.rows]

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        f = self.field
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for row in self.rows:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out.append([f.normalize(sum(a * col[k] for k, a in nz)) for col in cols])
        return ScalarMatrix(f, out, other.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def sparse_rows(self) -> list[dict]:
        return [{j: v for j, v in enumerate(r) if v} for r in self.rows]


# ---------------------------------------------------------------------------
# elimination on sparse rows


def _integer_row(r: dict) -> dict:
    den = 1
    for v in r.values():
        if type(v) is Fraction:
            den = den * v.denominator // gcd(den, v.denominator)
    out = {j: int(v * den) for j, v in r.items() if v}
    g = gcd(*out.values()) if out else 1
    if g > 1:
        out = {j: v // g for j, v in out.items()}
    return out


def _combine(row: dict, prow: dict, c: int) -> dict:
    """Integer combination of row and prow killing column c, made primitive."""
    pv, f = prow[c], row[c]
    g = gcd(pv, f)
    a, b = pv // g, f // g
    new = {j: a * v for j, v in row.items()}
    for j, v in prow.items():
        nv = new.get(j, 0) - b * v
        if nv:
            new[j] = nv
        else:
            new.pop(j, None)
    g = gcd(*new.values()) if new else 1
    if g > 1:
        new = {j: v // g for j, v in new.items()}
    return new


def _eliminate_rational(rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    """Fraction-free elimination on primitive integer rows, normalized at the end.

    The reduced echelon form is unique, so the pivot-row choice (sparsest
    first) only affects speed.
    """
    active = [_integer_row(r) for r in rows if r]
    active = [r for r in active if r]
    echelon: list[tuple[int, dict]] = []
    for c in range(ncols):
        if not active:
            break
        cand = [k for k, r in enumerate(active) if c in r]
        if not cand:
            continue
        best = min(cand, key=lambda k: (len(active[k]), abs(active[k][c])))
        prow = active[best]
        rest = []
        for k, r in enumerate(active):
            if k == best:
                continue
            if c in r:
                r = _combine(r, prow, c)
                if not r:
                    continue
            rest.append(r)
        active = rest
        echelon.append((c, prow))
    for p in range(len(echelon) - 1, -1, -1):
        c, prow = echelon[p]
        for u in range(p):
            cu, ru = echelon[u]
            if c in ru:
                echelon[u] = (cu, _combine(ru, prow, c))
    out = []
    for c, r in echelon:
        pv = r[c]
        out.append({j: (v // pv if v % pv == 0 else Fraction(v, pv)) for j, v in r.items()})
    return out, [c for c, _ in echelon]


def _eliminate(field: Field, rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    """Gauss-Jordan on sparse rows; returns (nonzero reduced rows, pivot columns)."""
    p = field.characteristic
    if not p:
        return _eliminate_rational(rows, ncols)
    rows = [dict(r) for r in rows if r]
    pivots: list[int] = []
    top = 0
    n = len(rows)
    for c in range(ncols):
        if top >= n:
            break
        pr = None
        for k in range(top, n):
            if c in rows[k]:
                pr = k
                break
        if pr is None:
            continue
        rows[top], rows[pr] = rows[pr], rows[top]
        prow = rows[top]
        inv = field.inv(prow[c])
        if inv != 1:
            if p:
                for j in prow:
                    prow[j] = prow[j] * inv % p
            else:
                for j in prow:
                    prow[j] = _qnorm(prow[j] * inv)
        items = list(prow.items())
        for k in range(n):
            if k == top:
                continue
            row = rows[k]
            fac = row.get(c)
            if fac is None:
                continue
            if p:
                for j, v in items:
                    nv = (row.get(j, 0) - fac * v) % p
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
            else:
                for j, v in items:
                    nv = row.get(j, 0) - fac * v
                    if nv:
                        row[j] = _qnorm(nv)
                    else:
                        row.pop(j, None)
        pivots.append(c)
        top += 1
    return rows[:top], pivots


def _qnorm(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def rref(m: ScalarMatrix) -> tuple[ScalarMatrix, list[int], int]:
    """Reduced row echelon form, pivot columns (increasing) and rank."""
    red, piv = _eliminate(m.field, m.sparse_rows(), m.ncols)
    out = []
    for r in red:
        row = [0] * m.ncols
        for j, v in r.items():
            row[j] = v
        out.append(row)
    out.extend([0] * m.ncols for _ in range(m.nrows - len(red)))
    return ScalarMatrix(m.field, out, m.ncols), piv, len(piv)


def rank(m: ScalarMatrix) -> int:
    return len(_eliminate(m.field, m.sparse_rows(), m.ncols)[1])


def rank_of_rows(field: Field, rows: Iterable[dict], ncols: int) -> int:
    """Rank of a matrix given as sparse row dictionaries."""
    return len(_eliminate(field, list(rows), ncols)[1])


def kernel_from_reduced(red: list[dict], piv: list[int], ncols: int) -> list[list]:
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(red, piv):
            val = r.get(f)
            if val:
                v[pc] = -val
        basis.append(v)
    return basis


def kernel_basis(m: ScalarMatrix) -> list[list]:
    """Right null space, one vector per free column (free entry 1, other free entries 0)."""
    red, piv = _eliminate(m.field, m.sparse_rows(), m.ncols)
    p = m.field.characteristic
    basis = kernel_from_reduced(red, piv, m.ncols)
    if p:
        basis = [[x % p for x in v] for v in basis]
    return basis


def solve_sparse(field: Field, rows: list[dict], ncols: int, b: Sequence) -> list | None:
    """Canonical particular solution of rows·x = b, or None when inconsistent."""
    aug = []
    for r, bv in zip(rows, b):
        r2 = dict(r)
        if bv:
            r2[ncols] = field.normalize(bv)
        aug.append(r2)
    red, piv = _eliminate(field, aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [0] * ncols
    for r, pc in zip(red, piv):
        x[pc] = r.get(ncols, 0)
    return x


def solve(m: ScalarMatrix, b: Sequence) -> list | None:
    """Particular solution with every free variable set to zero, or None."""
    if len(b) != m.nrows:
        raise ShapeMismatch(f"right-hand side of length {len(b)} against {m.nrows} rows")
    return solve_sparse(m.field, m.sparse_rows(), m.ncols, b)


def left_null_witness(field: Field, rows: list[dict], ncols: int, b: Sequence) -> list | None:
    """A vector y with y·A = 0 and y·b = 1, certifying that A x = b has no solution."""
    nrows = len(rows)
    # columns of A become rows of A^T, plus the b-row so that y·b is tracked
    cols: list[dict] = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, v in r.items():
            cols[j][i] = v
    red, piv = _eliminate(field, cols, nrows)
    for y in kernel_from_reduced(red, piv, nrows):
        yb = field.normalize(sum(a * c for a, c in zip(y, b) if a and c))
        if yb:
            inv = field.inv(yb)
            return [field.normalize(a * inv) for a in y]
    return None
