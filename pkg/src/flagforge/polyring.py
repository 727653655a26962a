"""Standard-graded polynomial rings, graded free modules and homogeneous maps.

Polynomials are sparse dictionaries from exponent tuples to nonzero
field elements.  The monomial order is graded-lex with the declared
variable order (x1 > x2 > ...); it fixes every basis order used later.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .errors import HomogeneityViolation, ParseError, ShapeMismatch
from .exactfield import Field, ScalarMatrix

__all__ = [
    "PolyRing",
    "Poly",
    "GradedFreeModule",
    "DegreeSlice",
    "HomMap",
    "slice_basis",
    "slice_matrix",
    "compose",
    "monomials_of_degree",
]


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, deg: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree deg, largest first in lex order."""
    if deg < 0:
        return ()
    if nvars == 1:
        return ((deg,),)
    out = []
    for first in range(deg, -1, -1):
        for rest in monomials_of_degree(nvars - 1, deg - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(nvars: int, deg: int) -> dict:
    return {m: k for k, m in enumerate(monomials_of_degree(nvars, deg))}


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple([x + y for x, y in zip(a, b)])


def _grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(-))")


class PolyRing:
    """k[x1..xn] with every variable in degree 1."""

    __slots__ = ("variables", "field", "nvars", "_index", "__weakref__")

    def __init__(self, variables: Sequence[str], characteristic: int = 0):
        variables = tuple(variables)
        if not variables:
            raise ValueError("a ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be unique")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"bad variable name {v!r}")
        self.variables = variables
        self.nvars = len(variables)
        self.field = Field(characteristic)
        self._index = {v: k for k, v in enumerate(variables)}

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.field is other.field
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.field.characteristic))

    def __repr__(self) -> str:
        return f"PolyRing({list(self.variables)!r}, characteristic={self.characteristic})"

    def with_characteristic(self, p: int) -> "PolyRing":
        return PolyRing(self.variables, p)

    # constructors --------------------------------------------------------
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exp: Sequence[int], coeff=1) -> "Poly":
        c = self.field(coeff)
        exp = tuple(exp)
        if len(exp) != self.nvars or min(exp) < 0:
            raise ValueError(f"bad exponent vector {exp}")
        return Poly(self, {exp: c} if c else {})

    def gens(self) -> list["Poly"]:
        out = []
        for k in range(self.nvars):
            e = [0] * self.nvars
            e[k] = 1
            out.append(Poly(self, {tuple(e): 1}))
        return out

    def var(self, name: str) -> "Poly":
        return self.gens()[self._index[name]]

    def monomials(self, deg: int) -> tuple[tuple[int, ...], ...]:
        return monomials_of_degree(self.nvars, deg)

    def hilbert(self, deg: int) -> int:
        """dim of the degree-deg part of the ring."""
        return comb(deg + self.nvars - 1, self.nvars - 1) if deg >= 0 else 0

    def convert(self, f: "Poly") -> "Poly":
        """Move a polynomial into this ring (same variables), coercing coefficients."""
        if f.ring == self:
            return f
        if f.ring.variables != self.variables:
            raise ValueError("variable lists differ")
        fld = self.field
        terms = {}
        for e, c in f.terms.items():
            c2 = fld(c)
            if c2:
                terms[e] = c2
        return Poly(self, terms)

    def __call__(self, value) -> "Poly":
        if isinstance(value, Poly):
            return self.convert(value)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    # parsing ---------------------------------------------------------------
    def parse(self, text: str) -> "Poly":
        """Parse strings like '3*x1^2*x2 - 1/2*x3'."""
        if not isinstance(text, str):
            raise ParseError(f"expected a polynomial string, got {type(text).__name__}")
        toks = []
        pos = 0
        s = text.strip()
        while pos < len(s):
            m = _TOKEN.match(s, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {s[pos]!r} at offset {pos} in {text!r}")
            pos = m.end()
            num, ident, caret, star, plus, minus = m.groups()
            if num is not None:
                toks.append(("num", num))
            elif ident is not None:
                toks.append(("id", ident))
            else:
                toks.append(("op", caret or star or plus or minus))
        if not toks:
            raise ParseError("empty polynomial string")
        fld = self.field
        terms: dict = {}
        k = 0
        sign = 1
        expect_term = True
        while k < len(toks):
            kind, val = toks[k]
            if kind == "op" and val in "+-" and expect_term:
                if val == "-":
                    sign = -sign
                k += 1
                continue
            if not expect_term:
                if kind == "op" and val in "+-":
                    expect_term = True
                    sign = -1 if val == "-" else 1
                    k += 1
                    continue
                raise ParseError(f"expected '+' or '-' in {text!r}")
            coeff = Fraction(sign)
            exp = [0] * self.nvars
            while True:
                if k >= len(toks):
                    raise ParseError(f"dangling operator in {text!r}")
                kind, val = toks[k]
                if kind == "num":
                    coeff *= Fraction(val)
                    k += 1
                elif kind == "id":
                    if val not in self._index:
                        raise ParseError(f"unknown variable {val!r} (ring has {', '.join(self.variables)})")
                    power = 1
                    k += 1
                    if k < len(toks) and toks[k] == ("op", "^"):
                        if k + 1 >= len(toks) or toks[k + 1][0] != "num" or "/" in toks[k + 1][1]:
                            raise ParseError(f"bad exponent in {text!r}")
                        power = int(toks[k + 1][1])
                        k += 2
                    exp[self._index[val]] += power
                else:
                    raise ParseError(f"unexpected {val!r} in {text!r}")
                if k < len(toks) and toks[k] == ("op", "*"):
                    k += 1
                    continue
                break
            e = tuple(exp)
            c = fld(coeff)
            nv = fld.normalize(terms.get(e, 0) + c)
            if nv:
                terms[e] = nv
            else:
                terms.pop(e, None)
            expect_term = False
            sign = 1
        if expect_term:
            raise ParseError(f"dangling sign in {text!r}")
        return Poly(self, terms)


class Poly:
    """Immutable sparse polynomial."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        """Common degree of all terms, None for zero; raises if not homogeneous."""
        degs = {sum(e) for e in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise HomogeneityViolation(f"{self} is not homogeneous")
        return degs.pop()

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        fld = self.ring.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = fld.normalize(terms.get(e, 0) + c)
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        fld = self.ring.field
        return Poly(self.ring, {e: fld.normalize(-c) for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        fld = self.ring.field
        c = fld(c)
        if not c:
            return Poly(self.ring, {})
        return Poly(self.ring, {e: fld.normalize(v * c) for e, v in self.terms.items()})

    def mul_term(self, exp: tuple, c) -> "Poly":
        """Multiply by the single term c*x^exp (c already a field element)."""
        if not c:
            return Poly(self.ring, {})
        fld = self.ring.field
        return Poly(self.ring, {_add_exp(e, exp): fld.normalize(v * c) for e, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        acc: dict = {}
        _accumulate_product(acc, self.terms, other.terms)
        return Poly(self.ring, _clean(self.ring.field, acc))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def change_ring(self, ring: PolyRing) -> "Poly":
        return ring.convert(self)

    # printing --------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.variables
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(names, e) if k
            )
            cs = str(c)
            if not mono:
                t = cs
            elif c == 1:
                t = mono
            elif c == -1:
                t = "-" + mono
            else:
                t = f"{cs}*{mono}"
            parts.append(t)
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def _accumulate_product(acc: dict, a: dict, b: dict, sign: int = 1) -> None:
    for e1, c1 in a.items():
        if sign != 1:
            c1 = c1 * sign
        for e2, c2 in b.items():
            e = tuple([x + y for x, y in zip(e1, e2)])
            acc[e] = acc.get(e, 0) + c1 * c2


def _clean(fld: Field, acc: dict) -> dict:
    out = {}
    for e, c in acc.items():
        c = fld.normalize(c)
        if c:
            out[e] = c
    return out


# ---------------------------------------------------------------------------
# graded free modules


class GradedFreeModule:
    """A direct sum of shifted copies of S, recorded by generator degrees.

    The summand S(-k) has its generator in degree k, so ``twists`` is the
    negation of ``degrees``.
    """

    __slots__ = ("ring", "degrees")

    def __init__(self, ring: PolyRing, degrees: Iterable[int] = ()):
        self.ring = ring
        self.degrees = tuple(int(g) for g in degrees)

    @classmethod
    def from_twists(cls, ring: PolyRing, twists: Iterable[int]) -> "GradedFreeModule":
        return cls(ring, [-t for t in twists])

    @property
    def twists(self) -> tuple[int, ...]:
        return tuple(-g for g in self.degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedFreeModule) and self.ring == other.ring and self.degrees == other.degrees

    def __hash__(self) -> int:
        return hash((self.ring, self.degrees))

    def __repr__(self) -> str:
        return f"GradedFreeModule(degrees={list(self.degrees)})"

    def shifted(self, s: int) -> "GradedFreeModule":
        """Every generator degree moved by +s."""
        return GradedFreeModule(self.ring, [g + s for g in self.degrees])

    def direct_sum(self, *others: "GradedFreeModule") -> "GradedFreeModule":
        degs = list(self.degrees)
        for o in others:
            degs.extend(o.degrees)
        return GradedFreeModule(self.ring, degs)

    def with_ring(self, ring: PolyRing) -> "GradedFreeModule":
        return GradedFreeModule(ring, self.degrees)

    def hilbert(self, j: int) -> int:
        return sum(self.ring.hilbert(j - g) for g in self.degrees)


@dataclass(frozen=True)
class DegreeSlice:
    module: GradedFreeModule
    degree: int
    basis: tuple  # of (generator index, exponent tuple)
    index: dict

    @property
    def dimension(self) -> int:
        return len(self.basis)


@lru_cache(maxsize=4096)
def slice_basis(F: GradedFreeModule, j: int) -> DegreeSlice:
    """Basis of F_j: generator-major, then monomials in graded-lex order."""
    basis = []
    n = F.ring.nvars
    for k, g in enumerate(F.degrees):
        for m in monomials_of_degree(n, j - g):
            basis.append((k, m))
    basis = tuple(basis)
    return DegreeSlice(F, j, basis, {b: i for i, b in enumerate(basis)})


class HomMap:
    """A homogeneous S-linear map between graded free modules.

    ``entries[r][c]`` is the coefficient of target generator r in the image
    of source generator c; it must be zero or homogeneous of degree
    ``source.degrees[c] + degree - target.degrees[r]``.
    """

    __slots__ = ("source", "target", "degree", "entries")

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, degree: int,
                 entries: Sequence[Sequence], check: bool = True):
        ring = source.ring
        if target.ring != ring:
            raise ShapeMismatch("source and target over different rings")
        rows = []
        for row in entries:
            rows.append(tuple(e if isinstance(e, Poly) else ring(e) for e in row))
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ShapeMismatch(
                f"entry matrix is {len(rows)}x{len(rows[0]) if rows else source.rank}, "
                f"expected {target.rank}x{source.rank}"
            )
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.entries = tuple(rows)
        if check:
            self.check_homogeneous()

    @classmethod
    def zero(cls, source, target, degree=0) -> "HomMap":
        z = source.ring.zero()
        return cls(source, target, degree, [[z] * source.rank for _ in range(target.rank)], check=False)

    @classmethod
    def identity(cls, module: GradedFreeModule) -> "HomMap":
        R = module.ring
        one, z = R.one(), R.zero()
        return cls(module, module, 0,
                   [[one if r == c else z for c in range(module.rank)] for r in range(module.rank)],
                   check=False)

    @property
    def ring(self) -> PolyRing:
        return self.source.ring

    @property
    def shape(self) -> tuple[int, int]:
        return (self.target.rank, self.source.rank)

    def expected_degree(self, r: int, c: int) -> int:
        return self.source.degrees[c] + self.degree - self.target.degrees[r]

    def check_homogeneous(self) -> None:
        for r, row in enumerate(self.entries):
            for c, e in enumerate(row):
                if not e.terms:
                    continue
                want = self.expected_degree(r, c)
                for exp in e.terms:
                    if sum(exp) != want:
                        raise HomogeneityViolation(
                            f"entry ({r},{c}) = {e} should be homogeneous of degree {want}"
                        )

    def is_zero(self) -> bool:
        return all(not e.terms for row in self.entries for e in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HomMap)
            and self.source == other.source
            and self.target == other.target
            and (self.degree == other.degree or (self.is_zero() and other.is_zero()))
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"HomMap(deg={self.degree}, [{body}])"

    def _same_shape(self, other: "HomMap") -> None:
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch("maps have different source or target")

    def _combined_degree(self, other: "HomMap") -> int:
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise HomogeneityViolation(f"adding maps of degrees {self.degree} and {other.degree}")
        return other.degree if self.is_zero() else self.degree

    def __add__(self, other: "HomMap") -> "HomMap":
        self._same_shape(other)
        deg = self._combined_degree(other)
        return HomMap(self.source, self.target, deg,
                      [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                      check=False)

    def __sub__(self, other: "HomMap") -> "HomMap":
        self._same_shape(other)
        deg = self._combined_degree(other)
        return HomMap(self.source, self.target, deg,
                      [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                      check=False)

    def __neg__(self) -> "HomMap":
        return HomMap(self.source, self.target, self.degree,
                      [[-a for a in row] for row in self.entries], check=False)

    def scale(self, c) -> "HomMap":
        return HomMap(self.source, self.target, self.degree,
                      [[a.scale(c) for a in row] for row in self.entries], check=False)

    def __matmul__(self, other: "HomMap") -> "HomMap":
        return compose(self, other)

    def transpose_entries(self) -> list[list[Poly]]:
        return [list(col) for col in zip(*self.entries)]

    def with_ring(self, ring: PolyRing) -> "HomMap":
        return HomMap(self.source.with_ring(ring), self.target.with_ring(ring), self.degree,
                      [[ring.convert(e) for e in row] for row in self.entries], check=False)

    def slice_matrix(self, j: int) -> ScalarMatrix:
        return slice_matrix(self, j)


def compose(phi: HomMap, psi: HomMap) -> HomMap:
    """phi after psi."""
    if psi.target != phi.source:
        raise ShapeMismatch(
            f"cannot compose: target of inner map {psi.target} != source of outer map {phi.source}"
        )
    ring = phi.ring
    fld = ring.field
    A, B = phi.entries, psi.entries
    mid = psi.target.rank
    out = []
    for r in range(phi.target.rank):
        row = []
        Ar = A[r]
        for c in range(psi.source.rank):
            acc: dict = {}
            for k in range(mid):
                a = Ar[k].terms
                if not a:
                    continue
                b = B[k][c].terms
                if b:
                    _accumulate_product(acc, a, b)
            row.append(Poly(ring, _clean(fld, acc)))
        out.append(row)
    return HomMap(psi.source, phi.target, phi.degree + psi.degree, out, check=False)


def slice_matrix(phi: HomMap, j: int) -> ScalarMatrix:
    """Matrix of phi from the degree-j slice of its source to degree j+deg of its target."""
    phi.check_homogeneous()
    src = slice_basis(phi.source, j)
    tgt = slice_basis(phi.target, j + phi.degree)
    fld = phi.ring.field
    m = ScalarMatrix.zeros(fld, tgt.dimension, src.dimension)
    rows = m.rows
    tindex = tgt.index
    for col, (c, mono) in enumerate(src.basis):
        for r in range(phi.target.rank):
            e = phi.entries[r][c]
            for exp, coef in e.terms.items():
                key = (r, _add_exp(exp, mono))
                i = tindex[key]
                rows[i][col] = fld.normalize(rows[i][col] + coef)
    return m
