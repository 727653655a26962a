"""Finite free complexes and their endomorphism complexes.

The endomorphism complex End^m has components Hom(F_i, F_{i-m}).  Its
differential is phi -> d.phi - s * phi.d; the usual sign is s = (-1)^m,
but the flag equations of the deformation engine use the ungraded
(anti)commutator, so every linear-algebra routine here takes the sign
explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    HomogeneityViolation,
    NonHomogeneous,
    NotAChainMap,
    RingShapeMismatch,
    ShapeMismatch,
)
from .exactfield import kernel_from_reduced, left_null_witness, rank_of_rows, solve_sparse, _eliminate
from .polyring import (
    GradedFreeModule,
    HomMap,
    Poly,
    PolyRing,
    compose,
    monomials_of_degree,
)

__all__ = [
    "Complex",
    "EndElement",
    "EndSlice",
    "koszul",
    "check_complex",
    "ComplexReport",
    "pfaffian_resolution",
    "PfaffianData",
    "left_mult",
    "is_chain_map",
    "find_nullhomotopy",
    "solve_homotopy",
    "end_cohomology_dim",
    "end_slice",
    "end_differential_rows",
    "pfaffian",
]


class Complex:
    """F_0 <- F_1 <- ... <- F_l with homogeneous degree-0 differentials.

    ``maps[i-1]`` is the differential F_i -> F_{i-1}.  Construction checks
    shapes and homogeneity only; use check_complex for d^2 = 0.
    """

    def __init__(self, ring: PolyRing, modules: Sequence[GradedFreeModule],
                 maps: Sequence[HomMap], products: "PfaffianData | None" = None):
        modules = list(modules)
        maps = list(maps)
        if not modules:
            modules = [GradedFreeModule(ring, [])]
        if len(maps) != len(modules) - 1:
            raise ShapeMismatch(f"{len(modules)} modules need {len(modules) - 1} maps, got {len(maps)}")
        for i, dmap in enumerate(maps, start=1):
            if dmap.source != modules[i] or dmap.target != modules[i - 1]:
                raise ShapeMismatch(f"differential {i} has the wrong source or target")
            if dmap.degree != 0 and not dmap.is_zero():
                raise HomogeneityViolation(f"differential {i} has degree {dmap.degree}, expected 0")
            if dmap.degree != 0:
                dmap = HomMap.zero(dmap.source, dmap.target, 0)
                maps[i - 1] = dmap
        self.ring = ring
        self.modules = tuple(modules)
        self.maps = tuple(maps)
        self.products = products
        self._cache: dict = {}

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def module(self, i: int) -> GradedFreeModule:
        if 0 <= i <= self.length:
            return self.modules[i]
        return GradedFreeModule(self.ring, [])

    def d(self, i: int) -> HomMap:
        """The differential F_i -> F_{i-1} (zero outside the range)."""
        if 1 <= i <= self.length:
            return self.maps[i - 1]
        return HomMap.zero(self.module(i), self.module(i - 1), 0)

    @property
    def twists(self) -> list[list[int]]:
        return [list(F.twists) for F in self.modules]

    def ranks(self) -> list[int]:
        return [F.rank for F in self.modules]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Complex)
            and self.ring == other.ring
            and self.modules == other.modules
            and self.maps == other.maps
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.modules))

    def __repr__(self) -> str:
        return f"Complex(ranks={self.ranks()}, twists={self.twists})"

    def with_ring(self, ring: PolyRing) -> "Complex":
        """Same complex with coefficients coerced into another ring (e.g. GF(p))."""
        return Complex(ring, [F.with_ring(ring) for F in self.modules],
                       [m.with_ring(ring) for m in self.maps])

    def over_characteristic(self, p: int) -> "Complex":
        return self.with_ring(self.ring.with_characteristic(p))

    def differential(self) -> "EndElement":
        """The differential as an element of End^1 of internal degree 0."""
        key = ("differential",)
        if key not in self._cache:
            self._cache[key] = EndElement(self, 1, 0, {i: self.maps[i - 1] for i in range(1, self.length + 1)},
                                          check=False)
        return self._cache[key]

    def max_entry_degree(self) -> int:
        return max((e.degree for m in self.maps for row in m.entries for e in row), default=0)

    def is_minimal(self) -> bool:
        for m in self.maps:
            for row in m.entries:
                for e in row:
                    if e.terms and e.constant_term():
                        return False
        return True


# ---------------------------------------------------------------------------
# endomorphism elements


def end_indices(cx: Complex, m: int) -> list[int]:
    """Source indices i with both F_i and F_{i-m} in range."""
    return [i for i in range(max(0, m), min(cx.length, cx.length + m) + 1)]


class EndElement:
    """A family of maps F_i -> F_{i-m}, all homogeneous of internal degree d."""

    __slots__ = ("complex", "degree", "internal", "comps")

    def __init__(self, cx: Complex, m: int, d: int, comps: dict | None = None, check: bool = True):
        comps = dict(comps or {})
        full = {}
        for i in end_indices(cx, m):
            src, tgt = cx.module(i), cx.module(i - m)
            c = comps.pop(i, None)
            if c is None:
                c = HomMap.zero(src, tgt, d)
            else:
                if c.source != src or c.target != tgt:
                    raise ShapeMismatch(f"component {i} has the wrong shape")
                if c.degree != d:
                    if not c.is_zero():
                        raise HomogeneityViolation(f"component {i} has internal degree {c.degree}, expected {d}")
                    c = HomMap.zero(src, tgt, d)
                if check:
                    c.check_homogeneous()
            full[i] = c
        for i, c in comps.items():
            if not c.is_zero():
                raise ShapeMismatch(f"component {i} lies outside the complex")
        self.complex = cx
        self.degree = m
        self.internal = d
        self.comps = full

    @classmethod
    def zero(cls, cx: Complex, m: int, d: int) -> "EndElement":
        return cls(cx, m, d, {}, check=False)

    @classmethod
    def identity(cls, cx: Complex) -> "EndElement":
        return cls(cx, 0, 0, {i: HomMap.identity(cx.module(i)) for i in range(cx.length + 1)}, check=False)

    @classmethod
    def single_block(cls, cx: Complex, m: int, i: int, entries, d: int | None = None) -> "EndElement":
        """Element with one nonzero component F_i -> F_{i-m}."""
        src, tgt = cx.module(i), cx.module(i - m)
        if d is None:
            d = _infer_degree(src, tgt, entries, cx.ring)
        return cls(cx, m, d, {i: HomMap(src, tgt, d, entries)})

    def component(self, i: int) -> HomMap:
        c = self.comps.get(i)
        if c is None:
            return HomMap.zero(self.complex.module(i), self.complex.module(i - self.degree), self.internal)
        return c

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, EndElement) or other.complex is not self.complex and other.complex != self.complex:
            return False
        if self.degree != other.degree:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.internal == other.internal and all(
            self.comps[i].entries == other.comps[i].entries for i in self.comps
        )

    def __repr__(self) -> str:
        nz = {i: c for i, c in self.comps.items() if not c.is_zero()}
        return f"EndElement(m={self.degree}, d={self.internal}, nonzero={list(nz)})"

    def _check_compatible(self, other: "EndElement") -> int:
        if self.degree != other.degree:
            raise ShapeMismatch("adding endomorphisms of different cohomological degree")
        if self.internal != other.internal:
            if self.is_zero():
                return other.internal
            if other.is_zero():
                return self.internal
            raise HomogeneityViolation("adding endomorphisms of different internal degree")
        return self.internal

    def __add__(self, other: "EndElement") -> "EndElement":
        d = self._check_compatible(other)
        return EndElement(self.complex, self.degree, d,
                          {i: _retag(self.comps[i], d) + _retag(other.comps[i], d) for i in self.comps},
                          check=False)

    def __sub__(self, other: "EndElement") -> "EndElement":
        return self + (-other)

    def __neg__(self) -> "EndElement":
        return EndElement(self.complex, self.degree, self.internal,
                          {i: -c for i, c in self.comps.items()}, check=False)

    def scale(self, c) -> "EndElement":
        return EndElement(self.complex, self.degree, self.internal,
                          {i: m.scale(c) for i, m in self.comps.items()}, check=False)

    def __matmul__(self, other: "EndElement") -> "EndElement":
        """self after other."""
        cx = self.complex
        m = self.degree + other.degree
        d = self.internal + other.internal
        comps = {}
        for i in end_indices(cx, m):
            inner = other.comps.get(i)
            outer = self.comps.get(i - other.degree)
            if inner is None or outer is None:
                continue
            comps[i] = _retag(compose(outer, inner), d)
        return EndElement(cx, m, d, comps, check=False)

    def twisted(self, k: int = 1) -> "EndElement":
        """Precompose with sigma^k, where sigma acts by (-1)^n on F_n."""
        if k % 2 == 0:
            return self
        return EndElement(self.complex, self.degree, self.internal,
                          {i: (c if i % 2 == 0 else -c) for i, c in self.comps.items()}, check=False)

    def with_internal(self, d: int) -> "EndElement":
        if d == self.internal:
            return self
        if not self.is_zero():
            raise HomogeneityViolation("only the zero element can change internal degree")
        return EndElement.zero(self.complex, self.degree, d)


def _retag(h: HomMap, d: int) -> HomMap:
    if h.degree == d:
        return h
    if not h.is_zero():
        raise HomogeneityViolation(f"map of degree {h.degree} where {d} was expected")
    return HomMap.zero(h.source, h.target, d)


def _infer_degree(src: GradedFreeModule, tgt: GradedFreeModule, entries, ring: PolyRing) -> int:
    for r, row in enumerate(entries):
        for c, e in enumerate(row):
            p = e if isinstance(e, Poly) else ring(e)
            if p.terms:
                return p.homogeneous_degree() + tgt.degrees[r] - src.degrees[c]
    return 0


# ---------------------------------------------------------------------------
# coordinates on End^m_d


@dataclass
class EndSlice:
    complex: Complex
    degree: int
    internal: int
    basis: list  # (i, r, c, exponent)
    index: dict

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coords(self, phi: EndElement) -> list:
        if phi.degree != self.degree:
            raise ShapeMismatch("element has the wrong cohomological degree")
        v = [0] * len(self.basis)
        if phi.is_zero():
            return v
        if phi.internal != self.internal:
            raise HomogeneityViolation("element has the wrong internal degree")
        for i, comp in phi.comps.items():
            for r, row in enumerate(comp.entries):
                for c, e in enumerate(row):
                    for exp, coef in e.terms.items():
                        v[self.index[(i, r, c, exp)]] = coef
        return v

    def element(self, vec: Sequence) -> EndElement:
        cx = self.complex
        ring = cx.ring
        fld = ring.field
        raw: dict = {}
        for k, val in enumerate(vec):
            if not val:
                continue
            i, r, c, exp = self.basis[k]
            raw.setdefault(i, {}).setdefault((r, c), {})[exp] = fld.normalize(val)
        comps = {}
        for i, entries in raw.items():
            src, tgt = cx.module(i), cx.module(i - self.degree)
            rows = [[Poly(ring, entries.get((r, c), {})) for c in range(src.rank)] for r in range(tgt.rank)]
            comps[i] = HomMap(src, tgt, self.internal, rows, check=False)
        return EndElement(cx, self.degree, self.internal, comps, check=False)


def end_slice(cx: Complex, m: int, d: int) -> EndSlice:
    """Coordinates of End^m in internal degree d.

    Components are listed by decreasing source index, then row, column and
    graded-lex monomial; this order fixes the canonical solutions.
    """
    key = ("slice", m, d)
    hit = cx._cache.get(key)
    if hit is not None:
        return hit
    n = cx.ring.nvars
    basis = []
    for i in reversed(end_indices(cx, m)):
        src, tgt = cx.module(i), cx.module(i - m)
        for r, gr in enumerate(tgt.degrees):
            for c, gc in enumerate(src.degrees):
                for exp in monomials_of_degree(n, gc + d - gr):
                    basis.append((i, r, c, exp))
    sl = EndSlice(cx, m, d, basis, {b: k for k, b in enumerate(basis)})
    cx._cache[key] = sl
    return sl


def end_differential_rows(cx: Complex, m: int, d: int, sign: int) -> list[dict]:
    """Sparse rows of phi -> d.phi - sign*phi.d from End^m_d to End^{m+1}_d."""
    key = ("drows", m, d, sign)
    hit = cx._cache.get(key)
    if hit is not None:
        return hit
    src = end_slice(cx, m, d)
    tgt = end_slice(cx, m + 1, d)
    fld = cx.ring.field
    rows: list[dict] = [dict() for _ in range(tgt.dimension)]
    tindex = tgt.index
    ell = cx.length
    for col, (i, r, c, mu) in enumerate(src.basis):
        # d after phi: component i of the result, through the differential on F_{i-m}
        if i - m >= 1:
            D = cx.maps[i - m - 1].entries
            for r2 in range(len(D)):
                e = D[r2][r]
                for exp, cf in e.terms.items():
                    key2 = (i, r2, c, tuple([a + b for a, b in zip(exp, mu)]))
                    row = rows[tindex[key2]]
                    row[col] = row.get(col, 0) + cf
        # phi after d: component i+1 of the result, through the differential on F_{i+1}
        if i + 1 <= ell and sign:
            D = cx.maps[i].entries
            Dc = D[c]
            for c2 in range(len(Dc)):
                e = Dc[c2]
                for exp, cf in e.terms.items():
                    key2 = (i + 1, r, c2, tuple([a + b for a, b in zip(exp, mu)]))
                    row = rows[tindex[key2]]
                    row[col] = row.get(col, 0) - sign * cf
    out = []
    for row in rows:
        clean = {}
        for k, v in row.items():
            v = fld.normalize(v)
            if v:
                clean[k] = v
        out.append(clean)
    cx._cache[key] = out
    return out


def apply_end_differential(phi: EndElement, sign: int | None = None) -> EndElement:
    """d.phi - sign*phi.d computed symbolically."""
    cx = phi.complex
    if sign is None:
        sign = -1 if phi.degree % 2 else 1
    delta = cx.differential()
    left = delta @ phi
    right = phi @ delta
    if sign == 1:
        return left - right
    if sign == -1:
        return left + right
    raise ValueError("sign must be +1 or -1")


def end_rank(cx: Complex, m: int, d: int, sign: int) -> int:
    key = ("rank", m, d, sign)
    if key not in cx._cache:
        rows = end_differential_rows(cx, m, d, sign)
        cx._cache[key] = rank_of_rows(cx.ring.field, rows, end_slice(cx, m, d).dimension)
    return cx._cache[key]


def cocycle_basis(cx: Complex, m: int, d: int, sign: int) -> list[list]:
    """Kernel basis (coordinate vectors) of phi -> d.phi - sign*phi.d on End^m_d."""
    rows = end_differential_rows(cx, m, d, sign)
    n = end_slice(cx, m, d).dimension
    red, piv = _eliminate(cx.ring.field, rows, n)
    return kernel_from_reduced(red, piv, n)


def coboundary_vectors(cx: Complex, m: int, d: int, sign: int) -> list[dict]:
    """Images in End^m_d of the basis of End^{m-1}_d, as sparse vectors."""
    rows = end_differential_rows(cx, m - 1, d, sign)
    ncols = end_slice(cx, m - 1, d).dimension
    cols: list[dict] = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    return [c for c in cols if c]


# ---------------------------------------------------------------------------
# public operations


def koszul(ring: PolyRing, f: Sequence) -> Complex:
    """Koszul complex on f; F_i has one generator e_J per i-subset J, in lex order."""
    f = [ring(x) if not isinstance(x, Poly) else x for x in f]
    if not f:
        raise ValueError("koszul needs at least one element")
    degs = []
    for x in f:
        if not x.terms:
            raise NonHomogeneous("zero element in a Koszul sequence")
        try:
            d = x.homogeneous_degree()
        except HomogeneityViolation as exc:
            raise NonHomogeneous(str(exc)) from None
        if d < 1:
            raise NonHomogeneous(f"{x} has degree {d} < 1")
        degs.append(d)
    n = len(f)
    subsets = [list(combinations(range(n), i)) for i in range(n + 1)]
    modules = [GradedFreeModule(ring, [sum(degs[r] for r in J) for J in subsets[i]]) for i in range(n + 1)]
    zero = ring.zero()
    maps = []
    for i in range(1, n + 1):
        idx = {J: k for k, J in enumerate(subsets[i - 1])}
        rows = [[zero] * len(subsets[i]) for _ in subsets[i - 1]]
        for col, J in enumerate(subsets[i]):
            for s, j in enumerate(J):
                K = J[:s] + J[s + 1:]
                rows[idx[K]][col] = f[j] if s % 2 == 0 else -f[j]
        maps.append(HomMap(modules[i], modules[i - 1], 0, rows, check=False))
    return Complex(ring, modules, maps)


@dataclass
class ComplexReport:
    ok: bool
    index: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_complex(cx: Complex) -> ComplexReport:
    """Homogeneity of every differential and d_{i-1} d_i = 0, checked symbolically."""
    for i, m in enumerate(cx.maps, start=1):
        try:
            m.check_homogeneous()
        except HomogeneityViolation as exc:
            return ComplexReport(False, i, f"differential {i}: {exc}")
    for i in range(2, cx.length + 1):
        prod = compose(cx.maps[i - 2], cx.maps[i - 1])
        if not prod.is_zero():
            bad = next(
                (r, c, e) for r, row in enumerate(prod.entries) for c, e in enumerate(row) if e.terms
            )
            return ComplexReport(False, i, f"d_{i - 1} d_{i} has entry ({bad[0]},{bad[1]}) = {bad[2]}")
    return ComplexReport(True)


def is_chain_map(phi: EndElement, sign: int | None = None) -> bool:
    """True iff d.phi = sign * phi.d; the default sign is (-1)^m."""
    return apply_end_differential(phi, sign).is_zero()


@dataclass
class HomotopySolution:
    homotopy: EndElement | None
    witness: list | None = None  # y with y.A = 0, y.b = 1 when inconsistent
    equations: int = 0
    unknowns: int = 0


def solve_homotopy(target: EndElement, sign: int, want_witness: bool = False) -> HomotopySolution:
    """Solve d.h - sign*h.d = target for h of degree m-1, same internal degree.

    Returns the canonical solution (free coordinates zero) when one exists.
    """
    cx = target.complex
    m, d = target.degree, target.internal
    rows = end_differential_rows(cx, m - 1, d, sign)
    src = end_slice(cx, m - 1, d)
    b = end_slice(cx, m, d).coords(target)
    fld = cx.ring.field
    x = solve_sparse(fld, rows, src.dimension, b)
    if x is None:
        wit = left_null_witness(fld, rows, src.dimension, b) if want_witness else None
        return HomotopySolution(None, wit, len(rows), src.dimension)
    return HomotopySolution(src.element(x), None, len(rows), src.dimension)


def find_nullhomotopy(phi: EndElement) -> EndElement | None:
    """Canonical h of degree m-1 with d.h - (-1)^(m-1) h.d = phi, or None."""
    if not is_chain_map(phi):
        raise NotAChainMap(f"element of degree {phi.degree} is not a chain map")
    sign = -1 if (phi.degree - 1) % 2 else 1
    return solve_homotopy(phi, sign).homotopy


def end_cohomology_dim(cx: Complex, m: int, d: int) -> int:
    """dim H^m(End(F))_d = dim End^m_d - rank D_m - rank D_{m-1}."""
    dim = end_slice(cx, m, d).dimension
    if dim == 0:
        return 0
    s_m = -1 if m % 2 else 1
    return dim - end_rank(cx, m, d, s_m) - end_rank(cx, m - 1, d, -s_m)


# ---------------------------------------------------------------------------
# pfaffians


def pfaffian(A: Sequence[Sequence[Poly]], ring: PolyRing) -> Poly:
    """Pfaffian by expansion along the first row (0 for odd size)."""
    n = len(A)
    if n == 0:
        return ring.one()
    if n % 2:
        return ring.zero()
    total = ring.zero()
    for j in range(1, n):
        if not A[0][j].terms:
            continue
        keep = [k for k in range(n) if k not in (0, j)]
        sub = [[A[r][c] for c in keep] for r in keep]
        term = A[0][j] * pfaffian(sub, ring)
        # sign (-1)^(j+1) in 1-based column numbering
        total = total + term if j % 2 == 1 else total - term
    return total


@dataclass
class PfaffianData:
    """Generic skew 5x5 matrix data and the multiplicative structure.

    ``ee[(i, j)]`` lists the coefficients of f_1..f_5 in e_i e_j (0-based
    keys); e_i f_j = delta_ij g.
    """

    X: list
    pf: dict  # frozenset of deleted 0-based indices -> Poly
    ee: dict = field(default_factory=dict)
    variables: tuple = ()

    def pf_deleting(self, *idx: int) -> Poly:
        return self.pf[frozenset(idx)]


def _perm_sign(seq: Sequence[int]) -> int:
    s = 1
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                s = -s
    return s


PFAFFIAN_VARIABLES = tuple(f"x{i}{j}" for i in range(1, 6) for j in range(i + 1, 6))


def pfaffian_resolution(ring: PolyRing, variables: Sequence[str] | None = None) -> Complex:
    """The resolution R <- R^5 <- R^5 <- R of the 4x4 pfaffians of a generic skew 5x5 matrix.

    The entries x_ij (i<j) are the variables named in ``variables`` (default:
    x12, x13, ..., x45 when present, else the first ten ring variables).
    """
    if variables is None:
        if all(v in ring.variables for v in PFAFFIAN_VARIABLES):
            variables = PFAFFIAN_VARIABLES
        elif ring.nvars >= 10:
            variables = ring.variables[:10]
        else:
            raise RingShapeMismatch(f"need 10 variables for the entries, ring has {ring.nvars}")
    variables = tuple(variables)
    if len(variables) != 10 or any(v not in ring.variables for v in variables):
        raise RingShapeMismatch("need exactly 10 ring variables for the entries x_ij, i<j")
    zero = ring.zero()
    X = [[zero] * 5 for _ in range(5)]
    it = iter(variables)
    for i in range(5):
        for j in range(i + 1, 5):
            v = ring.var(next(it))
            X[i][j] = v
            X[j][i] = -v
    pf: dict = {}
    for size in (1, 3, 5):
        for deleted in combinations(range(5), size):
            keep = [k for k in range(5) if k not in deleted]
            pf[frozenset(deleted)] = pfaffian([[X[r][c] for c in keep] for r in keep], ring)
    d1 = [pf[frozenset([k])] if k % 2 == 0 else -pf[frozenset([k])] for k in range(5)]

    # product table; (i, j, k) are 0-based, so (-1)^(i+j+k) here is minus the
    # 1-based parity.  This sign reproduces the standard left multiplication
    # matrix of e_1 and makes the curved square come out as Pf_1 * id.
    ee = {}
    for i in range(5):
        for j in range(5):
            coeffs = []
            for k in range(5):
                if len({i, j, k}) < 3:
                    coeffs.append(zero)
                    continue
                s = (-1) ** (i + j + k) * _perm_sign((i, j, k))
                coeffs.append(pf[frozenset((i, j, k))].scale(s))
            ee[(i, j)] = coeffs
    data = PfaffianData(X, pf, ee, variables)

    F0 = GradedFreeModule(ring, [0])
    F1 = GradedFreeModule(ring, [2] * 5)
    F2 = GradedFreeModule(ring, [3] * 5)
    F3 = GradedFreeModule(ring, [5])
    maps = [
        HomMap(F1, F0, 0, [d1]),
        HomMap(F2, F1, 0, X),
        HomMap(F3, F2, 0, [[e] for e in d1]),
    ]
    return Complex(ring, [F0, F1, F2, F3], maps, products=data)


def left_mult(e_index: int, cx: Complex) -> EndElement:
    """Left multiplication by the basis element e_{e_index} (1-based) of F_1.

    Returned as an element of cohomological degree -1 and internal degree 2.
    """
    data = cx.products
    if data is None:
        raise ValueError("complex carries no product tables")
    if not 1 <= e_index <= 5:
        raise ValueError("e_index must be in 1..5")
    i = e_index - 1
    ring = cx.ring
    zero, one = ring.zero(), ring.one()
    col0 = [[one if k == i else zero] for k in range(5)]
    mid = [[data.ee[(i, j)][k] for j in range(5)] for k in range(5)]
    top = [[one if j == i else zero for j in range(5)]]
    comps = {
        0: HomMap(cx.module(0), cx.module(1), 2, col0),
        1: HomMap(cx.module(1), cx.module(2), 2, mid),
        2: HomMap(cx.module(2), cx.module(3), 2, top),
    }
    return EndElement(cx, -1, 2, comps)
