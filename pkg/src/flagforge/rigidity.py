"""Complete intersections: Ext dimensions, rigidity windows and witnesses.

For a complete intersection S/I with generator degrees d_1..d_c,
Ext^i(S/I, S/I) is S/I tensored with the i-th exterior power of a space
with basis e_r in degree -d_r.  Dimensions therefore only need the
Hilbert function of S/I, read off the series prod(1 - t^d)/(1 - t)^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .complexes import Complex, EndElement, end_cohomology_dim, koszul
from .deform import LiftState, assemble, find_lift_iso
from .diffmod import DifferentialModule, anchor_h0_hilbert
from .errors import InvariantViolation, NoWitnessDegree, NotArtinian, SupportUnbounded
from .exactfield import _eliminate
from .polyring import HomMap, Poly, PolyRing, monomials_of_degree

__all__ = [
    "CompleteIntersection",
    "ExtElement",
    "wedge",
    "ci_ext_dim",
    "is_a_rigid",
    "RigidityReport",
    "rigidity_window",
    "RigidityWindow",
    "nonrigidity_witness",
    "Witness",
    "socle_degree",
    "rigid_thresholds",
    "Thresholds",
    "contraction",
]


class CompleteIntersection:
    """S/I for a homogeneous regular sequence, or just its degree data."""

    def __init__(self, degrees: Sequence[int] | None = None, n: int | None = None,
                 ring: PolyRing | None = None, gens: Sequence | None = None):
        if gens is not None:
            if ring is None:
                raise ValueError("generators need a ring")
            polys = [g if isinstance(g, Poly) else ring(g) for g in gens]
            degs = [p.homogeneous_degree() for p in polys]
            if any(d is None or d < 1 for d in degs):
                raise ValueError("generators must be nonzero forms of positive degree")
            order = sorted(range(len(polys)), key=lambda k: degs[k])
            self.gens = tuple(polys[k] for k in order)
            degrees = [degs[k] for k in order]
        else:
            self.gens = None
        if degrees is None:
            raise ValueError("need degrees or generators")
        degrees = [int(d) for d in degrees]
        if not degrees:
            raise ValueError("a complete intersection needs at least one generator")
        if any(d < 1 for d in degrees):
            raise ValueError("degrees must be positive")
        if ring is not None:
            n = ring.nvars if n is None else n
            if n != ring.nvars:
                raise ValueError("n disagrees with the ring")
        if n is None:
            raise ValueError("need the number of variables")
        if len(degrees) > n:
            raise ValueError("more generators than variables cannot form a regular sequence")
        self.degrees = tuple(sorted(degrees))
        self.n = int(n)
        self.ring = ring
        # numerator of the Hilbert series: prod (1 - t^d)
        num = [1]
        for d in self.degrees:
            new = [0] * (len(num) + d)
            for k, c in enumerate(num):
                new[k] += c
                new[k + d] -= c
            num = new
        self._num = num
        self._ideal_cache: dict = {}

    @property
    def c(self) -> int:
        return len(self.degrees)

    @property
    def is_artinian(self) -> bool:
        return self.c == self.n

    def __repr__(self) -> str:
        return f"CompleteIntersection(degrees={list(self.degrees)}, n={self.n})"

    def hilbert(self, m: int) -> int:
        """dim (S/I)_m."""
        if m < 0:
            return 0
        n = self.n
        return sum(c * comb(m - k + n - 1, n - 1) for k, c in enumerate(self._num) if k <= m)

    def koszul(self) -> Complex:
        if self.gens is None:
            raise ValueError("degrees-only complete intersection has no generators")
        return koszul(self.ring, self.gens)

    def _ideal_rows(self, j: int):
        if j not in self._ideal_cache:
            n = self.ring.nvars
            mons = monomials_of_degree(n, j)
            idx = {m: k for k, m in enumerate(mons)}
            rows = []
            for f, d in zip(self.gens, self.degrees):
                for mu in monomials_of_degree(n, j - d):
                    rows.append({idx[tuple(a + b for a, b in zip(e, mu))]: c for e, c in f.terms.items()})
            red, piv = _eliminate(self.ring.field, rows, len(mons))
            self._ideal_cache[j] = (mons, red, piv)
        return self._ideal_cache[j]

    def in_ideal(self, p: Poly) -> bool:
        if not p.terms:
            return True
        j = p.homogeneous_degree()
        mons, red, piv = self._ideal_rows(j)
        idx = {m: k for k, m in enumerate(mons)}
        v = [0] * len(mons)
        for e, c in p.terms.items():
            v[idx[e]] = c
        fld = self.ring.field
        for r, pc in zip(red, piv):
            c = v[pc]
            if c:
                for k, x in r.items():
                    v[k] = fld.normalize(v[k] - c * x)
        return not any(v)

    def first_standard_monomial(self, j: int) -> Poly | None:
        """First monomial of degree j (graded-lex order) outside I."""
        if self.gens is None:
            raise ValueError("degrees-only complete intersection has no generators")
        for e in monomials_of_degree(self.ring.nvars, j):
            m = self.ring.monomial(e)
            if not self.in_ideal(m):
                return m
        return None


# ---------------------------------------------------------------------------
# exterior algebra over S


def _merge_sign(J: tuple, K: tuple) -> int:
    inv = sum(1 for j in J for k in K if j > k)
    return -1 if inv % 2 else 1


class ExtElement:
    """Element of S tensor the exterior algebra on e_1..e_c, deg e_r = -d_r.

    Keys are sorted tuples of 1-based indices.
    """

    __slots__ = ("ring", "degrees", "terms")

    def __init__(self, ring: PolyRing, degrees: Sequence[int], terms: dict | None = None):
        self.ring = ring
        self.degrees = tuple(degrees)
        clean = {}
        for J, p in (terms or {}).items():
            J = tuple(J)
            if list(J) != sorted(set(J)) or any(not 1 <= r <= len(self.degrees) for r in J):
                raise ValueError(f"bad index set {J}")
            p = p if isinstance(p, Poly) else ring(p)
            if p.terms:
                clean[J] = p
        self.terms = clean

    @classmethod
    def basis(cls, ring: PolyRing, degrees: Sequence[int], *indices: int, coeff=1) -> "ExtElement":
        J = tuple(indices)
        s = 1
        srt = sorted(J)
        if len(set(J)) < len(J):
            return cls(ring, degrees, {})
        # sign of sorting the requested order
        perm = [srt.index(x) for x in J]
        for a in range(len(perm)):
            for b in range(a + 1, len(perm)):
                if perm[a] > perm[b]:
                    s = -s
        c = coeff if isinstance(coeff, Poly) else ring(coeff)
        return cls(ring, degrees, {tuple(srt): c.scale(s)})

    def _same(self, other: "ExtElement") -> None:
        if self.ring != other.ring or self.degrees != other.degrees:
            raise ValueError("elements of different exterior algebras")

    def __add__(self, other: "ExtElement") -> "ExtElement":
        self._same(other)
        t = dict(self.terms)
        for J, p in other.terms.items():
            t[J] = t[J] + p if J in t else p
        return ExtElement(self.ring, self.degrees, t)

    def __neg__(self) -> "ExtElement":
        return ExtElement(self.ring, self.degrees, {J: -p for J, p in self.terms.items()})

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self + (-other)

    def scale(self, c) -> "ExtElement":
        if isinstance(c, Poly):
            return ExtElement(self.ring, self.degrees, {J: p * c for J, p in self.terms.items()})
        return ExtElement(self.ring, self.degrees, {J: p.scale(c) for J, p in self.terms.items()})

    def __mul__(self, other) -> "ExtElement":
        if isinstance(other, ExtElement):
            return wedge(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtElement)
            and self.ring == other.ring
            and self.degrees == other.degrees
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def exterior_degrees(self) -> set:
        return {len(J) for J in self.terms}

    def internal_degrees(self) -> set:
        return {p.homogeneous_degree() - sum(self.degrees[r - 1] for r in J) for J, p in self.terms.items()}

    def reduce_modulo(self, ci: CompleteIntersection) -> "ExtElement":
        """Drop coefficients lying in I (coefficients must be homogeneous)."""
        return ExtElement(self.ring, self.degrees, {J: p for J, p in self.terms.items() if not ci.in_ideal(p)})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for J in sorted(self.terms, key=lambda J: (len(J), J)):
            e = "^".join(f"e{r}" for r in J) or "1"
            parts.append(f"({self.terms[J]})*{e}")
        return " + ".join(parts)

    __repr__ = __str__


def wedge(alpha: ExtElement, beta: ExtElement) -> ExtElement:
    """Exterior product, S-bilinear, with the usual reordering signs."""
    alpha._same(beta)
    acc: dict = {}
    for J, p in alpha.terms.items():
        for K, q in beta.terms.items():
            if set(J) & set(K):
                continue
            L = tuple(sorted(J + K))
            term = p * q
            if _merge_sign(J, K) < 0:
                term = -term
            acc[L] = acc[L] + term if L in acc else term
    return ExtElement(alpha.ring, alpha.degrees, acc)


# ---------------------------------------------------------------------------


def ci_ext_dim(ci: CompleteIntersection, i: int, j: int) -> int:
    """dim Ext^i(S/I, S/I)_j = sum over i-subsets J of dim (S/I)_{j + d_J}."""
    if i < 0 or i > ci.c:
        return 0
    return sum(ci.hilbert(j + sum(J)) for J in combinations(ci.degrees, i))


@dataclass(frozen=True)
class RigidityReport:
    a: int
    rigid: bool
    rows: tuple  # (i, internal degree a - i a, dim)

    def __bool__(self) -> bool:
        return self.rigid


def is_a_rigid(source, a: int) -> RigidityReport:
    """Vanishing of Ext^i_{a - ia} for 2 <= i <= length."""
    rows = []
    if isinstance(source, CompleteIntersection):
        for i in range(2, source.c + 1):
            rows.append((i, a - i * a, ci_ext_dim(source, i, a - i * a)))
    elif isinstance(source, Complex):
        for i in range(2, source.length + 1):
            rows.append((i, a - i * a, end_cohomology_dim(source, i, a - i * a)))
    else:
        raise TypeError("expected a CompleteIntersection or a Complex")
    return RigidityReport(a, all(r[2] == 0 for r in rows), tuple(rows))


def socle_degree(ci: CompleteIntersection) -> int:
    if not ci.is_artinian:
        raise NotArtinian(f"{ci.c} generators in {ci.n} variables")
    return sum(ci.degrees) - ci.n


@dataclass(frozen=True)
class RigidityWindow:
    lo: int
    hi: int
    linear: bool

    def __contains__(self, a: int) -> bool:
        return self.lo <= a <= self.hi


def rigidity_window(ci: CompleteIntersection) -> RigidityWindow:
    """The exact interval of non-rigid degrees of an Artinian complete intersection."""
    if not ci.is_artinian:
        raise NotArtinian(f"{ci.c} generators in {ci.n} variables")
    if ci.n < 2:
        raise NotArtinian("rigidity windows need at least two variables")
    d = ci.degrees
    if all(x == 1 for x in d):
        w = RigidityWindow(2, 2, True)
    else:
        w = RigidityWindow(d[0] + d[1] + ci.n - sum(d), d[-2] + d[-1], False)
    for a, want in ((w.lo - 1, True), (w.lo, False), (w.hi, False), (w.hi + 1, True)):
        if is_a_rigid(ci, a).rigid != want:
            raise InvariantViolation(f"window boundary check failed at a={a}")
    return w


# ---------------------------------------------------------------------------
# witnesses


def contraction(K: Complex, T: Sequence[int], coeff: Poly, internal: int | None = None) -> EndElement:
    """coeff times contraction against e*_T on a Koszul complex (0-based indices).

    e_J maps to sign * e_{J - T} when T is inside J, the sign coming from
    contracting t_1 first, then t_2, and so on, each with Koszul signs.
    """
    n = K.module(1).rank
    T = tuple(T)
    k = len(T)
    subsets = [list(combinations(range(n), i)) for i in range(n + 1)]
    ring = K.ring
    zero = ring.zero()
    comps = {}
    for i in range(k, n + 1):
        idx = {J: r for r, J in enumerate(subsets[i - k])}
        rows = [[zero] * len(subsets[i]) for _ in subsets[i - k]]
        for col, J in enumerate(subsets[i]):
            if not set(T) <= set(J):
                continue
            cur = list(J)
            sign = 1
            for t in T:
                pos = cur.index(t)
                if pos % 2:
                    sign = -sign
                cur.pop(pos)
            rows[idx[tuple(cur)]][col] = coeff if sign > 0 else -coeff
        comps[i] = rows
    if internal is None:
        internal = coeff.homogeneous_degree() - sum(
            K.module(1).degrees[t] for t in T
        )
    return EndElement(K, k, internal, {i: HomMap(K.module(i), K.module(i - k), internal, r)
                                        for i, r in comps.items()})


@dataclass
class Witness:
    a: int
    pair: tuple  # 1-based (i, i+1)
    j: int
    monomial: Poly
    class_degree: int  # internal degree of m e_i e_{i+1}, equal to -a
    state: LiftState
    module: DifferentialModule


def nonrigidity_witness(ci: CompleteIntersection, a: int) -> Witness:
    """A degree-a flag on the Koszul complex that is not isomorphic to the fold."""
    if ci.gens is None:
        raise ValueError("witnesses need explicit generators")
    soc = socle_degree(ci)
    d = ci.degrees
    choice = None
    for i in range(ci.n - 1):
        j = d[i] + d[i + 1] - a
        if 0 <= j <= soc:
            choice = (i, j)
            break
    if choice is None:
        raise NoWitnessDegree(f"no consecutive pair gives a degree in [0, {soc}] for a={a}")
    i, j = choice
    m = ci.first_standard_monomial(j)
    if m is None:
        raise NoWitnessDegree(f"(S/I)_{j} is zero")
    K = ci.koszul()
    C = contraction(K, (i, i + 1), m)
    delta2 = C.twisted(1)  # anticommutes with the differential
    zeros = [EndElement.zero(K, jj, a * (1 - jj)) for jj in range(3, K.length + 1)]
    state = LiftState(K, a, [delta2] + zeros)
    D = assemble(state)
    fold_state = LiftState(K, a, [EndElement.zero(K, jj, a * (1 - jj)) for jj in range(2, K.length + 1)],
                           verify=False)
    if find_lift_iso(state.truncate(2), fold_state.truncate(2)) is not None:
        raise InvariantViolation("witness is conjugate to the fold")
    return Witness(a, (i + 1, i + 2), j, m, j - d[i] - d[i + 1], state, D)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Thresholds:
    lower: int  # greatest a such that every a' <= a is rigid
    upper: int  # least a such that every a' >= a is rigid
    always_rigid: bool
    nonrigid: tuple
    lower_is_derived: bool = True  # the a << 0 side is not claimed by the theorem itself


def _thresholds_from(nonrigid: set) -> Thresholds:
    if not nonrigid:
        return Thresholds(0, 0, True, ())
    return Thresholds(min(nonrigid) - 1, max(nonrigid) + 1, False, tuple(sorted(nonrigid)))


def rigid_thresholds(source) -> Thresholds:
    """Thresholds beyond which every degree is rigid, from the Ext support."""
    nonrigid: set = set()
    if isinstance(source, CompleteIntersection):
        if source.c < 2:
            return _thresholds_from(set())
        if not source.is_artinian:
            raise SupportUnbounded("Ext of a non-Artinian complete intersection is not of finite length")
        soc = socle_degree(source)
        for i in range(2, source.c + 1):
            sums = [sum(J) for J in combinations(source.degrees, i)]
            for jdeg in range(-max(sums), soc - min(sums) + 1):
                if ci_ext_dim(source, i, jdeg) and jdeg % (i - 1) == 0:
                    nonrigid.add(-jdeg // (i - 1))
        return _thresholds_from(nonrigid)
    if not isinstance(source, Complex):
        raise TypeError("expected a CompleteIntersection or a Complex")
    cx = source
    if cx.length < 2 or all(F.rank == 0 for F in cx.modules):
        return _thresholds_from(set())
    # finite length of the homology module, checked on a window
    degs = [g for F in cx.modules for g in F.degrees]
    slack = cx.ring.nvars * max(cx.max_entry_degree(), 1) + 2
    lo0 = min(cx.module(0).degrees, default=0)
    win = (lo0, max(degs) + slack)
    h0 = anchor_h0_hilbert(cx, win)
    tail = [h0[j] for j in range(win[1] - cx.ring.nvars, win[1] + 1)]
    if any(tail):
        raise SupportUnbounded("anchor homology does not vanish at the end of the check window")
    top = max((j for j, v in h0.items() if v), default=lo0)
    for i in range(2, cx.length + 1):
        pairs = [(gt, gs) for k in range(i, cx.length + 1)
                 for gs in cx.module(k).degrees for gt in cx.module(k - i).degrees]
        if not pairs:
            continue
        dmin = min(gt - gs for gt, gs in pairs)
        dmax = top - min(g for k in range(i, cx.length + 1) for g in cx.module(k).degrees)
        for jdeg in range(dmin, dmax + 3):
            dim = end_cohomology_dim(cx, i, jdeg)
            if dim and jdeg > dmax:
                raise SupportUnbounded(f"H^{i}(End) is nonzero in degree {jdeg} beyond the expected bound")
            if dim and jdeg % (i - 1) == 0:
                nonrigid.add(-jdeg // (i - 1))
    return _thresholds_from(nonrigid)
