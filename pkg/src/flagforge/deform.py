"""Iterative lifting of a complex to free flags.

A stage-i state stores delta_2..delta_i, where delta_j is an element of
End^j with internal degree a(1-j) and delta_1 is the anchor differential.
The truncated square-zero identities are the ungraded relations

    sum_{j+k=s} delta_j delta_k = 0      for s = 2..i+1,

so the next map must solve delta_1 h + h delta_1 = omega with
omega = -sum_{j=2}^{i} delta_j delta_{i+2-j}.  Two lifts are equivalent
exactly when they differ by g delta_1 - delta_1 g, g in End^i.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .complexes import (
    Complex,
    EndElement,
    HomotopySolution,
    apply_end_differential,
    coboundary_vectors,
    cocycle_basis,
    end_cohomology_dim,
    end_slice,
    is_chain_map,
    solve_homotopy,
)
from .diffmod import DifferentialModule, block_matrix_module, validate_flag
from .errors import BudgetExceeded, HomotopyInvalid, InvariantViolation, SquareNonzero
from .exactfield import _eliminate
from .polyring import HomMap, compose

__all__ = [
    "LiftState",
    "LiftSpace",
    "Obstructed",
    "ConjugationCertificate",
    "FlagClass",
    "EnumerationResult",
    "DimBounds",
    "obstruction",
    "lift",
    "lift_space",
    "homotopic_lift_iso",
    "find_lift_iso",
    "assemble",
    "rescale",
    "state_from_flag",
    "state_matrix",
    "enumerate_flags",
    "dim_bounds",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**6


def _odd_sign(k: int) -> int:
    return -1 if k % 2 else 1


class LiftState:
    """Anchor, degree a and the maps delta_2..delta_i (stage i)."""

    __slots__ = ("anchor", "degree", "deltas")

    def __init__(self, anchor: Complex, a: int, deltas: Sequence[EndElement] = (), verify: bool = True):
        self.anchor = anchor
        self.degree = int(a)
        fixed = []
        for j, dj in enumerate(deltas, start=2):
            if dj.complex is not anchor and dj.complex != anchor:
                raise InvariantViolation(f"delta_{j} lives on a different complex")
            if dj.degree != j:
                raise InvariantViolation(f"delta_{j} has cohomological degree {dj.degree}")
            want = self.degree * (1 - j)
            if dj.internal != want:
                if not dj.is_zero():
                    raise InvariantViolation(f"delta_{j} has internal degree {dj.internal}, expected {want}")
                dj = EndElement.zero(anchor, j, want)
            fixed.append(dj)
        self.deltas = tuple(fixed)
        if verify:
            self.verify()

    @classmethod
    def initial(cls, anchor: Complex, a: int) -> "LiftState":
        return cls(anchor, a, ())

    @property
    def stage(self) -> int:
        return 1 + len(self.deltas)

    @property
    def length(self) -> int:
        return self.anchor.length

    def delta(self, j: int) -> EndElement:
        if j == 1:
            return self.anchor.differential()
        if 2 <= j <= self.stage:
            return self.deltas[j - 2]
        return EndElement.zero(self.anchor, j, self.degree * (1 - j))

    def relation(self, s: int) -> EndElement:
        """sum over j+k = s (1 <= j,k <= stage) of delta_j delta_k."""
        total = EndElement.zero(self.anchor, s, self.degree * (2 - s))
        for j in range(1, s):
            k = s - j
            if j > self.stage or k > self.stage:
                continue
            total = total + (self.delta(j) @ self.delta(k))
        return total

    def verify(self) -> None:
        for s in range(3, self.stage + 2):
            if not self.relation(s).is_zero():
                raise InvariantViolation(f"truncated square-zero identity fails in level drop {s}")

    def truncate(self, p: int) -> "LiftState":
        return LiftState(self.anchor, self.degree, self.deltas[: max(p - 1, 0)], verify=False)

    def extend(self, dnext: EndElement, verify: bool = True) -> "LiftState":
        return LiftState(self.anchor, self.degree, self.deltas + (dnext,), verify=verify)

    def rescaled(self, lam) -> "LiftState":
        fld = self.anchor.ring.field
        lam = fld(lam)
        if not lam:
            raise ValueError("rescaling factor must be nonzero")
        return LiftState(self.anchor, self.degree,
                         [dj.scale(fld.normalize(lam ** (j - 1))) for j, dj in enumerate(self.deltas, start=2)],
                         verify=False)

    def is_fold(self) -> bool:
        return all(dj.is_zero() for dj in self.deltas)

    def first_nonzero(self) -> int | None:
        for j, dj in enumerate(self.deltas, start=2):
            if not dj.is_zero():
                return j
        return None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LiftState)
            and self.anchor == other.anchor
            and self.degree == other.degree
            and self.deltas == other.deltas
        )

    def __repr__(self) -> str:
        return f"LiftState(stage={self.stage}, a={self.degree}, nonzero={[j for j, d in enumerate(self.deltas, 2) if not d.is_zero()]})"


@dataclass
class Obstructed:
    """The obstruction at this stage is not nullhomotopic."""

    stage: int
    cohomological_degree: int
    internal_degree: int
    witness: list | None
    message: str

    def __bool__(self) -> bool:
        return False


@dataclass
class LiftSpace:
    stage: int
    particular: EndElement | None
    cocycles: list  # EndElements solving delta_1 h + h delta_1 = 0
    coboundaries: list  # EndElements g delta_1 - delta_1 g (a basis)
    quotient_dim: int
    complement: list  # representatives of a basis of cocycles / coboundaries
    # coordinate data, used by enumeration
    _cocycle_vecs: list = field(default_factory=list, repr=False)
    _b_rows: list = field(default_factory=list, repr=False)
    _b_piv: list = field(default_factory=list, repr=False)
    _complement_vecs: list = field(default_factory=list, repr=False)
    _particular_vec: list | None = field(default=None, repr=False)

    @property
    def cocycle_dim(self) -> int:
        return len(self.cocycles)

    @property
    def coboundary_dim(self) -> int:
        return len(self.coboundaries)


def obstruction(s: LiftState) -> EndElement:
    """omega = -sum_{j=2}^{i} delta_j delta_{i+2-j}, internal degree 2a-(i+2)a.

    omega commutes with delta_1; omega precomposed with sigma^i is a chain
    map for the graded sign rule.
    """
    i = s.stage
    a = s.degree
    total = EndElement.zero(s.anchor, i + 2, a * (2 - (i + 2)))
    for j in range(2, i + 1):
        total = total + (s.delta(j) @ s.delta(i + 2 - j))
    omega = -total
    if not is_chain_map(omega, sign=1):
        raise InvariantViolation("obstruction does not commute with the differential")
    return omega


def _forced_internal(s: LiftState) -> int:
    return -s.stage * s.degree


def lift(s: LiftState, choice="canonical"):
    """Next stage: canonical particular solution plus an optional cocycle combination.

    ``choice`` is "canonical", a list of cocycle coordinates (relative to
    lift_space(s).cocycles), or an explicit EndElement to validate.
    """
    if s.stage >= s.length:
        raise ValueError(f"state is already at stage {s.stage} = anchor length")
    omega = obstruction(s)
    sol = solve_homotopy(omega, sign=-1, want_witness=True)
    if sol.homotopy is None:
        i = s.stage
        return Obstructed(
            stage=i,
            cohomological_degree=i + 2,
            internal_degree=omega.internal,
            witness=sol.witness,
            message=(
                f"obstruction in End^{i + 2} of internal degree {omega.internal} is not nullhomotopic; "
                f"a left-null vector of the {sol.equations}x{sol.unknowns} homotopy system pairs to 1 "
                "with the obstruction coordinates"
            ),
        )
    if isinstance(choice, EndElement):
        nxt = choice
        check = apply_end_differential(nxt, sign=-1) - omega
        if not check.is_zero():
            raise InvariantViolation("supplied map does not solve the lifting equation")
    elif isinstance(choice, str):
        if choice != "canonical":
            raise ValueError(f"unknown lift choice {choice!r}")
        nxt = sol.homotopy
    else:
        coords = list(choice)
        cx = s.anchor
        m, d = s.stage + 1, _forced_internal(s)
        basis = cocycle_basis(cx, m, d, -1)
        if len(coords) != len(basis):
            raise ValueError(f"expected {len(basis)} cocycle coordinates, got {len(coords)}")
        sl = end_slice(cx, m, d)
        vec = sl.coords(sol.homotopy)
        fld = cx.ring.field
        for c, z in zip(coords, basis):
            c = fld(c)
            if c:
                vec = [fld.normalize(x + c * y) for x, y in zip(vec, z)]
        nxt = sl.element(vec)
    return s.extend(nxt)


def _reduce(vec: list, rows: list, piv: list, fld) -> list:
    """Normal form of vec modulo the row space of a reduced echelon basis."""
    v = list(vec)
    for r, pc in zip(rows, piv):
        c = v[pc]
        if c:
            for j, x in r.items():
                v[j] = fld.normalize(v[j] - c * x)
    return v


def lift_space(s: LiftState) -> LiftSpace:
    """Particular solution, cocycles, coboundaries and their quotient."""
    cx = s.anchor
    fld = cx.ring.field
    m, d = s.stage + 1, _forced_internal(s)
    sl = end_slice(cx, m, d)
    n = sl.dimension
    if s.stage < s.length:
        omega = obstruction(s)
        sol = solve_homotopy(omega, sign=-1)
        part = sol.homotopy
    else:
        part = EndElement.zero(cx, m, d)
    zvecs = cocycle_basis(cx, m, d, -1)
    bvecs = coboundary_vectors(cx, m, d, 1)
    b_rows, b_piv = _eliminate(fld, bvecs, n)
    reduced = [_reduce(z, b_rows, b_piv, fld) for z in zvecs]
    q_rows, q_piv = _eliminate(fld, [{j: x for j, x in enumerate(v) if x} for v in reduced], n)
    comp_vecs = []
    for r in q_rows:
        v = [0] * n
        for j, x in r.items():
            v[j] = x
        comp_vecs.append(v)
    b_dense = []
    for r in b_rows:
        v = [0] * n
        for j, x in r.items():
            v[j] = x
        b_dense.append(v)
    return LiftSpace(
        stage=s.stage,
        particular=part,
        cocycles=[sl.element(z) for z in zvecs],
        coboundaries=[sl.element(v) for v in b_dense],
        quotient_dim=len(comp_vecs),
        complement=[sl.element(v) for v in comp_vecs],
        _cocycle_vecs=zvecs,
        _b_rows=b_rows,
        _b_piv=b_piv,
        _complement_vecs=comp_vecs,
        _particular_vec=None if part is None else sl.coords(part),
    )


# ---------------------------------------------------------------------------
# flags, conjugation


def state_matrix(s: LiftState) -> DifferentialModule:
    """Folded module with blocks delta_1..delta_i (d^2 not checked)."""
    cx = s.anchor
    a = s.degree
    blocks = {}
    for j in range(1, s.stage + 1):
        dj = s.delta(j)
        for i, comp in dj.comps.items():
            if not comp.is_zero() or j == 1:
                blocks[(i - j, i)] = comp.entries
    module, levels, M = block_matrix_module(
        [[g - i * a for g in cx.module(i).degrees] for i in range(cx.length + 1)], blocks, cx.ring
    )
    return DifferentialModule(module, a, HomMap(module, module, a, M, check=False), levels, check=False)


def assemble(s: LiftState) -> DifferentialModule:
    """The flag obtained from a complete state; checks d^2 = 0 and the anchor."""
    if s.stage < max(s.length, 1):
        raise ValueError(f"state at stage {s.stage} is incomplete (anchor length {s.length})")
    D = state_matrix(s)
    if not compose(D.d, D.d).is_zero():
        raise SquareNonzero("assembled flag does not square to zero")
    D = DifferentialModule(D.module, D.degree, D.d, D.flag_levels, check=False)
    D._check_flag()
    if validate_flag(D) != s.anchor:
        raise InvariantViolation("assembled flag does not recover its anchor")
    return D


def state_from_flag(D: DifferentialModule) -> LiftState:
    """Read delta_2..delta_l off a flag, as a complete state on its anchor."""
    cx = validate_flag(D)
    a = D.degree
    deltas = []
    for j in range(2, cx.length + 1):
        comps = {}
        for i in range(j, cx.length + 1):
            ent = D.block(i - j, i)
            comps[i] = HomMap(cx.module(i), cx.module(i - j), a * (1 - j), ent)
        deltas.append(EndElement(cx, j, a * (1 - j), comps))
    return LiftState(cx, a, deltas)


def rescale(D: DifferentialModule, lam) -> DifferentialModule:
    """Multiply the block dropping j levels by lam^(j-1)."""
    fld = D.ring.field
    lam = fld(lam)
    if not lam:
        raise ValueError("rescaling factor must be invertible")
    if D.flag_levels is None:
        raise ValueError("rescale needs flag data")
    lev = D.levels
    M = [
        [e.scale(fld.normalize(lam ** (lev[c] - lev[r] - 1))) if e.terms else e for c, e in enumerate(row)]
        for r, row in enumerate(D.d.entries)
    ]
    return DifferentialModule(D.module, D.degree, HomMap(D.module, D.module, D.degree, M, check=False),
                              D.flag_levels)


@dataclass
class ConjugationCertificate:
    stage: int
    P: HomMap
    P_inverse: HomMap
    conjugated: HomMap  # P^{-1} d P
    target: HomMap  # d' (blocks up to the stage)
    verified: bool


def _level_truncate(M: HomMap, levels: list[int], bound: int) -> list[list]:
    zero = M.ring.zero()
    return [
        [e if lev_c - levels[r] <= bound else zero for lev_c, e in zip(levels, row)]
        for r, row in enumerate(M.entries)
    ]


def homotopic_lift_iso(s: LiftState, s2: LiftState, h: EndElement | None) -> ConjugationCertificate:
    """Certify that two stage-n states differing only in delta_n are isomorphic.

    Requires delta_n - delta'_n = h delta_1 - delta_1 h with h in End^{n-1};
    builds P = id + h and checks P^{-1} d P = d' through level drop n.
    """
    if s.anchor != s2.anchor or s.degree != s2.degree or s.stage != s2.stage:
        raise HomotopyInvalid("states have different anchors, degrees or stages")
    n = s.stage
    if n < 2:
        raise HomotopyInvalid("stage-1 states carry no choices")
    for j in range(2, n):
        if s.delta(j) != s2.delta(j):
            raise HomotopyInvalid(f"states differ in delta_{j} < delta_{n}")
    cx = s.anchor
    a = s.degree
    want_internal = a * (1 - n)
    if h is None:
        h = EndElement.zero(cx, n - 1, want_internal)
    if h.degree != n - 1:
        raise HomotopyInvalid(f"h must have cohomological degree {n - 1}")
    diff = s.delta(n) - s2.delta(n)
    rhs = (h @ cx.differential()) - (cx.differential() @ h)
    try:
        mismatch = not (diff - rhs).is_zero()
    except Exception as exc:  # incompatible degrees
        raise HomotopyInvalid(f"h has the wrong shape: {exc}") from None
    if mismatch:
        raise HomotopyInvalid("delta_n - delta'_n is not h d - d h")
    D = state_matrix(s)
    D2 = state_matrix(s2)
    module = D.module
    levels = D.levels
    # H: the block of h from level q to level q-n+1
    blocks = {}
    for q, comp in h.comps.items():
        if not comp.is_zero():
            blocks[(q - n + 1, q)] = comp.entries
    _, _, Hm = block_matrix_module(
        [[g - i * a for g in cx.module(i).degrees] for i in range(cx.length + 1)], blocks, cx.ring
    )
    H = HomMap(module, module, 0, Hm, check=True)
    ident = HomMap.identity(module)
    P = ident + H
    # P^{-1} = sum (-H)^k; H is nilpotent because it lowers the level
    Pinv = ident
    term = ident
    for _ in range(cx.length + 1):
        term = compose(-H, term)
        if term.is_zero():
            break
        Pinv = Pinv + term
    if not compose(Pinv, P) == ident:
        raise InvariantViolation("failed to invert P")
    conj = compose(compose(Pinv, D.d), P)
    lhs = _level_truncate(conj, levels, n)
    rhs_m = _level_truncate(D2.d, levels, n)
    ok = [list(r) for r in lhs] == [list(r) for r in rhs_m]
    if not ok:
        raise HomotopyInvalid("conjugation identity fails (engine inconsistency)")
    return ConjugationCertificate(n, P, Pinv, conj, D2.d, True)


def find_lift_iso(s: LiftState, s2: LiftState) -> ConjugationCertificate | None:
    """Solve for h and certify, or None when delta_n - delta'_n is no such coboundary."""
    n = s.stage
    diff = s.delta(n) - s2.delta(n)
    # h d - d h = diff  <=>  d(-h) - (-h) d = diff
    sol: HomotopySolution = solve_homotopy(diff, sign=1)
    if sol.homotopy is None:
        return None
    return homotopic_lift_iso(s, s2, -sol.homotopy)


# ---------------------------------------------------------------------------
# enumeration over finite fields


@dataclass
class FlagClass:
    state: LiftState
    multiplicity: int

    @property
    def flag(self) -> DifferentialModule:
        return assemble(self.state)


@dataclass
class EnumerationResult:
    classes: list
    log: list
    label: str = "stage-wise classes"

    def __len__(self) -> int:
        return len(self.classes)


def _budget(budget: int | None) -> int:
    env = os.environ.get("FLAGFORGE_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET if budget is None else int(budget)


def enumerate_flags(anchor: Complex, a: int, p: int, budget: int | None = None,
                    mode: str = "auto", verify_merges: int = 4) -> EnumerationResult:
    """Breadth-first enumeration of degree-a flags on an anchor over GF(p).

    At each stage every admissible next map is reduced modulo coboundaries;
    equal normal forms are homotopic lifts and hence isomorphic stage-wise.
    ``mode`` is "exhaustive" (walk every cocycle choice), "quotient" (walk a
    complement of the coboundaries) or "auto" (exhaustive when affordable).
    """
    if mode not in ("auto", "exhaustive", "quotient"):
        raise ValueError(f"unknown mode {mode!r}")
    if p == 0:
        raise ValueError("enumeration needs a finite field")
    cx = anchor if anchor.ring.characteristic == p else anchor.over_characteristic(p)
    fld = cx.ring.field
    remaining = _budget(budget)
    states = [(LiftState.initial(cx, a), 1)]
    log = []
    for i in range(1, cx.length):
        nxt = []
        for s, mult in states:
            ls = lift_space(s)
            entry = {
                "stage": i,
                "cocycle_dim": ls.cocycle_dim,
                "coboundary_dim": len(ls._b_rows),
                "quotient_dim": ls.quotient_dim,
            }
            if ls.particular is None:
                entry["event"] = "obstructed"
                log.append(entry)
                continue
            z = ls.cocycle_dim
            q = ls.quotient_dim
            exhaustive = mode == "exhaustive" or (mode == "auto" and p ** z <= remaining)
            sl = end_slice(cx, i + 1, -i * a)
            part = ls._particular_vec
            classes: dict = {}
            if exhaustive:
                if p ** z > remaining:
                    raise BudgetExceeded(f"{p}^{z} cocycle choices exceed the remaining budget {remaining}")
                remaining -= p ** z
                members: dict = {}
                for coeffs in product(range(p), repeat=z):
                    v = list(part)
                    for c, zv in zip(coeffs, ls._cocycle_vecs):
                        if c:
                            v = [(x + c * y) % p for x, y in zip(v, zv)]
                    key = tuple(_reduce(v, ls._b_rows, ls._b_piv, fld))
                    classes[key] = classes.get(key, 0) + 1
                    if len(members.setdefault(key, [])) < verify_merges:
                        members[key].append(v)
                entry["mode"] = "exhaustive"
            else:
                if p ** q > remaining:
                    raise BudgetExceeded(f"{p}^{q} quotient points exceed the remaining budget {remaining}")
                remaining -= p ** q
                base = _reduce(part, ls._b_rows, ls._b_piv, fld)
                size = p ** (z - q)
                members = {}
                for coeffs in product(range(p), repeat=q):
                    v = list(base)
                    for c, cv in zip(coeffs, ls._complement_vecs):
                        if c:
                            v = [(x + c * y) % p for x, y in zip(v, cv)]
                    key = tuple(v)
                    classes[key] = size
                    members[key] = [list(part)] if not any(coeffs) else []
                entry["mode"] = "quotient"
            entry["classes"] = len(classes)
            log.append(entry)
            for key in sorted(classes):
                rep = s.extend(sl.element(list(key)))
                for v in members.get(key, []):
                    if list(v) != list(key):
                        other = s.extend(sl.element(v))
                        if find_lift_iso(other, rep) is None:
                            raise InvariantViolation("merged lifts are not homotopic")
                nxt.append((rep, mult * classes[key]))
        states = nxt
    return EnumerationResult([FlagClass(s, m) for s, m in states], log)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimBounds:
    lower: int
    upper: int
    upper_terms: tuple  # (i, internal degree, dim)
    correction_terms: tuple

    def __iter__(self):
        return iter((self.lower, self.upper))


def dim_bounds(anchor: Complex, a: int) -> DimBounds:
    """Integer bounds on the dimension of the space of degree-a flags.

    upper = sum_{i=2}^{l} dim H^i(End)_{a-ia};
    lower = upper - sum_{i=4}^{l} dim H^i(End)_{2a-ia}, clamped at 0.
    """
    ell = anchor.length
    up = tuple((i, a - i * a, end_cohomology_dim(anchor, i, a - i * a)) for i in range(2, ell + 1))
    corr = tuple((i, 2 * a - i * a, end_cohomology_dim(anchor, i, 2 * a - i * a)) for i in range(4, ell + 1))
    upper = sum(t[2] for t in up)
    lower = max(0, upper - sum(t[2] for t in corr))
    return DimBounds(lower, upper, up, corr)
