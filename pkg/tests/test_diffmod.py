import pytest
from hypothesis import given, strategies as st

from flagforge.complexes import EndElement, koszul
from flagforge.deform import LiftState, assemble
from flagforge.diffmod import (
    DifferentialModule,
    anchor_h0_hilbert,
    curvature,
    default_window,
    fold,
    homology_hilbert,
    matrix_factorization,
    minimize,
    validate_flag,
)
from flagforge.errors import FactorizationError, FlagViolation, ParityMissing, SquareNonzero
from flagforge.polyring import GradedFreeModule, HomMap, PolyRing, compose

S = PolyRing(["x", "y"])
K = koszul(S, ["x", "y"])


@pytest.mark.parametrize("a", [-2, 0, 1, 3])
def test_fold_recovers_anchor(a):
    D = fold(K, a)
    assert D.rank == 4
    assert compose(D.d, D.d).is_zero()
    assert validate_flag(D) == K
    assert D.module.degrees == (0, 1 - a, 1 - a, 2 - 2 * a)


@pytest.mark.parametrize("a", [0, 1, 2, 5])
def test_fold_homology_is_residue_field(a):
    D = fold(K, a)
    win = (-3, 6)
    h = homology_hilbert(D, win)
    assert h == anchor_h0_hilbert(K, win)
    assert h == {j: int(j == 0) for j in range(-3, 7)}


def test_square_nonzero_rejected():
    F = GradedFreeModule(S, [0, 0])
    d = HomMap(F, F, 1, [["0", "x"], ["x", "0"]])
    with pytest.raises(SquareNonzero):
        DifferentialModule(F, 1, d)


def test_flag_violation_detected():
    F = GradedFreeModule(S, [0, 0])
    d = HomMap(F, F, 1, [["0", "0"], ["x", "0"]])
    with pytest.raises(FlagViolation):
        DifferentialModule(F, 1, d, flag_levels=[[0], [1]])


def test_minimize_strips_unit_strip():
    D = assemble(LiftState.initial(K, 2).extend(EndElement.single_block(K, 2, 2, [["1"]])))
    Dm, rec = minimize(D)
    assert Dm.rank == 2 and rec.total == 2
    assert all(not e.is_constant() or e.is_zero() for row in Dm.matrix for e in row)
    win = default_window(D)
    assert homology_hilbert(Dm, win) == homology_hilbert(D, win)


def test_minimize_is_identity_on_minimal_input():
    D = fold(K, 1)
    Dm, rec = minimize(D)
    assert Dm is D
    assert rec.as_dict() == {0: 4}


@given(st.integers(-3, 3), st.integers(-2, 2))
def test_homology_stable_under_unit_strip(a, c):
    # add a cancelling unit pair between twisted copies
    D = fold(K, a)
    h1 = homology_hilbert(D, (-4, 8))
    degs = list(D.module.degrees) + [c, c + a]
    F = GradedFreeModule(S, degs)
    z = S.zero()
    M = [list(r) + [z, z] for r in D.matrix] + [[z] * 6, [z] * 6]
    M[5][4] = S.one()
    E = DifferentialModule(F, a, HomMap(F, F, a, M))
    Em, rec = minimize(E)
    assert rec.total == 4
    assert homology_hilbert(Em, (-4, 8)) == h1 == homology_hilbert(E, (-4, 8))


def test_curvature_and_matrix_factorization_simple():
    F = GradedFreeModule(S, [0, 0])
    d = HomMap(F, F, 1, [["0", "y"], ["x", "0"]])
    assert curvature(d) == S("x*y")
    D = DifferentialModule(F, 1, d, flag_levels=[[0], [1]], check=False)
    mf = matrix_factorization(D)
    assert [[str(e) for e in r] for r in mf.A] == [["y"]]
    assert [[str(e) for e in r] for r in mf.B] == [["x"]]
    with pytest.raises(ParityMissing):
        matrix_factorization(DifferentialModule(F, 1, d, check=False))


def test_non_scalar_square_has_no_curvature():
    F = GradedFreeModule(S, [0, 0])
    d = HomMap(F, F, 1, [["x", "y"], ["x", "0"]], check=False)
    assert curvature(d) is None
    D = DifferentialModule(F, 1, d, flag_levels=[[0], [1]], check=False)
    with pytest.raises(FactorizationError):
        matrix_factorization(D)
