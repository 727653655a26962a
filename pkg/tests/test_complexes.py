import random

import pytest
from hypothesis import given, strategies as st

from flagforge.complexes import (
    EndElement,
    apply_end_differential,
    check_complex,
    end_cohomology_dim,
    end_slice,
    find_nullhomotopy,
    is_chain_map,
    koszul,
    left_mult,
    pfaffian,
    pfaffian_resolution,
)
from flagforge.errors import NotAChainMap
from flagforge.polyring import PolyRing, compose

S = PolyRing(["x", "y"])
T = PolyRing(["x", "y", "z"])


def test_koszul_shape_and_square_zero():
    K = koszul(T, ["x", "y^2", "z"])
    assert K.ranks() == [1, 3, 3, 1]
    assert check_complex(K)
    assert K.is_minimal()
    assert sorted(K.module(1).degrees) == [1, 1, 2]
    assert K.module(3).degrees == (4,)


def test_broken_complex_reported():
    K = koszul(S, ["x", "y"])
    from flagforge.complexes import Complex
    from flagforge.polyring import HomMap

    bad = Complex(S, K.modules, [K.maps[0], HomMap(K.module(2), K.module(1), 0, [["y"], ["y"]])])
    rep = check_complex(bad)
    assert not rep and rep.index == 2


@pytest.mark.parametrize("m", [-1, 0, 1, 2])
def test_end_differential_squares_to_zero(m):
    K = koszul(T, ["x", "y", "z"])
    rng = random.Random(m)
    for d in (-2, -1, 0):
        sl = end_slice(K, m, d)
        if not sl.dimension:
            continue
        phi = sl.element([rng.randint(-2, 2) for _ in range(sl.dimension)])
        assert apply_end_differential(apply_end_differential(phi)).is_zero()


def test_identity_and_differential_are_cycles():
    K = koszul(S, ["x", "y"])
    assert is_chain_map(EndElement.identity(K))
    assert apply_end_differential(K.differential()).is_zero()


def test_end_cohomology_of_koszul_xy():
    K = koszul(S, ["x", "y"])
    # End(K) is quasi-isomorphic to Ext of the residue field: Lambda(e1, e2)
    assert end_cohomology_dim(K, 0, 0) == 1
    assert end_cohomology_dim(K, 1, -1) == 2
    assert end_cohomology_dim(K, 2, -2) == 1
    assert end_cohomology_dim(K, 2, 0) == 0
    assert end_cohomology_dim(K, 1, 0) == 0


def test_nullhomotopy_of_multiplication_by_variable():
    K = koszul(S, ["x", "y"])
    x_id = EndElement(K, 0, 1, {i: _mult(c, S("x")) for i, c in EndElement.identity(K).comps.items()})
    h = find_nullhomotopy(x_id)
    assert h is not None
    assert apply_end_differential(h) == x_id


def _mult(hm, f):
    from flagforge.polyring import HomMap

    return HomMap(hm.source, hm.target, hm.degree + 1, [[e * f for e in row] for row in hm.entries])


def test_nullhomotopy_rejects_non_cycle():
    K = koszul(S, ["x", "y"])
    phi = EndElement.single_block(K, 0, 1, [["x", "0"], ["0", "0"]])
    with pytest.raises(NotAChainMap):
        find_nullhomotopy(phi)


def test_pfaffian_small():
    R = PolyRing(["a", "b", "c", "d", "e", "f"])
    z = R.zero()
    a, b, c, d, e, f = R.gens()
    A = [[z, a, b, c], [-a, z, d, e], [-b, -d, z, f], [-c, -e, -f, z]]
    assert pfaffian(A, R) == a * f - b * e + c * d
    assert pfaffian([[z, a, b], [-a, z, c], [-b, -c, z]], R) == z


@pytest.fixture(scope="module")
def pf():
    R = PolyRing([f"x{i}{j}" for i in range(1, 6) for j in range(i + 1, 6)])
    return R, pfaffian_resolution(R)


def test_pfaffian_resolution_is_complex(pf):
    R, C = pf
    assert C.ranks() == [1, 5, 5, 1]
    assert check_complex(C)
    assert C.products.pf_deleting(0) == R("x23*x45 - x24*x35 + x25*x34")


def test_pfaffian_left_mult_matrix(pf):
    R, C = pf
    ell = left_mult(1, C)
    mid = ell.comps[1].entries
    # multiplication by e1 sends e_j to a combination of f's with pfaffian coefficients
    expected = [
        ["0", "0", "0", "0", "0"],
        ["0", "0", "x45", "-x35", "x34"],
        ["0", "-x45", "0", "x25", "-x24"],
        ["0", "x35", "-x25", "0", "x23"],
        ["0", "-x34", "x24", "-x23", "0"],
    ]
    assert [[str(e) for e in row] for row in mid] == expected
    assert [[str(e) for e in row] for row in ell.comps[0].entries] == [["1"], ["0"], ["0"], ["0"], ["0"]]
    assert [[str(e) for e in row] for row in ell.comps[2].entries] == [["1", "0", "0", "0", "0"]]


def test_pfaffian_product_is_minus_leibniz(pf):
    R, C = pf
    data = C.products
    d1 = C.maps[0].entries[0]
    d2 = C.maps[1].entries
    for i in range(5):
        for j in range(5):
            # Leibniz: d(e_i e_j) = d(e_i) e_j - e_i d(e_j) in F_1
            prod = data.ee[(i, j)]
            lhs = [sum((d2[r][k] * prod[k] for k in range(5)), R.zero()) for r in range(5)]
            rhs = [(d1[i] if r == j else R.zero()) - (d1[j] if r == i else R.zero()) for r in range(5)]
            assert lhs == [-v for v in rhs], (i, j)
            assert prod == [-v for v in data.ee[(j, i)]]


def test_first_differential_kills_matrix(pf):
    R, C = pf
    assert compose(C.maps[0], C.maps[1]).is_zero()
