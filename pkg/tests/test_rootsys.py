from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SMALL_SYSTEMS, systems
from fusionwalk.errors import InvalidInputError
from fusionwalk.rootsys import RootSystem, build_root_system, orthogonal_coords, weyl_group

# (family, rank) -> (h dual, |R+|); standard tables
CLASSICAL = {
    ("A", 1): (2, 1), ("A", 2): (3, 3), ("A", 3): (4, 6), ("A", 4): (5, 10),
    ("B", 2): (3, 4), ("B", 3): (5, 9), ("B", 4): (7, 16),
    ("C", 2): (3, 4), ("C", 3): (4, 9), ("C", 4): (5, 16),
    ("D", 3): (4, 6), ("D", 4): (6, 12), ("D", 5): (8, 20),
}


@pytest.mark.parametrize("key", sorted(CLASSICAL))
def test_dual_coxeter_and_root_count(key):
    rs = build_root_system(*key)
    h, npos = CLASSICAL[key]
    assert rs.dual_coxeter == h
    assert rs.n_positive_roots == npos
    assert rs.dual_coxeter == 1 + sum(rs.theta_coroot_pairing_vector)


@pytest.mark.parametrize("key", sorted(CLASSICAL))
def test_weyl_order_is_regular_orbit_size(key):
    rs = build_root_system(*key)
    assert len(rs.weyl_orbit(rs.rho)) == rs.weyl_order
    mats, dets = weyl_group(rs)
    assert len(mats) == rs.weyl_order
    assert sorted(set(dets.tolist())) == [-1, 1]


@pytest.mark.parametrize("key", SMALL_SYSTEMS)
def test_highest_root_is_long_and_cartan_consistent(key):
    rs = build_root_system(*key)
    assert rs.inner_product(rs.theta, rs.theta) == 2
    assert rs.level_of(rs.theta) == 2
    assert rs.level_of(rs.rho) == rs.dual_coxeter - 1
    for i, ai in enumerate(rs.simple_roots):
        for j, aj in enumerate(rs.simple_roots):
            assert rs.cartan[i][j] == 2 * rs.inner_product(ai, aj) / rs.inner_product(aj, aj)


def test_type_c_gram_matrix():
    rs = build_root_system("C", 4)
    assert rs.gram == tuple(tuple(Fraction(min(i, j), 2) for j in range(1, 5)) for i in range(1, 5))


@pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("C", 3), ("D", 4)])
def test_orthogonal_coordinates_are_isometric(key):
    rs = build_root_system(*key)
    scale = Fraction(1, 2) if rs.family == "C" else Fraction(1)
    for a in rs.fundamental_weights:
        for b in rs.fundamental_weights:
            ea, eb = orthogonal_coords(rs, a), orthogonal_coords(rs, b)
            assert rs.inner_product(a, b) == scale * sum(x * y for x, y in zip(ea, eb))


def test_fold_finite_examples():
    rs = build_root_system("A", 1)
    assert rs.fold_finite((-2,)) == ((0,), -1)
    assert rs.fold_finite((-1,))[1] == 0
    assert rs.fold_finite((3,)) == ((3,), 1)


def test_json_round_trip():
    for fam, r in SMALL_SYSTEMS:
        rs = build_root_system(fam, r)
        assert RootSystem.from_json(rs.to_json()) is rs


@pytest.mark.parametrize("fam,rank", [("E", 6), ("A", 0), ("B", 1), ("D", 2)])
def test_unsupported_systems_rejected(fam, rank):
    with pytest.raises(InvalidInputError):
        build_root_system(fam, rank)


weights = st.lists(st.integers(-6, 6), min_size=4, max_size=4)


@given(systems(), weights, st.data())
def test_reflection_is_an_involution_preserving_norm(rs, w, data):
    w = tuple(w[: rs.rank])
    i = data.draw(st.integers(0, rs.rank - 1))
    s = rs.reflect(w, i)
    assert rs.reflect(s, i) == w
    assert rs.inner_product(s, s) == rs.inner_product(w, w)


@given(systems(), weights)
def test_fold_finite_lands_in_the_chamber(rs, w):
    x = tuple(w[: rs.rank])
    mu, sign = rs.fold_finite(x)
    xr = tuple(a + 1 for a in x)
    if sign == 0:
        # some root hyperplane contains x + rho
        assert any(rs.coroot_pairing(xr, j) == 0 for j in range(rs.n_positive_roots))
    else:
        assert rs.is_dominant(mu)
        mr = tuple(a + 1 for a in mu)
        assert rs.inner_product(mr, mr) == rs.inner_product(xr, xr)
        assert mr in rs.weyl_orbit(xr)
