import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import systems
from oracles import kostant_multiplicity, su2_character
from fusionwalk.charlib import (
    DiscretizedCharacterEvaluator,
    WeightMultiplicityMap,
    asymptotic_dim,
    check_in_alcove,
    dim,
    discretized_character,
    is_minuscule,
    is_quasi_minuscule,
    sine_product,
    tensor_decompose,
    tensor_power_multiplicities,
    weight_multiplicities,
)
from fusionwalk.errors import BoundExceededError, InvalidInputError
from fusionwalk.rootsys import build_root_system

RANK2 = [("A", 1), ("A", 2), ("B", 2), ("C", 2)]


@pytest.mark.parametrize(
    "fam,rank,lam,d",
    [
        ("A", 2, (1, 1), 8),
        ("A", 3, (0, 1, 0), 6),
        ("B", 2, (0, 1), 4),
        ("B", 3, (1, 0, 0), 7),
        ("C", 3, (1, 0, 0), 6),
        ("D", 4, (0, 0, 0, 1), 8),
        ("D", 4, (0, 1, 0, 0), 28),
        ("B", 3, (0, 0, 1), 8),
    ],
)
def test_known_dimensions(fam, rank, lam, d):
    assert dim(build_root_system(fam, rank), lam) == d


@pytest.mark.parametrize("key", RANK2)
def test_freudenthal_matches_kostant(key):
    rs = build_root_system(*key)
    for lam in product(range(3), repeat=rs.rank):
        mults = weight_multiplicities(rs, lam).entries
        for mu, m in mults.items():
            if rs.is_dominant(mu):
                assert kostant_multiplicity(rs, lam, mu) == m, (lam, mu)
        assert sum(mults.values()) == dim(rs, lam)


def test_zero_weight_multiplicity_of_adjoint_a2():
    rs = build_root_system("A", 2)
    assert weight_multiplicities(rs, (1, 1)).entries[(0, 0)] == 2


def test_tensor_square_of_standard_a2():
    rs = build_root_system("A", 2)
    assert tensor_decompose(rs, (1, 0), (1, 0)) == {(0, 1): 1, (2, 0): 1}


@pytest.mark.parametrize(
    "fam,rank,lam,kind",
    [
        ("A", 3, (0, 1, 0), "min"),
        ("B", 3, (0, 0, 1), "min"),
        ("B", 3, (1, 0, 0), "quasi"),
        ("C", 2, (0, 1), "quasi"),
        ("D", 4, (1, 0, 0, 0), "min"),
        ("A", 2, (1, 1), "quasi"),
        ("A", 2, (2, 0), None),
    ],
)
def test_minuscule_classification(fam, rank, lam, kind):
    rs = build_root_system(fam, rank)
    assert is_minuscule(rs, lam) == (kind == "min")
    assert is_quasi_minuscule(rs, lam) == (kind == "quasi")


def test_bounds_and_domination_errors():
    rs = build_root_system("A", 3)
    with pytest.raises(BoundExceededError):
        weight_multiplicities(rs, (9, 9, 9), max_dim=1000)
    with pytest.raises(BoundExceededError):
        tensor_power_multiplicities(rs, (1, 0, 0), 6, max_dim=4**5)
    with pytest.raises(InvalidInputError):
        dim(rs, (1, -1, 0))
    with pytest.raises(InvalidInputError, match="alcove constraint"):
        check_in_alcove(rs, (2, 0, 1), 2, "gamma")


def test_multiplicity_map_json_round_trip():
    rs = build_root_system("B", 2)
    m = weight_multiplicities(rs, (1, 1))
    assert WeightMultiplicityMap.from_json(m.to_json()) == m


@pytest.mark.parametrize("k", [1, 2, 5, 9])
def test_su2_discretized_characters(k):
    rs = build_root_system("A", 1)
    ev = DiscretizedCharacterEvaluator(rs, k)
    for i in range(k + 1):
        for m in range(k + 1):
            assert ev((i,), (m,)) == pytest.approx(su2_character(i, m, k), abs=1e-12)
    # affine wall: i = k + 1 has chi = 0
    assert discretized_character(rs, (k + 1,), (0,), k) == 0


def test_characters_are_complex_for_non_self_dual():
    rs = build_root_system("A", 2)
    val = discretized_character(rs, (1, 0), (1, 0), 2)
    assert abs(val.imag) > 1e-3
    assert discretized_character(rs, (1, 1), (1, 0), 2).imag == pytest.approx(0, abs=1e-12)


@given(systems(), st.integers(1, 4), st.data())
def test_asymptotic_dimension_is_character_at_zero(rs, k, data):
    from fusionwalk.alcove_markov import enumerate_alcove

    lam = data.draw(st.sampled_from(enumerate_alcove(rs, k).weights))
    chi0 = discretized_character(rs, lam, (0,) * rs.rank, k)
    assert asymptotic_dim(rs, lam, k) == pytest.approx(chi0.real, rel=1e-10)
    assert abs(chi0.imag) < 1e-10
    assert sine_product(rs, lam, k) > 0


@given(systems(), st.integers(1, 4), st.data())
def test_asymptotic_dimension_tends_to_dimension(rs, k, data):
    from fusionwalk.alcove_markov import enumerate_alcove

    lam = data.draw(st.sampled_from(enumerate_alcove(rs, k).weights))
    # chi_lam(0) -> dim(lam) as the level grows with lam fixed
    assert asymptotic_dim(rs, lam, 4000) == pytest.approx(dim(rs, lam), rel=1e-3)


@given(systems([("A", 2), ("B", 2), ("C", 2), ("A", 3)]), st.data())
def test_tensor_product_dimension_is_conserved(rs, data):
    w = st.tuples(*[st.integers(0, 2)] * rs.rank)
    lam, gam = data.draw(w), data.draw(w)
    dec = tensor_decompose(rs, lam, gam)
    assert sum(m * dim(rs, b) for b, m in dec.items()) == dim(rs, lam) * dim(rs, gam)
    assert all(m > 0 for m in dec.values())


def test_tensor_power_total_dimension():
    rs = build_root_system("C", 2)
    t = tensor_power_multiplicities(rs, (0, 1), 3)
    assert t.dim == dim(rs, (0, 1)) ** 3


def test_log_space_dimension_for_many_roots():
    rs = build_root_system("D", 5)  # 20 positive roots
    rs6 = build_root_system("B", 5)  # 25 positive roots, log-space path
    assert asymptotic_dim(rs, (1, 0, 0, 0, 0), 10**5) == pytest.approx(10, rel=1e-3)
    assert asymptotic_dim(rs6, (1, 0, 0, 0, 0), 10**5) == pytest.approx(11, rel=1e-3)
    assert math.isfinite(asymptotic_dim(rs6, (3, 2, 1, 0, 1), 12))


def test_table_matches_scalar_evaluation():
    rs = build_root_system("B", 2)
    ev = DiscretizedCharacterEvaluator(rs, 3)
    lams = [(0, 0), (1, 0), (0, 2), (1, 1)]
    tab = ev.table(lams, lams)
    for i, a in enumerate(lams):
        for j, b in enumerate(lams):
            assert tab[i, j] == pytest.approx(ev(a, b), abs=1e-13)
    assert np.allclose(tab.imag, 0, atol=1e-12)
