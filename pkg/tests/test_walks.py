from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import walk_enumeration
from fusionwalk.alcove_markov import enumerate_alcove
from fusionwalk.charlib import dim
from fusionwalk.errors import InvalidInputError
from fusionwalk.fusion import fusion_power
from fusionwalk.rootsys import build_root_system
from fusionwalk.walks import (
    GARBLED,
    composite_step_set,
    count_free_walks,
    count_littelmann_paths,
    count_walks,
    enumerate_littelmann_paths,
    free_kernel_step,
    littelmann_counts,
    littelmann_module,
    closed_form_constant,
    closed_form_crosscheck,
    step_set,
    walk_counts,
    walk_report_csv,
)


def test_su2_two_step_walks():
    rs = build_root_system("A", 1)
    s = step_set(rs, (1,))
    assert count_walks(rs, (0,), (0,), s, 2, 2) == 1
    assert count_walks(rs, (0,), (2,), s, 2, 2) == 1


def test_zero_steps_is_delta():
    rs = build_root_system("C", 2)
    s = step_set(rs, (1, 0))
    for lam in enumerate_alcove(rs, 2).weights:
        assert walk_counts(rs, lam, s, 0, 2) == {lam: 1}
        assert littelmann_counts(build_root_system("B", 2), (0, 0), (1, 0), 0, 2) == {(0, 0): 1}


@pytest.mark.parametrize("fam,rank,gamma", [("A", 2, (0, 1)), ("C", 2, (1, 0)), ("D", 4, (0, 0, 1, 0))])
def test_dp_matches_exhaustive_enumeration(fam, rank, gamma):
    rs = build_root_system(fam, rank)
    s = step_set(rs, gamma)
    steps = [w for w, _ in s.steps]
    for lam in enumerate_alcove(rs, 2).weights:
        assert walk_counts(rs, lam, s, 4, 2) == walk_enumeration(rs, lam, steps, 4, 2)


@settings(max_examples=25)
@given(st.integers(0, 6), st.data())
def test_d4_walks_equal_fusion(n, data):
    rs = build_root_system("D", 4)
    gamma = data.draw(st.sampled_from([(1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]))
    alc = enumerate_alcove(rs, 2).weights
    lam = data.draw(st.sampled_from(alc))
    counts = walk_counts(rs, lam, step_set(rs, gamma), n, 2)
    assert {b: c for b, c in counts.items() if c} == fusion_power(rs, lam, gamma, n, 2)


@pytest.mark.parametrize("fam,rank,gamma", [("A", 3, (0, 1, 0)), ("B", 2, (1, 0)), ("C", 2, (0, 1)), ("D", 4, (0, 1, 0, 0))])
def test_free_walk_total_is_dimension_power(fam, rank, gamma):
    rs = build_root_system(fam, rank)
    s = step_set(rs, gamma)
    for n in range(4):
        assert sum(count_free_walks((0,) * rank, s, n).values()) == dim(rs, gamma) ** n


def test_free_kernel_examples():
    a1 = build_root_system("A", 1)
    assert free_kernel_step(a1, (0,), (1,)) == {(-1,): Fraction(1, 2), (1,): Fraction(1, 2)}
    b2 = build_root_system("B", 2)
    p = free_kernel_step(b2, (0, 0), (1, 0))
    assert len(p) == 5 and set(p.values()) == {Fraction(1, 5)}
    a3 = build_root_system("A", 3)
    p = free_kernel_step(a3, (1, 1, 1), (0, 1, 0))
    assert sum(p.values()) == 1 and len(set(p.values())) == 1


def test_step_set_kinds():
    assert step_set(build_root_system("D", 4), (0, 0, 0, 1)).kind == "minuscule"
    s = step_set(build_root_system("B", 3), (1, 0, 0))
    assert s.kind == "quasi-minuscule" and s.size == 7
    c = composite_step_set(build_root_system("D", 4), [(0, 0, 1, 0), (0, 0, 0, 1)])
    assert c.kind == "composite" and c.size == 16
    with pytest.raises(InvalidInputError):
        walk_counts(build_root_system("B", 3), (0, 0, 0), s, 1, 1)


def test_littelmann_module_of_b_standard():
    for rank in (2, 3, 4):
        rs = build_root_system("B", rank)
        fam = littelmann_module(rs, (1,) + (0,) * (rank - 1))
        assert len(fam.orbit_steps) == 2 * rank
        assert len(fam.dip_roots) == 1  # the short simple root
        for pts in fam.paths()[2 * rank :]:
            mid, end = pts
            assert end == (0,) * rank
            assert tuple(-a for a in mid) == fam.dip_roots[0]


def test_littelmann_rejects_non_quasi_minuscule():
    with pytest.raises(InvalidInputError):
        littelmann_module(build_root_system("B", 2), (2, 0))


@pytest.mark.parametrize("rank", [2, 3])
def test_littelmann_enumeration_matches_dp(rank):
    rs = build_root_system("B", rank)
    gamma = (1,) + (0,) * (rank - 1)
    for lam in enumerate_alcove(rs, 2).weights:
        for n in range(4):
            brute = {}
            for _, end in enumerate_littelmann_paths(rs, lam, gamma, n, 2):
                brute[end] = brute.get(end, 0) + 1
            assert brute == littelmann_counts(rs, lam, gamma, n, 2)


def test_littelmann_b2_equals_fusion():
    rs = build_root_system("B", 2)
    for n in range(5):
        for beta in enumerate_alcove(rs, 2).weights:
            assert count_littelmann_paths(rs, (0, 0), beta, (1, 0), n, 2) == fusion_power(rs, (0, 0), (1, 0), n, 2).get(beta, 0)


def test_c2_quasi_minuscule_paths_equal_fusion():
    # the short dominant root of C2 also satisfies the level hypothesis
    rs = build_root_system("C", 2)
    for lam in enumerate_alcove(rs, 2).weights:
        for n in range(4):
            got = {b: c for b, c in littelmann_counts(rs, lam, (0, 1), n, 2).items() if c}
            assert got == fusion_power(rs, lam, (0, 1), n, 2)


# closed-form constants ---------------------------------------------------


def _same_class_pairs(rs, kind, k):
    from fusionwalk.walks import closed_form_kernel

    kern = closed_form_kernel(rs, kind, k)
    alc = kern.alcove.weights
    lab = kern.class_labels
    return kern, [(alc[i], alc[j]) for i in range(len(alc)) for j in range(len(alc)) if lab[i] == lab[j]]


@pytest.mark.parametrize(
    "fam,rank,kind",
    [("A", 1, "positive-standard"), ("A", 2, "positive-standard"), ("A", 3, "exterior-powers"), ("D", 4, "half-spins"), ("D", 3, "half-spins")],
)
def test_closed_form_constants_agree_with_general_machinery(fam, rank, kind):
    rs = build_root_system(fam, rank)
    for k in (1, 2):
        kern, pairs = _same_class_pairs(rs, kind, k)
        for x, y in pairs:
            rep = closed_form_crosscheck(rs, kind, k, x, y, kernel=kern)
            assert rep.agrees, rep.mismatches()


def test_su2_reduction():
    import math

    rs = build_root_system("A", 1)
    k = 5
    c = closed_form_constant(rs, "positive-standard", k, (2,), (3,))
    assert c.growth == pytest.approx(2 * math.cos(math.pi / (k + 2)), rel=1e-12)
    assert c.boundary_x == pytest.approx(math.sin(3 * math.pi / (k + 2)))
    assert c.period == 2 and c.residue == 1


def test_garbled_displays_produce_a_mismatch_report():
    for fam, rank, kind in [("C", 2, "standard"), ("D", 4, "standard")]:
        rs = build_root_system(fam, rank)
        rep = closed_form_crosscheck(rs, kind, 2, (0,) * rank, (0,) * rank)
        assert rep.case in GARBLED
        assert rep.mismatches()


def test_half_integer_residue_rule():
    rs = build_root_system("D", 4)
    assert closed_form_constant(rs, "half-spins", 2, (0, 0, 0, 0), (0, 0, 0, 1)).residue == 1
    assert closed_form_constant(rs, "half-spins", 2, (0, 0, 0, 0), (1, 0, 0, 0)).residue == 0


def test_unsupported_combination_rejected():
    with pytest.raises(InvalidInputError):
        closed_form_constant(build_root_system("C", 2), "spin", 2, (0, 0), (0, 0))


def test_report_csv_header():
    text = walk_report_csv([])
    assert text.strip() == "family,rank,level,lambda,beta,n,exact_count,fusion_count,asymptotic_value,ratio"
