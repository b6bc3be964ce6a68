import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mmmcycles.associahedron import iter_b_records
from mmmcycles.cyclic import c_z
from mmmcycles.fatgraph import c_fat, validate
from mmmcycles.witten import (WeightSpec, bk_closed_form, collar, embed_chain, eval_bk,
                              half_disk, kappa_closed_form, kappa_constant,
                              kontsevich_coeff, label_formula, localized_value, stat_X,
                              y_denominator)

B1 = list(iter_b_records(1))
B2 = list(iter_b_records(2))


# -- c_fat^k on B_k -----------------------------------------------------------------------

@pytest.mark.parametrize("k,value", [(1, Fraction(-1, 6)), (2, Fraction(1, 60))])
def test_eval_bk(k, value):
    rep = eval_bk(k)
    assert rep.value == value == bk_closed_form(k)
    assert rep.match
    assert rep.counts["chains"] == math.factorial(2 * k + 3) // 12


def test_eval_bk_worker_invariance():
    assert eval_bk(2, workers=2).value == eval_bk(2).value


def test_eval_bk_range():
    with pytest.raises(ValueError):
        eval_bk(5)


# -- statistics -------------------------------------------------------------------------

@pytest.mark.parametrize("k,ex", [(1, Fraction(1)), (2, Fraction(3, 5))])
def test_stat_x(k, ex):
    rep = stat_X(k)
    assert rep.value == ex
    assert rep.match, [c for c in rep.checks if not c.passed]
    assert rep.counts["label_tuples"] == math.factorial(2 * k + 3) // 6
    assert rep.counts["y_values_outside_range"] == 0


def test_y_distribution_k1():
    rep = stat_X(1)
    assert rep.get("P(Y=1)").actual == rep.get("P(Y=2)").actual == Fraction(1, 2)


@pytest.mark.parametrize("k", range(1, 9))
def test_y_denominator(k):
    assert y_denominator(k) == k * (2 * k + 1) * (2 * k + 2) // 3


# -- half disk and collar ---------------------------------------------------------------

@pytest.mark.parametrize("k,ez,z", [(1, Fraction(-1), Fraction(1, 12)),
                                    (2, Fraction(1), Fraction(1, 90))])
def test_half_disk(k, ez, z):
    rep = half_disk(k)
    assert rep.value == z
    assert rep.get("E(Z)").actual == ez
    assert rep.match


def test_half_disk_counts_k1():
    rep = half_disk(1)
    assert rep.counts["configurations"] == 6
    assert rep.get("terms").actual == 10


@pytest.mark.parametrize("k", [1, 2])
def test_half_disk_fixed_and_full_enumeration_agree(k):
    a, b = half_disk(k, fixed_a1=True), half_disk(k, fixed_a1=False)
    assert a.value == b.value
    assert a.get("E(Z)").actual == b.get("E(Z)").actual


@pytest.mark.parametrize("k,ew,total", [(1, Fraction(0), Fraction(0)),
                                        (2, Fraction(-2, 3), Fraction(-7, 360))])
def test_collar(k, ew, total):
    rep = collar(k)
    assert rep.value == total
    assert rep.get("E(W)").actual == ew
    assert rep.match


def test_collar_count_k2():
    assert collar(2).counts["configurations"] == 252


def test_collar_fixed_a1_agrees():
    assert collar(2, fixed_a1=True).value == collar(2).value


# -- the constant -----------------------------------------------------------------------

@pytest.mark.parametrize("k,value", [(1, Fraction(1, 12)), (2, Fraction(-1, 120))])
def test_kappa_constant(k, value):
    rep = kappa_constant(k)
    assert rep.value == value == kappa_closed_form(k)
    assert rep.match


@pytest.mark.parametrize("k", range(1, 8))
def test_factorial_identity(k):
    assert kappa_closed_form(k) == -bk_closed_form(k) / 2


# -- Kontsevich coefficients --------------------------------------------------------------

@pytest.mark.parametrize("text,kappa", [("1x1", 12), ("1x2", 72), ("2x1", -120), ("3x1", 1680)])
def test_kontsevich_kappa_basis(text, kappa):
    assert kontsevich_coeff(WeightSpec.parse(text))[1] == kappa


@pytest.mark.parametrize("k", [1, 2, 3])
def test_kontsevich_reciprocal_is_the_constant(k):
    assert 1 / kontsevich_coeff(WeightSpec(((k, 1),)))[1] == kappa_closed_form(k)


@given(st.lists(st.tuples(st.integers(1, 5), st.integers(1, 3)), min_size=1, max_size=3,
                unique_by=lambda p: p[0]))
def test_kontsevich_bases_differ_by_powers_of_minus_two(parts):
    w = WeightSpec(tuple(sorted(parts)))
    c, kappa = kontsevich_coeff(w)
    assert kappa == c * Fraction(-2) ** sum(m for _, m in parts)


def test_weight_spec_parse():
    assert WeightSpec.parse("2x1,1x2").parts == ((1, 2), (2, 1))
    assert WeightSpec.parse("1x1, 1x1").parts == ((1, 2),)
    assert str(WeightSpec.parse("2x1,1x2")) == "1x2,2x1"
    assert WeightSpec.parse("1x2,2x1").degree == 8
    for bad in ["", "1", "0x1", "1x0", "axb"]:
        with pytest.raises(ValueError):
            WeightSpec.parse(bad)
    with pytest.raises(ValueError):
        WeightSpec(((2, 1), (1, 1)))


# -- localization -----------------------------------------------------------------------

@pytest.mark.parametrize("rec", B1, ids=lambda r: repr(r.chain.removed))
def test_localization_b1(rec):
    simplex = embed_chain(rec)
    assert validate(simplex.graphs[0]) == []
    assert all(simplex.graphs[0].valence(v) == 3 for v in simplex.graphs[0].vertices)
    assert c_fat(simplex, 1) == localized_value(rec, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, len(B2) - 1))
def test_localization_b2(index):
    rec = B2[index]
    assert c_fat(embed_chain(rec), 2) == localized_value(rec, 2)


@pytest.mark.parametrize("rec", B1, ids=lambda r: repr(r.chain.removed))
def test_label_formula_b1(rec):
    for which in ("v0", "v1"):
        assert label_formula(rec, which, 1) == c_z(rec.angle_simplex(which), 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, len(B2) - 1))
def test_label_formula_b2(index):
    rec = B2[index]
    assert label_formula(rec, "v0", 2) + label_formula(rec, "v1", 2) == localized_value(rec, 2)
