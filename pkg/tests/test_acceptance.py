"""Acceptance criteria, each at its stated tolerance and time budget.

Every test tags itself with a criterion so the terminal summary can print one
PASS/FAIL line per criterion.  The stated B_k chain counts are asserted as
given even though the enumeration disagrees with them; see the README.
"""
import math
import random
import time
from fractions import Fraction

import pytest

from mmmcycles.associahedron import (b_chains, boundary_consistency, enumerate_chord_sets,
                                     maximal_chains)
from mmmcycles.cyclic import c_z, coboundary, random_simplex, s_k
from mmmcycles.fatgraph import (FatSimplex, c_fat, figure_eight, interleaved_eight,
                                random_collapse_chain, random_trivalent)
from mmmcycles.quadrature import (MassProfile, euler_2form, power_form,
                                  random_cyclic_simplex, simplex_integral)
from mmmcycles.witten import (WeightSpec, collar, eval_bk, half_disk, kappa_constant,
                              kontsevich_coeff, stat_X, y_denominator)

BK = {1: (Fraction(-1, 6), 40, 1.0), 2: (Fraction(1, 60), 1680, 10.0),
      3: (Fraction(-1, 840), 120960, 120.0)}
KAPPA = {1: Fraction(1, 12), 2: Fraction(-1, 120), 3: Fraction(1, 1680)}
_bk_cache = {}


def bk(k):
    if k not in _bk_cache:
        start = time.perf_counter()
        rep = eval_bk(k)
        _bk_cache[k] = (rep, time.perf_counter() - start)
    return _bk_cache[k]


@pytest.fixture
def criterion(record_property):
    def tag(name):
        record_property("criterion", name)
    return tag


# -- 1 ---------------------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
def test_c1_bk_value_and_time(criterion, k):
    criterion("1. c_fat^k(B_k) = (-1)^k k!/(2k+1)!")
    rep, elapsed = bk(k)
    value, _, budget = BK[k]
    print(f"k={k}: {rep.value} in {elapsed:.2f}s over {rep.counts['chains']} chains")
    assert rep.value == value
    assert elapsed < budget


@pytest.mark.parametrize("k", [1, 2, 3])
def test_c1_bk_stated_chain_count(criterion, k):
    criterion("1. c_fat^k(B_k) = (-1)^k k!/(2k+1)!")
    rep, _ = bk(k)
    assert rep.counts["chains"] == BK[k][1]


# -- 2 ---------------------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
def test_c2_kappa_constant(criterion, k):
    criterion("2. half-disk + collar = -1/2 c_fat^k(B_k)")
    total = half_disk(k).value + collar(k).value
    assert total == KAPPA[k]
    assert total == -bk(k)[0].value / 2
    assert kappa_constant(k).match


# -- 3 ---------------------------------------------------------------------------------

@pytest.mark.parametrize("k,ex", [(1, Fraction(1)), (2, Fraction(3, 5)), (3, Fraction(3, 7))])
def test_c3_expectation_of_x(criterion, k, ex):
    criterion("3. statistics E(X), Y denominator, E(Z), E(W)")
    rep = stat_X(k)
    assert rep.value == ex
    assert rep.match


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_c3_y_denominator(criterion, k):
    criterion("3. statistics E(X), Y denominator, E(Z), E(W)")
    assert y_denominator(k) == Fraction(k * (2 * k + 1) * (2 * k + 2), 3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_c3_expectations_z_and_w(criterion, k):
    criterion("3. statistics E(X), Y denominator, E(Z), E(W)")
    ez = Fraction(-3, k + 2) if k % 2 else Fraction(3, k + 1)
    ew = Fraction(0) if k % 2 else Fraction(-2, k + 1)
    assert half_disk(k).get("E(Z)").actual == ez
    assert collar(k).get("E(W)").actual == ew


# -- 4 ---------------------------------------------------------------------------------

def test_c4_cocycle_suites(criterion):
    criterion("4. cocycle suites")
    start = time.perf_counter()
    rng = random.Random(2024)
    for k in (1, 2):
        for _ in range(1000):
            s = random_simplex(rng, 2 * k + 1)
            assert coboundary(lambda f: c_z(f, k), s) == 0
        for _ in range(500):
            s = random_simplex(rng, 2 * k, linear_prefix=2 * k + 1)
            assert coboundary(lambda f: s_k(f, k), s) == c_z(s.Jbar(), k)
    for _ in range(200):
        chain = random_collapse_chain(rng, 3)
        assert coboundary(lambda f: c_fat(f, 1), chain) == 0
    assert time.perf_counter() - start < 60


# -- 5 ---------------------------------------------------------------------------------

def test_c5_poset_and_chain_counts(criterion):
    criterion("5. associahedron counts and orientation")
    assert len(enumerate_chord_sets(4)) == 3
    assert len(enumerate_chord_sets(5)) == 11
    assert [sum(1 for _ in maximal_chains(n)) for n in (5, 6, 7)] == [10, 84, 1008]


@pytest.mark.parametrize("n", [5, 6, 7])
def test_c5_boundary_consistency(criterion, n):
    criterion("5. associahedron counts and orientation")
    assert boundary_consistency(n).ok


@pytest.mark.parametrize("k", [1, 2, 3])
def test_c5_stated_b_k_count(criterion, k):
    criterion("5. associahedron counts and orientation")
    count = len(b_chains(k)) if k < 3 else bk(3)[0].counts["chains"]
    assert count == math.factorial(2 * k + 3) // 3


# -- 6 ---------------------------------------------------------------------------------

def test_c6_quadrature(criterion):
    criterion("6. quadrature")
    start = time.perf_counter()
    rng = random.Random(6)
    for _ in range(50):
        a, b, c = rng.randint(1, 9), rng.randint(0, 9), rng.randint(0, 9)
        res = simplex_integral(1, MassProfile((a, b, c)))
        assert abs(res.estimate - 1 / (2 * a * (a + b) * (a + b + c))) < 1e-6
    for _ in range(20):
        s = random_cyclic_simplex(rng, 2)
        assert abs(euler_2form(s).estimate - float(c_z(s, 1))) < 1e-6
    for i in range(5):
        s = random_cyclic_simplex(rng, 4)
        res = power_form(s, k=2, samples=10**7, seed=100 + i)
        print(f"power form {s}: z = {res.z_score:.3f}")
        assert res.exact == c_z(s, 2)
        assert res.z_score <= 3
    assert time.perf_counter() - start < 300


# -- 7 ---------------------------------------------------------------------------------

def test_c7_kontsevich(criterion):
    criterion("7. Kontsevich leading coefficients")
    kappa = lambda text: kontsevich_coeff(WeightSpec.parse(text))[1]
    assert kappa("1x1") == 12
    assert kappa("1x2") == 72
    assert kappa("2x1") == -120
    for k in (1, 2, 3):
        assert 1 / kappa(f"{k}x1") == half_disk(k).value + collar(k).value


# -- 8 ---------------------------------------------------------------------------------

def test_c8_topology(criterion):
    criterion("8. topology oracle")
    assert figure_eight().topology()[:3] == (-1, 0, 3)
    assert interleaved_eight().topology()[:3] == (-1, 1, 1)
    rng = random.Random(8)
    for _ in range(100):
        g = random_trivalent(rng)
        assert c_fat(FatSimplex(graph=g), 0) == -2 * g.euler_characteristic()
