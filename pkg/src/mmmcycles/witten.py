"""Exact evaluation of the Witten-cycle constants by enumeration.

Every function returns a :class:`Report` holding the enumerated value next
to its closed form, plus the enumeration counts.  Values are Fractions.
"""
from __future__ import annotations

import itertools
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .associahedron import BChain, faces, iter_b_records, _check_k
from .cyclic import CyclicSet, ZSimplex, c_z, tuple_sign, _parity
from .fatgraph import FatGraph, FatSimplex

fact = math.factorial


@dataclass(frozen=True)
class Check:
    name: str
    actual: Fraction
    expected: Fraction

    @property
    def passed(self) -> bool:
        return self.actual == self.expected


@dataclass
class Report:
    """Enumerated values against closed forms.  The first check is the headline."""

    name: str
    checks: list[Check]
    counts: dict = field(default_factory=dict)

    @property
    def value(self) -> Fraction:
        return self.checks[0].actual

    @property
    def expected(self) -> Fraction:
        return self.checks[0].expected

    @property
    def match(self) -> bool:
        return all(c.passed for c in self.checks)

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)


# -- c_Fat^k on B_k -------------------------------------------------------------------

def bk_closed_form(k: int) -> Fraction:
    return Fraction((-1) ** k * fact(k), fact(2 * k + 1))


def _bk_partial(args) -> tuple[Fraction, int]:
    k, allow_large, part = args
    total = Fraction(0)
    count = 0
    for rec in iter_b_records(k, allow_large, part):
        count += 1
        value = c_z(rec.angle_simplex("v0"), k) + c_z(rec.angle_simplex("v1"), k)
        total += rec.sign * value
    return total, count


def eval_bk(k: int, workers: int = 1, allow_large: bool = False) -> Report:
    """``sum_{B_k} sign * (c_z at v0 + c_z at v1)`` against ``(-1)^k k!/(2k+1)!``."""
    _check_k(k, allow_large)
    workers = max(1, int(workers))
    parts = [(k, allow_large, (i, workers)) for i in range(workers)]
    if workers == 1:
        results = [_bk_partial(parts[0])]
    else:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_bk_partial, parts))
    total = sum((r[0] for r in results), Fraction(0))
    chains = sum(r[1] for r in results)
    return Report(f"c_fat^{k}(B_{k})",
                  [Check("c_fat(B_k)", total, bk_closed_form(k))],
                  {"chains": chains, "vertex_chain_pairs": 2 * chains,
                   "label_permutations": fact(2 * k + 3) // 6})


# -- the statistic X ------------------------------------------------------------------

def _cyclic_label_tuples(k: int):
    """All ``(a1, a2, a3, b1, ..., b_2k)`` with ``a1, a2, a3, b1`` in cyclic order."""
    n = 2 * k + 3
    for quad in itertools.combinations(range(n), 4):
        rest = [r for r in range(n) if r not in quad]
        for r in range(4):
            a1, a2, a3, b1 = quad[r:] + quad[:r]
            for perm in itertools.permutations(rest):
                yield (a1, a2, a3, b1) + perm


def y_denominator(k: int) -> int:
    return sum(j * (2 * k + 1 - j) for j in range(1, 2 * k + 1))


def stat_X(k: int) -> Report:
    """Brute-force ``E(X)`` and the distribution of ``Y`` over all label tuples."""
    if not 1 <= k <= 4:
        raise ValueError("stat_X supports 1 <= k <= 4")
    n = 2 * k + 3
    ref = CyclicSet(range(n))
    total = 0
    count = 0
    y_count = [0] * (2 * k + 1)
    x_given_y = [0] * (2 * k + 1)
    for labels in _cyclic_label_tuples(k):
        full = _parity(labels)
        bs = labels[3:]
        x = full * sum(tuple_sign((a,) + bs, ref) for a in labels[:3])
        a2, b1 = labels[1], labels[3]
        y = (a2 - b1 - 1) % n
        total += x
        count += 1
        y_count[y] += 1
        x_given_y[y] += x
    denom = y_denominator(k)
    checks = [
        Check("E(X)", Fraction(total, count), Fraction(3, 2 * k + 1)),
        Check("sum j(2k+1-j)", Fraction(denom), Fraction(k * (2 * k + 1) * (2 * k + 2), 3)),
    ]
    for y in range(1, 2 * k + 1):
        checks.append(Check(f"P(Y={y})", Fraction(y_count[y], count),
                            Fraction(y * (2 * k + 1 - y), denom)))
        cond = 1 + Fraction(1, y) if y % 2 else 1 + Fraction(1, 2 * k - y + 1)
        checks.append(Check(f"E(X+1|Y={y})", Fraction(x_given_y[y], y_count[y]) + 1, cond))
    checks.append(Check("c_fat(B_k) from E(X)",
                        Fraction((-1) ** k * fact(k), 3 * fact(2 * k)) * Fraction(total, count),
                        bk_closed_form(k)))
    return Report(f"E(X), k={k}", checks,
                  {"label_tuples": count, "expected_tuples": fact(n) // 6,
                   "y_values_outside_range": y_count[0]})


# -- value on the half-sized associahedron ----------------------------------------------

def _half_disk_triples(k: int, fixed_a1: bool):
    n = 2 * k + 3
    starts = [0] if fixed_a1 else range(n)
    for a1 in starts:
        for d2 in range(1, k + 2):
            for d3 in range(k + 2, d2 + k + 2):
                yield a1, (a1 + d2) % n, (a1 + d3) % n


def _chain_value(first: tuple[int, ...], adds: tuple[int, ...], k: int) -> Fraction:
    objects = [CyclicSet(first)]
    current = list(first)
    for b in adds:
        current.append(b)
        objects.append(CyclicSet(sorted(current)))
    return c_z(ZSimplex.chain(*objects), k)


def half_disk_closed_forms(k: int) -> tuple[Fraction, Fraction]:
    """``(E(Z), z^k)`` on the half-sized associahedron."""
    if k % 2:
        return Fraction(-3, k + 2), Fraction((-1) ** (k + 1) * fact(k + 1), fact(2 * k + 2))
    return Fraction(3, k + 1), Fraction((-1) ** k * fact(k) * (k + 2), fact(2 * k + 2))


def half_disk(k: int, fixed_a1: bool = True) -> Report:
    """Enumerate ``(a1, a2, a3, b1, ..., b_2k)`` with all gaps between the a's at most k.

    Each configuration contributes ``sgn(a, b) * c_z`` of the chain
    ``{a1,a2,a3} -> +b1 -> ... -> +b_2k``.  With ``fixed_a1`` the sum is
    taken at ``a1 = 0`` and scaled by ``(2k+3)/3``; otherwise every ``a1``
    is enumerated and the sum divided by 3 for the cyclic relabelling of the
    a's.
    """
    if not 1 <= k <= 4:
        raise ValueError("half_disk supports 1 <= k <= 4")
    n = 2 * k + 3
    ref = CyclicSet(range(n))
    z_total = 0
    configs = 0
    value = Fraction(0)
    for a1, a2, a3 in _half_disk_triples(k, fixed_a1):
        rest = [r for r in range(n) if r not in (a1, a2, a3)]
        for bs in itertools.permutations(rest):
            full = tuple_sign((a1, a2, a3) + bs, ref)
            z_total += full * sum(tuple_sign((a,) + bs, ref) for a in (a1, a2, a3))
            value += full * _chain_value((a1, a2, a3), bs, k)
            configs += 1
    scale = Fraction(n, 3) if fixed_a1 else Fraction(1, 3)
    terms = configs * scale
    ez = Fraction(z_total, configs)
    ez_closed, z_closed = half_disk_closed_forms(k)
    count_closed = Fraction(n * (k + 1) * (k + 2) * fact(2 * k), 6)
    from_ez = terms * Fraction((-1) ** k * fact(k), fact(2 * k) * fact(2 * k + 3) // 2) * ez
    return Report(f"half-disk, k={k}", [
        Check("z^k(A^1/2)", value * scale, z_closed),
        Check("E(Z)", ez, ez_closed),
        Check("terms", terms, count_closed),
        Check("z^k from E(Z)", from_ez, z_closed),
    ], {"configurations": configs, "fixed_a1": fixed_a1})


# -- value on the collar ---------------------------------------------------------------

def collar_closed_forms(k: int) -> tuple[Fraction, Fraction]:
    """``(E(W), collar total)``."""
    if k % 2:
        return Fraction(0), Fraction(0)
    return Fraction(-2, k + 1), Fraction((-1) ** (k + 1) * fact(k) * (2 * k + 3), fact(2 * k + 2))


def collar(k: int, fixed_a1: bool = False) -> Report:
    """Enumerate collar configurations ``(a1, a2, b0, b1, ..., b_2k)``.

    ``a2 = a1 + k + 1`` so that the k + 1 regions from ``a2`` round to
    ``a1`` hold both ``b0`` and the omitted region ``b_2k``.  A
    configuration contributes ``-sgn(a1, a2, b0, ..., b_2k)`` times c_z of
    ``{a1,a2} -> +b0 -> ... -> +b_{2k-1}``.
    """
    if not 1 <= k <= 4:
        raise ValueError("collar supports 1 <= k <= 4")
    n = 2 * k + 3
    ref = CyclicSet(range(n))
    w_total = 0
    configs = 0
    value = Fraction(0)
    for a1 in ([0] if fixed_a1 else range(n)):
        a2 = (a1 + k + 1) % n
        arc = [(a2 + j) % n for j in range(1, k + 2)]
        for b0, last in itertools.permutations(arc, 2):
            rest = [r for r in range(n) if r not in (a1, a2, b0, last)]
            for mid in itertools.permutations(rest):
                bs = (b0,) + mid + (last,)
                orient = -tuple_sign((a1, a2) + bs, ref)
                w_total += orient * sum(tuple_sign((a,) + bs[:-1], ref) for a in (a1, a2))
                value += orient * _chain_value((a1, a2), bs[:-1], k)
                configs += 1
    scale = n if fixed_a1 else 1
    ew = Fraction(w_total, configs)
    ew_closed, total_closed = collar_closed_forms(k)
    terms = configs * scale
    from_ew = terms * Fraction((-1) ** k * fact(k), fact(2 * k) * fact(2 * k + 2)) * ew
    return Report(f"collar, k={k}", [
        Check("z^k(collar)", value * scale, total_closed),
        Check("E(W)", ew, ew_closed),
        Check("terms", Fraction(terms), Fraction((2 * k + 3) * (k + 1) * k * fact(2 * k - 1))),
        Check("collar from E(W)", from_ew, total_closed),
    ], {"configurations": configs, "fixed_a1": fixed_a1})


# -- the proportionality constant ---------------------------------------------------------

def kappa_closed_form(k: int) -> Fraction:
    return Fraction((-1) ** (k + 1) * fact(k + 1), fact(2 * k + 2))


def kappa_constant(k: int, workers: int = 1) -> Report:
    """Half-disk plus collar against the closed form and against ``-1/2 c_fat(B_k)``."""
    if not 1 <= k <= 3:
        raise ValueError("kappa_constant supports 1 <= k <= 3")
    half = half_disk(k)
    col = collar(k)
    bk = eval_bk(k, workers=workers)
    total = half.value + col.value
    closed = kappa_closed_form(k)
    return Report(f"kappa~_{k} / [W_{k}]*", [
        Check("half-disk + collar", total, closed),
        Check("-1/2 c_fat(B_k)", -bk.value / 2, closed),
        Check("(k+1)!/(2k+2)! = k!/(2(2k+1)!)", Fraction(fact(k + 1), fact(2 * k + 2)),
              Fraction(fact(k), 2 * fact(2 * k + 1))),
    ] + [Check(f"{r.name}: {c.name}", c.actual, c.expected)
         for r in (half, col, bk) for c in r.checks],
        {"half_disk_configurations": half.counts["configurations"],
         "collar_configurations": col.counts["configurations"],
         "bk_chains": bk.counts["chains"]})


# -- Kontsevich cycles --------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSpec:
    """Weights ``k_1 < ... < k_r`` with multiplicities ``n_1, ..., n_r``."""

    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ks = [k for k, _ in self.parts]
        if not self.parts:
            raise ValueError("empty weight")
        if any(k < 1 or m < 1 for k, m in self.parts):
            raise ValueError("weights and multiplicities must be positive")
        if ks != sorted(set(ks)):
            raise ValueError("weights must be distinct and increasing")

    @classmethod
    def parse(cls, text: str) -> "WeightSpec":
        """Parse ``"1x2,2x1"`` (weight ``k`` x multiplicity ``n``); order is normalized."""
        merged: dict[int, int] = {}
        for item in text.split(","):
            m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", item)
            if not m:
                raise ValueError(f"bad weight item {item!r}, expected 'KxN'")
            k, mult = int(m.group(1)), int(m.group(2))
            merged[k] = merged.get(k, 0) + mult
        return cls(tuple(sorted(merged.items())))

    @property
    def degree(self) -> int:
        return sum(2 * k * m for k, m in self.parts)

    def __str__(self) -> str:
        return ",".join(f"{k}x{m}" for k, m in self.parts)


def kontsevich_coeff(w: WeightSpec) -> tuple[Fraction, Fraction]:
    """Leading coefficients of ``[W_{k^n ...}]*`` in the ``c_fat`` and ``kappa~`` bases."""
    c_basis = Fraction(1)
    kappa_basis = Fraction(1)
    for k, m in w.parts:
        c_basis *= Fraction(fact(2 * k + 1), (-1) ** k * fact(k)) ** m / fact(m)
        kappa_basis *= Fraction(2 * fact(2 * k + 1), (-1) ** (k + 1) * fact(k)) ** m / fact(m)
    return c_basis, kappa_basis


# -- localization ---------------------------------------------------------------------

def embed_chain(rec: BChain) -> FatSimplex:
    """Realize a ``B_k`` chain as a chain of collapses of a genuine fat graph.

    The dual tree of the triangulation gets one trivalent frame vertex per
    leaf, and the frame vertices are joined in an ``n``-cycle.  The chords
    are then collapsed in the chain's order.  At a tree vertex, the angle
    that starts at the side ``(r', r)`` is the angle at region ``r``.
    """
    n = rec.chain.n
    tri = rec.chain.sets[0]
    fs = faces(tri)
    ids = itertools.count()
    side_half = {}
    stars: dict[int, list[int]] = {}
    for vid, f in enumerate(fs):
        star = []
        for j, r in enumerate(f):
            h = next(ids)
            side_half[(vid, (f[j - 1], r))] = h
            star.append(h)
        stars[vid] = star
    pairing = []
    chord_half = {}
    for c in tri:
        ends = [(vid, side) for (vid, side), h in side_half.items()
                if tuple(sorted(side)) == c]
        (va, sa), (vb, sb) = ends
        pairing.append((side_half[(va, sa)], side_half[(vb, sb)]))
        chord_half[c] = side_half[(va, sa)]
    # leaf l sits between regions l-1 and l
    frame = {}
    for l in range(n):
        fv = len(fs) + l
        to_tree, to_next, to_prev = next(ids), next(ids), next(ids)
        stars[fv] = [to_tree, to_next, to_prev]
        frame[l] = (to_tree, to_next, to_prev)
        side = ((l - 1) % n, l)
        vid = next(v for (v, s) in side_half if s == side)
        pairing.append((to_tree, side_half[(vid, side)]))
    for l in range(n):
        pairing.append((frame[l][1], frame[(l + 1) % n][2]))
    g = FatGraph(stars, pairing)
    morphisms = []
    for c in rec.chain.removed:
        g, m = g.collapse_edge(chord_half[c])
        morphisms.append(m)
    return FatSimplex(morphisms)


def localized_value(rec: BChain, k: int) -> Fraction:
    """``c_z`` at ``v0`` plus ``c_z`` at ``v1`` from the region labels alone."""
    return c_z(rec.angle_simplex("v0"), k) + c_z(rec.angle_simplex("v1"), k)


def label_formula(rec: BChain, which: str, k: int) -> Fraction:
    """The closed expression ``(-1)^k k! sum_i sgn(a_i, b_1, ..., b_2k) / ((2k)! (2k+3)!/2)``.

    The ``a_i`` are the corners of the starting triangle, and ``b_j`` is the
    region gained at step ``j``.
    """
    start = {"v0": rec.v0, "v1": rec.v1}[which]
    bs = []
    current = set(start)
    for g in rec.grown:
        (b,) = set(g) - current
        bs.append(b)
        current = set(g)
    ref = CyclicSet(range(2 * k + 3))
    total = sum(tuple_sign((a,) + tuple(bs), ref) for a in start)
    return Fraction((-1) ** k * fact(k) * total, fact(2 * k) * fact(2 * k + 3) // 2)
