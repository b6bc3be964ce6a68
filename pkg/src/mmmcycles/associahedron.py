"""The Stasheff associahedron as the poset of non-crossing chord sets.

Regions are residues mod ``n``; region ``i`` is the gap between leaves
``i`` and ``i + 1`` of a planar tree with ``n`` leaves.  A chord ``{a, b}``
is an internal tree edge with regions ``a`` and ``b`` on its two sides.
Dually, regions are the corners of an ``n``-gon, chords are diagonals, and
each internal vertex of the tree is a face of the subdivided polygon; the
regions it touches are the corners of that face, in increasing cyclic order.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .cyclic import CyclicSet, ZSimplex, tuple_sign, _parity

Chord = tuple[int, int]

MAX_ENUMERATE = 12
MAX_CHAINS = 11
MAX_CONSISTENCY = 9


def chord(a: int, b: int, n: int) -> Chord:
    a, b = a % n, b % n
    return (a, b) if a < b else (b, a)


def crosses(c1: Chord, c2: Chord) -> bool:
    (a, c), (b, d) = c1, c2
    return a < b < c < d or b < a < d < c


@dataclass(frozen=True)
class ChordSet:
    n: int
    chords: frozenset

    def __init__(self, n: int, chords=()):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "chords", frozenset(chord(a, b, n) for a, b in chords))

    def __len__(self):
        return len(self.chords)

    def __iter__(self):
        return iter(sorted(self.chords))

    def __le__(self, other: "ChordSet") -> bool:
        return self.n == other.n and self.chords <= other.chords

    def __lt__(self, other: "ChordSet") -> bool:
        return self.n == other.n and self.chords < other.chords

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{{{a},{b}}}" for a, b in self) + "}"

    def without(self, c: Chord) -> "ChordSet":
        return ChordSet(self.n, self.chords - {c})


def is_valid(c: ChordSet) -> bool:
    n = c.n
    if n < 3:
        return False
    for a, b in c.chords:
        if a == b or (b - a) % n in (1, n - 1):
            return False
    return not any(crosses(x, y) for x, y in itertools.combinations(c.chords, 2))


def diagonals(n: int) -> list[Chord]:
    return [(a, b) for a in range(n) for b in range(a + 2, n) if (b - a) != n - 1]


def enumerate_chord_sets(n: int) -> list[ChordSet]:
    """Every element of the poset, the empty chord set first."""
    if not 3 <= n <= MAX_ENUMERATE:
        raise ValueError(f"n must lie in [3, {MAX_ENUMERATE}], got {n}")
    diags = diagonals(n)
    out = []

    def grow(start: int, current: list[Chord]):
        out.append(ChordSet(n, current))
        for i in range(start, len(diags)):
            d = diags[i]
            if not any(crosses(d, e) for e in current):
                current.append(d)
                grow(i + 1, current)
                current.pop()

    grow(0, [])
    return out


def triangulations(n: int) -> list[ChordSet]:
    return [c for c in enumerate_chord_sets(n) if len(c) == n - 3]


def faces(c: ChordSet) -> list[tuple[int, ...]]:
    """Faces of the subdivided polygon as sorted tuples of regions."""
    polys = [tuple(range(c.n))]
    for a, b in sorted(c.chords, key=lambda ab: ab[1] - ab[0]):
        for i, p in enumerate(polys):
            if a in p and b in p:
                inner = tuple(x for x in p if a <= x <= b)
                outer = tuple(x for x in p if x <= a or x >= b)
                polys[i:i + 1] = [inner, outer]
                break
    return sorted(polys)


@dataclass(frozen=True)
class PlanarTree:
    """Dual tree of a chord set.

    ``vertices`` are the internal vertices, each the sorted tuple of the
    regions it touches; ``edges`` maps every chord to its two end vertices.
    """

    n: int
    vertices: tuple
    edges: dict

    def regions(self, v: tuple[int, ...]) -> CyclicSet:
        return CyclicSet(v)

    def valence(self, v: tuple[int, ...]) -> int:
        return len(v)

    def distances(self, root: tuple[int, ...]) -> dict:
        adj = defaultdict(list)
        for x, y in self.edges.values():
            adj[x].append(y)
            adj[y].append(x)
        dist = {root: 0}
        todo = [root]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    todo.append(w)
        return dist


def tree_of(c: ChordSet) -> PlanarTree:
    if not is_valid(c):
        raise ValueError(f"invalid chord set {c}")
    fs = faces(c)
    edges = {}
    for ch in c.chords:
        ends = tuple(f for f in fs if ch[0] in f and ch[1] in f)
        assert len(ends) == 2
        edges[ch] = ends
    return PlanarTree(c.n, tuple(fs), edges)


class AChain:
    """A strictly decreasing chain ``Gamma_0 > Gamma_1 > ... > Gamma_p``."""

    def __init__(self, sets: Sequence[ChordSet]):
        sets = tuple(sets)
        if not sets:
            raise ValueError("empty chain")
        for x, y in zip(sets, sets[1:]):
            if not y < x:
                raise ValueError("chain must be strictly decreasing")
        self.sets = sets
        self.n = sets[0].n

    @classmethod
    def from_order(cls, n: int, order: Sequence[Chord]) -> "AChain":
        """The maximal-type chain removing ``order[0], order[1], ...`` in turn."""
        order = tuple(order)
        return cls([ChordSet(n, order[i:]) for i in range(len(order) + 1)])

    def __len__(self):
        return len(self.sets)

    def __eq__(self, other):
        return isinstance(other, AChain) and self.sets == other.sets

    def __hash__(self):
        return hash(self.sets)

    def __repr__(self):
        return "AChain(" + " > ".join(map(repr, self.sets)) + ")"

    @property
    def dim(self) -> int:
        return len(self.sets) - 1

    @property
    def removed(self) -> tuple[Chord, ...]:
        out = []
        for x, y in zip(self.sets, self.sets[1:]):
            diff = x.chords - y.chords
            if len(diff) != 1:
                raise ValueError("step removes more than one chord")
            out.append(next(iter(diff)))
        return tuple(out)

    def is_maximal(self) -> bool:
        return (len(self.sets[0]) == self.n - 3 and not self.sets[-1].chords
                and len(self.sets) == self.n - 2)

    def face(self, i: int) -> "AChain":
        return AChain(self.sets[:i] + self.sets[i + 1:])


def maximal_chains(n: int) -> Iterator[AChain]:
    """All maximal chains: a triangulation, then one chord removed per step."""
    if not 3 <= n <= MAX_CHAINS:
        raise ValueError(f"n must lie in [3, {MAX_CHAINS}], got {n}")
    for t in triangulations(n):
        for order in itertools.permutations(sorted(t.chords)):
            yield AChain.from_order(n, order)


# -- orientation ------------------------------------------------------------------

def orientation_labels(ch: AChain, swap: bool = False,
                       tree: PlanarTree | None = None) -> tuple[int, ...]:
    """The region labels ``(a1, a2, a3, b1, ..., b_{n-3})`` of a maximal chain.

    ``v0`` is the end of the first removed chord with the smaller region
    tuple (or the other one when ``swap``).  ``v_i`` is the end of ``e_i``
    farther from ``v0`` in the dual tree of ``Gamma_0`` and ``b_i`` the
    corner of triangle ``v_i`` off ``e_i``.
    """
    if not ch.is_maximal():
        raise ValueError("orientation is defined on maximal chains")
    n = ch.n
    tree = tree or tree_of(ch.sets[0])
    order = ch.removed
    ends = sorted(tree.edges[order[0]])
    v0, v1 = (ends[1], ends[0]) if swap else (ends[0], ends[1])
    e1 = order[0]
    a2 = next(x for x in v0 if x not in e1)
    ref = CyclicSet(range(n))
    a1, a3 = e1
    if tuple_sign((a1, a2, a3), ref) < 0:
        a1, a3 = a3, a1
    dist = tree.distances(v0)
    labels = [a1, a2, a3]
    for i, e in enumerate(order):
        if i == 0:
            vi = v1
        else:
            x, y = tree.edges[e]
            vi = x if dist[x] > dist[y] else y
        labels.append(next(r for r in vi if r not in e))
    return tuple(labels)


def orientation_sign(ch: AChain, swap: bool = False,
                     tree: PlanarTree | None = None) -> int:
    """Sign of ``(a1, a2, a3, b1, ...)`` as a permutation of ``0..n-1``."""
    labels = orientation_labels(ch, swap, tree)
    if sorted(labels) != list(range(ch.n)):
        raise AssertionError(f"labels {labels} are not distinct regions")
    return _parity(labels)


@dataclass
class ConsistencyResult:
    n: int
    chains: int
    interior_faces: int
    boundary_faces: int
    counterexample: object = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def boundary_consistency(n: int,
                         sign: Callable[[AChain], int] = orientation_sign) -> ConsistencyResult:
    """Check that the signed sum of maximal chains has boundary on the boundary sphere.

    Every interior face (one still ending in the empty set) must be shared
    by exactly two chains with cancelling induced signs; every surviving
    face must avoid the empty set.
    """
    if not 4 <= n <= MAX_CONSISTENCY:
        raise ValueError(f"n must lie in [4, {MAX_CONSISTENCY}], got {n}")
    coeff = defaultdict(int)
    incidence = defaultdict(list)
    count = 0
    for ch in maximal_chains(n):
        count += 1
        s = sign(ch)
        for i in range(ch.dim + 1):
            f = ch.face(i).sets
            coeff[f] += s if i % 2 == 0 else -s
            incidence[f].append((ch, i, s))
    interior = 0
    boundary = 0
    bad = None
    for f, c in coeff.items():
        if not f[-1].chords:
            interior += 1
            if bad is None and (c != 0 or len(incidence[f]) != 2):
                bad = ("interior face does not cancel", f, incidence[f])
        else:
            boundary += 1
            if bad is None and abs(c) != 1:
                bad = ("boundary face with coefficient", f, c)
    return ConsistencyResult(n, count, interior, boundary, bad)


# -- the chain B_k ------------------------------------------------------------------

@dataclass(frozen=True)
class BChain:
    """A chain of ``B_k`` with its sign and the growing vertex at each step.

    ``grown[i]`` is the region tuple of the big vertex of ``Gamma_{i+1}``.
    """

    chain: AChain
    sign: int
    v0: tuple[int, ...]
    v1: tuple[int, ...]
    grown: tuple[tuple[int, ...], ...]

    def angle_simplex(self, which: str = "v0") -> ZSimplex:
        start = {"v0": self.v0, "v1": self.v1}[which]
        return ZSimplex.chain(CyclicSet(start), *map(CyclicSet, self.grown))


def _check_k(k: int, allow_large: bool):
    if k < 1 or (k > 3 and not allow_large) or k > 4:
        raise ValueError(f"B_k supports 1 <= k <= 3 (k = 4 with allow_large), got {k}")


def iter_b_records(k: int, allow_large: bool = False,
                   part: tuple[int, int] = (0, 1)) -> Iterator[BChain]:
    """Depth-first search for ``B_k`` over removal orders of each triangulation.

    A branch is pruned as soon as the removed chord is not a side of the
    growing vertex, i.e. as soon as a second non-trivalent vertex would
    appear.  ``part = (i, m)`` restricts to every m-th triangulation.
    """
    _check_k(k, allow_large)
    n = 2 * k + 3
    index, stride = part
    for t in triangulations(n)[index::stride]:
        tree = tree_of(t)
        order: list[Chord] = []
        grown: list[tuple[int, ...]] = []
        left = set(t.chords)

        def grow(big: frozenset):
            if not left:
                ch = AChain.from_order(n, order)
                v0, v1 = sorted(tree.edges[order[0]])
                yield BChain(ch, orientation_sign(ch, tree=tree), v0, v1, tuple(grown))
                return
            for e in sorted(left):
                if big and not (e[0] in big and e[1] in big):
                    continue
                x, y = tree.edges[e]
                merged = big | set(x) | set(y)
                order.append(e)
                grown.append(tuple(sorted(merged)))
                left.discard(e)
                yield from grow(frozenset(merged))
                left.add(e)
                grown.pop()
                order.pop()

        yield from grow(frozenset())


def b_chains(k: int, allow_large: bool = False) -> list[tuple[AChain, int]]:
    """Maximal chains of the (2k+3)-gon that grow a single vertex, with signs.

    ``Gamma_i`` has one internal vertex of valence ``i + 3`` and all others
    trivalent.
    """
    return [(r.chain, r.sign) for r in iter_b_records(k, allow_large)]


def in_b_k(ch: AChain) -> bool:
    """Whether ``Gamma_i`` has a single ``(i+3)``-valent vertex at every step."""
    if not ch.is_maximal():
        return False
    for i, s in enumerate(ch.sets):
        valences = sorted(len(f) for f in faces(s))
        if valences[-1] != i + 3 or any(v != 3 for v in valences[:-1]):
            return False
    return True


def vertex_simplex(ch: AChain, v: tuple[int, ...]) -> ZSimplex:
    """``C(v) -> C(f_1 v) -> ...``: the region sets of the faces containing ``v``."""
    objects = []
    for s in ch.sets:
        face = next(f for f in faces(s) if set(v) <= set(f))
        objects.append(CyclicSet(face))
    return ZSimplex.chain(*objects)


def merging_vertices(ch: AChain) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(v0, v1)``: the two ends of the first collapsed edge, ``v0`` first."""
    tree = tree_of(ch.sets[0])
    ends = sorted(tree.edges[ch.removed[0]])
    return ends[0], ends[1]


def angle_simplex(ch: AChain, which: str = "v0") -> ZSimplex:
    """Angle chain at ``v0`` or ``v1`` of a chain in ``B_k``."""
    if not in_b_k(ch):
        raise ValueError("chain is not in B_k")
    v0, v1 = merging_vertices(ch)
    if which not in ("v0", "v1"):
        raise ValueError("which must be 'v0' or 'v1'")
    return vertex_simplex(ch, v0 if which == "v0" else v1)


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)
