"""Fat (ribbon) graphs as half-edge structures.

A graph is given by a cyclically ordered star of half-edges at every vertex
and a fixed-point free involution pairing half-edges into edges.  Faces
(boundary cycles of the thickened surface) are the orbits of ``sigma o iota``.

An angle ``(a, sigma(a))`` at a vertex is identified with its first
half-edge ``a``, so ``C(v)`` is the star of ``v`` viewed as a cyclic set of
angle ids.

Morphisms are composites of single-edge collapses.  Collapsing ``h`` merges
its endpoints into the smaller vertex id and retires ``h`` and its partner;
ids are never reused.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .cyclic import CyclicSet, OrderedMono, ZSimplex, c_z


def _canonical(star: Sequence[int]) -> tuple[int, ...]:
    star = tuple(star)
    i = star.index(min(star))
    return star[i:] + star[:i]


class FatGraph:
    """Half-edge fat graph.

    Parameters
    ----------
    stars : mapping vertex id -> sequence of half-edge ids in cyclic order
    pairing : iterable of 2-element half-edge pairs, or a dict ``h -> iota(h)``
    names : optional display names for half-edges

    Construction only builds the incidence tables; call :func:`validate`
    (or :meth:`check`) to test the fat graph axioms.
    """

    def __init__(self, stars: Mapping[int, Sequence[int]], pairing,
                 names: Mapping[int, str] | None = None):
        self._stars = {int(v): tuple(s) for v, s in stars.items()}
        if isinstance(pairing, Mapping):
            self._iota = dict(pairing)
        else:
            self._iota = {}
            for pair in pairing:
                a, b = pair
                self._iota[a] = b
                self._iota[b] = a
        self._boundary = {}
        self._sigma = {}
        self._sigma_inv = {}
        for v, star in self._stars.items():
            for i, h in enumerate(star):
                self._boundary[h] = v
                self._sigma[h] = star[(i + 1) % len(star)]
                self._sigma_inv[h] = star[i - 1]
        self.names = dict(names or {})

    # -- structure ---------------------------------------------------------

    @property
    def vertices(self) -> list[int]:
        return sorted(self._stars)

    @property
    def half_edges(self) -> list[int]:
        return sorted(self._boundary)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted({tuple(sorted((h, self._iota[h]))) for h in self._iota})

    def star(self, v: int) -> tuple[int, ...]:
        return self._stars[v]

    def boundary(self, h: int) -> int:
        return self._boundary[h]

    def sigma(self, h: int) -> int:
        return self._sigma[h]

    def sigma_inv(self, h: int) -> int:
        return self._sigma_inv[h]

    def iota(self, h: int) -> int:
        return self._iota[h]

    def valence(self, v: int) -> int:
        return len(self._stars[v])

    def multiplicity(self, v: int) -> int:
        return self.valence(v) - 2

    def is_loop(self, h: int) -> bool:
        return self._boundary[h] == self._boundary[self._iota[h]]

    def name(self, h: int) -> str:
        return self.names.get(h, str(h))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FatGraph):
            return NotImplemented
        return (self._iota == other._iota
                and {v: _canonical(s) for v, s in self._stars.items()}
                == {v: _canonical(s) for v, s in other._stars.items()})

    def __hash__(self):
        return hash(frozenset((v, _canonical(s)) for v, s in self._stars.items()))

    def __repr__(self) -> str:
        stars = ", ".join(f"{v}: {list(self._stars[v])}" for v in self.vertices)
        return f"FatGraph({{{stars}}}, edges={self.edges})"

    def check(self) -> "FatGraph":
        problems = validate(self)
        if problems:
            raise ValueError("invalid fat graph: " + "; ".join(problems))
        return self

    # -- topology ------------------------------------------------------------

    def faces(self) -> list[tuple[int, ...]]:
        """Boundary cycles: orbits of ``h -> sigma(iota(h))``."""
        seen = set()
        out = []
        for h in self.half_edges:
            if h in seen:
                continue
            orbit = []
            x = h
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = self._sigma[self._iota[x]]
            out.append(tuple(orbit))
        return out

    def euler_characteristic(self) -> int:
        return len(self._stars) - len(self._iota) // 2

    def topology(self) -> tuple[int, int, int, int]:
        """``(euler_char, genus, punctures, codimension)``."""
        chi = self.euler_characteristic()
        s = len(self.faces())
        twice_g = 2 - chi - s
        assert twice_g >= 0 and twice_g % 2 == 0, "non-integral genus"
        codim = sum(self.valence(v) - 3 for v in self._stars)
        return chi, twice_g // 2, s, codim

    def codimension(self) -> int:
        return sum(self.valence(v) - 3 for v in self._stars)

    def angles(self, v: int) -> CyclicSet:
        """``C(v)``: angles at ``v`` in their induced cyclic order."""
        if v not in self._stars:
            raise KeyError(f"unknown vertex {v}")
        return CyclicSet(self._stars[v])

    def angle(self, a: int) -> tuple[int, int]:
        return (a, self._sigma[a])

    # -- morphisms -----------------------------------------------------------

    def collapse_edge(self, h: int) -> tuple["FatGraph", "FatMorphism"]:
        """Collapse the edge containing half-edge ``h``.

        The merged star lists ``u``'s half-edges after ``h`` followed by
        ``v``'s half-edges after ``iota(h)``.
        """
        if h not in self._iota:
            raise KeyError(f"unknown half-edge {h}")
        hb = self._iota[h]
        u, v = self._boundary[h], self._boundary[hb]
        if u == v:
            raise ValueError(f"cannot collapse loop at vertex {u}")
        su, sv = self._stars[u], self._stars[v]
        iu, iv = su.index(h), sv.index(hb)
        fan_u = su[iu + 1:] + su[:iu]
        fan_v = sv[iv + 1:] + sv[:iv]
        w = min(u, v)
        stars = {x: s for x, s in self._stars.items() if x not in (u, v)}
        stars[w] = fan_u + fan_v
        pairing = {x: y for x, y in self._iota.items() if x not in (h, hb)}
        names = {x: n for x, n in self.names.items() if x not in (h, hb)}
        target = FatGraph(stars, pairing, names)
        vertex_map = {x: x for x in self._stars}
        vertex_map[u] = vertex_map[v] = w
        angle_map = {a: a for a in self._boundary}
        angle_map[h] = fan_v[-1]
        angle_map[hb] = fan_u[-1]
        return target, FatMorphism(self, target, vertex_map, angle_map,
                                   frozenset([(min(h, hb), max(h, hb))]))

    def collapse_edges(self, half_edges: Iterable[int]) -> tuple["FatGraph", "FatMorphism"]:
        """Collapse several edges one after another (they must form a forest)."""
        m = FatMorphism.identity(self)
        g = self
        for h in half_edges:
            g, f = g.collapse_edge(h)
            m = m.then(f)
        return g, m

    def relabel(self, vertex_perm: Mapping[int, int],
                half_edge_perm: Mapping[int, int]) -> tuple["FatGraph", "FatMorphism"]:
        """Isomorphic copy under renaming of vertex and half-edge ids."""
        stars = {vertex_perm[v]: [half_edge_perm[h] for h in s]
                 for v, s in self._stars.items()}
        pairing = {half_edge_perm[a]: half_edge_perm[b] for a, b in self._iota.items()}
        names = {half_edge_perm[h]: n for h, n in self.names.items()}
        target = FatGraph(stars, pairing, names)
        return target, FatMorphism(self, target, dict(vertex_perm),
                                   {a: half_edge_perm[a] for a in self._boundary},
                                   frozenset())


def validate(g: FatGraph) -> list[str]:
    """All violated fat graph axioms, empty if ``g`` is a fat graph."""
    problems = []
    seen = {}
    for v, star in g._stars.items():
        for h in star:
            if h in seen:
                problems.append(f"half-edge {g.name(h)} appears in more than one star slot")
            seen[h] = v
        if len(star) < 3:
            problems.append(f"valence < 3 at vertex {v}")
    if not g._stars:
        problems.append("graph has no vertices")
    for h, hb in g._iota.items():
        if h == hb:
            problems.append(f"involution not fixed-point free at {g.name(h)}")
        elif g._iota.get(hb) != h:
            problems.append(f"pairing is not an involution at {g.name(h)}")
        if h not in seen:
            problems.append(f"half-edge {g.name(h)} is paired but not in any star")
    for h in seen:
        if h not in g._iota:
            problems.append(f"dangling half-edge {g.name(h)} (not paired)")
    if not problems:
        start = next(iter(g._stars))
        reached = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for h in g._stars[v]:
                w = g._boundary[g._iota[h]]
                if w not in reached:
                    reached.add(w)
                    todo.append(w)
        if len(reached) != len(g._stars):
            problems.append("graph is not connected")
    return problems


class FatMorphism:
    """A morphism of fat graphs recorded through its vertex and angle maps.

    ``angle_map`` sends every angle id of the source to an angle id of the
    target; restricted to ``C(v)`` it is the monomorphism
    ``C(v) -> C(f(v))``.
    """

    def __init__(self, source: FatGraph, target: FatGraph,
                 vertex_map: Mapping[int, int], angle_map: Mapping[int, int],
                 collapsed: frozenset = frozenset()):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        self.angle_map = dict(angle_map)
        self.collapsed = frozenset(collapsed)

    @classmethod
    def identity(cls, g: FatGraph) -> "FatMorphism":
        return cls(g, g, {v: v for v in g.vertices}, {h: h for h in g.half_edges})

    def then(self, other: "FatMorphism") -> "FatMorphism":
        """Composite ``other o self``."""
        if other.source != self.target:
            raise ValueError("morphisms are not composable")
        return FatMorphism(
            self.source, other.target,
            {v: other.vertex_map[w] for v, w in self.vertex_map.items()},
            {a: other.angle_map[b] for a, b in self.angle_map.items()},
            self.collapsed | other.collapsed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FatMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.vertex_map == other.vertex_map
                and self.angle_map == other.angle_map)

    def __repr__(self) -> str:
        return f"FatMorphism(collapsed={sorted(self.collapsed)})"

    def is_isomorphism(self) -> bool:
        return len(self.source.vertices) == len(self.target.vertices) and not self.collapsed


def angle_map(m: FatMorphism, v: int) -> OrderedMono:
    """The induced monomorphism ``C(v) -> C(m(v))``."""
    if v not in m.vertex_map:
        raise KeyError(f"vertex {v} not in source")
    src = m.source.angles(v)
    tgt = m.target.angles(m.vertex_map[v])
    return OrderedMono(src, tgt, {a: m.angle_map[a] for a in src})


class FatSimplex:
    """A chain ``Gamma_0 -> ... -> Gamma_p`` of composable fat graph morphisms."""

    def __init__(self, morphisms: Sequence[FatMorphism] = (), graph: FatGraph | None = None):
        morphisms = tuple(morphisms)
        if morphisms:
            graphs = [morphisms[0].source]
            for f in morphisms:
                if f.source is not graphs[-1] and f.source != graphs[-1]:
                    raise ValueError("morphisms are not composable")
                graphs.append(f.target)
        elif graph is not None:
            graphs = [graph]
        else:
            raise ValueError("a simplex needs at least one graph")
        self.morphisms = morphisms
        self.graphs = tuple(graphs)

    @property
    def dim(self) -> int:
        return len(self.graphs) - 1

    def face(self, i: int) -> "FatSimplex":
        p = self.dim
        if not 0 <= i <= p or p == 0:
            raise IndexError(i)
        if p == 1:
            return FatSimplex(graph=self.graphs[1 - i])
        ms = self.morphisms
        if i == 0:
            return FatSimplex(ms[1:])
        if i == p:
            return FatSimplex(ms[:-1])
        return FatSimplex(ms[:i - 1] + (ms[i - 1].then(ms[i]),) + ms[i + 1:])

    def angle_simplex(self, v: int) -> ZSimplex:
        """The chain ``C(v) -> C(f_1 v) -> ... -> C(f_p v)`` in the nerve of Z."""
        if not self.morphisms:
            return ZSimplex(obj=self.graphs[0].angles(v))
        arrows = []
        for f in self.morphisms:
            arrows.append(angle_map(f, v))
            v = f.vertex_map[v]
        return ZSimplex(arrows)


def c_fat(simplex: FatSimplex, k: int) -> Fraction:
    """``sum_v m(v) c_z^k(C(v) -> C(f_1 v) -> ... )`` over vertices of ``Gamma_0``."""
    if simplex.dim != 2 * k:
        raise ValueError(f"c_fat^{k} needs a {2 * k}-simplex, got dimension {simplex.dim}")
    g0 = simplex.graphs[0]
    total = Fraction(0)
    for v in g0.vertices:
        if k == 0:
            total += g0.multiplicity(v)
            continue
        value = c_z(simplex.angle_simplex(v), k)
        if value:
            total += g0.multiplicity(v) * value
    return total


# -- examples and generators --------------------------------------------------

def figure_eight() -> FatGraph:
    """One 4-valent vertex with star ``[a, A, b, B]`` (capitals = partners)."""
    return FatGraph({0: [0, 1, 2, 3]}, [(0, 1), (2, 3)],
                    names={0: "a", 1: "A", 2: "b", 3: "B"})


def interleaved_eight() -> FatGraph:
    """One 4-valent vertex with star ``[a, b, A, B]``: a punctured torus."""
    return FatGraph({0: [0, 2, 1, 3]}, [(0, 1), (2, 3)],
                    names={0: "a", 1: "A", 2: "b", 3: "B"})


def random_trivalent(rng: random.Random, max_edges: int = 12,
                     min_vertices: int = 2) -> FatGraph:
    """Random connected trivalent fat graph with at most ``max_edges`` edges."""
    max_vertices = (2 * max_edges) // 3
    max_vertices -= max_vertices % 2
    if max_vertices < min_vertices:
        raise ValueError("max_edges too small")
    while True:
        nv = rng.randrange(min_vertices, max_vertices + 1, 2)
        halves = list(range(3 * nv))
        rng.shuffle(halves)
        stars = {v: halves[3 * v:3 * v + 3] for v in range(nv)}
        order = list(range(3 * nv))
        rng.shuffle(order)
        pairing = [(order[2 * i], order[2 * i + 1]) for i in range(len(order) // 2)]
        g = FatGraph(stars, pairing)
        if not validate(g):
            return g


def random_collapse_chain(rng: random.Random, dim: int, max_edges: int = 12,
                          max_per_step: int = 2) -> FatSimplex:
    """Random ``dim``-simplex of collapses starting at a random trivalent graph.

    Each arrow collapses between 0 and ``max_per_step`` non-loop edges,
    favouring exactly one.
    """
    g = random_trivalent(rng, max_edges)
    morphisms = []
    for _ in range(dim):
        r = rng.random()
        count = 1 if r < 0.7 else (0 if r < 0.85 else max_per_step)
        m = FatMorphism.identity(g)
        for _ in range(count):
            candidates = [e for e in g.edges if not g.is_loop(e[0])]
            if not candidates:
                break
            e = rng.choice(candidates)
            g, f = g.collapse_edge(rng.choice(e))
            m = m.then(f)
        morphisms.append(m)
    return FatSimplex(morphisms)


# -- file format ----------------------------------------------------------------

class GraphFormatError(ValueError):
    """Malformed fat graph document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _line_of(text: str, token) -> int | None:
    needle = json.dumps(token)
    idx = text.find(needle)
    return text.count("\n", 0, idx) + 1 if idx >= 0 else None


def loads_graph(text: str) -> FatGraph:
    """Parse a fat graph document.

    Format (JSON)::

        {"vertices": [{"id": 0, "star": ["a", "A", "b", "B"]}],
         "pairing": [["a", "A"], ["b", "B"]]}

    Half-edge ids may be strings or integers.  Raises
    :class:`GraphFormatError` for syntax errors, dangling half-edges and
    axiom violations.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "vertices" not in doc or "pairing" not in doc:
        raise GraphFormatError("document needs 'vertices' and 'pairing' fields", 1)
    ids: dict = {}
    stars = {}
    for entry in doc["vertices"]:
        if not isinstance(entry, dict) or "id" not in entry or "star" not in entry:
            raise GraphFormatError("vertex entries need 'id' and 'star'", _line_of(text, "star"))
        vid = entry["id"]
        if not isinstance(vid, int) or vid < 0 or vid in stars:
            raise GraphFormatError(f"bad or repeated vertex id {vid!r}", _line_of(text, vid))
        star = []
        for token in entry["star"]:
            if token in ids:
                raise GraphFormatError(f"half-edge {token!r} appears in two star slots",
                                       _line_of(text, token))
            ids[token] = len(ids)
            star.append(ids[token])
        stars[vid] = star
    pairing = []
    paired = set()
    for pair in doc["pairing"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise GraphFormatError(f"pairing entries must have two half-edges: {pair!r}",
                                   _line_of(text, pair[0]) if pair else None)
        for token in pair:
            if token not in ids:
                raise GraphFormatError(f"half-edge {token!r} is paired but not in any star",
                                       _line_of(text, token))
            if token in paired:
                raise GraphFormatError(f"half-edge {token!r} paired twice", _line_of(text, token))
            paired.add(token)
        pairing.append((ids[pair[0]], ids[pair[1]]))
    for token in ids:
        if token not in paired:
            raise GraphFormatError(f"dangling half-edge {token!r}", _line_of(text, token))
    g = FatGraph(stars, pairing, names={i: str(t) for t, i in ids.items()})
    problems = validate(g)
    if problems:
        raise GraphFormatError("; ".join(problems))
    return g


def load_graph(path: str | Path) -> FatGraph:
    return loads_graph(Path(path).read_text())


def dumps_graph(g: FatGraph) -> str:
    doc = {
        "vertices": [{"id": v, "star": [g.name(h) for h in g.star(v)]} for v in g.vertices],
        "pairing": [[g.name(a), g.name(b)] for a, b in g.edges],
    }
    return json.dumps(doc, indent=2)
