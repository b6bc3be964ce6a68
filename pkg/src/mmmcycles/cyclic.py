"""Cyclically and linearly ordered sets, their monomorphisms, and the
rational cocycles built from tuple signs.

Labels are nonnegative integers.  A :class:`CyclicSet` is stored in its
canonical rotation (smallest label first) so that two cyclic sets with the
same cyclic order compare equal.

All values are exact (:class:`fractions.Fraction`); nothing in this module
touches floating point.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

Label = int


def _check_labels(elements: Sequence[int]) -> tuple[int, ...]:
    elements = tuple(elements)
    if not elements:
        raise ValueError("ordered set must be nonempty")
    for x in elements:
        if not isinstance(x, int) or x < 0:
            raise ValueError(f"labels must be nonnegative integers, got {x!r}")
    if len(set(elements)) != len(elements):
        raise ValueError(f"labels must be distinct: {elements}")
    return elements


@dataclass(frozen=True)
class CyclicSet:
    """A finite set with a full cyclic permutation ``x -> next(x)``.

    ``CyclicSet([2, 0, 1]) == CyclicSet([0, 1, 2])``.
    """

    elements: tuple[int, ...]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, elements: Iterable[int]):
        elements = _check_labels(list(elements))
        i = elements.index(min(elements))
        elements = elements[i:] + elements[:i]
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_pos", {x: j for j, x in enumerate(elements)})

    is_cyclic = True

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._pos

    def __repr__(self) -> str:
        return "[" + ", ".join(map(str, self.elements)) + "]"

    def position(self, x: int) -> int:
        return self._pos[x]

    def next(self, x: int, steps: int = 1) -> int:
        n = len(self.elements)
        return self.elements[(self._pos[x] + steps) % n]

    def restrict(self, subset: Iterable[int]) -> "CyclicSet":
        """The induced cyclic order on ``subset``."""
        subset = set(subset)
        return CyclicSet([x for x in self.elements if x in subset])


@dataclass(frozen=True)
class LinearSet:
    """A finite nonempty linearly ordered set."""

    elements: tuple[int, ...]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, elements: Iterable[int]):
        elements = _check_labels(list(elements))
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_pos", {x: j for j, x in enumerate(elements)})

    is_cyclic = False

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._pos

    def __repr__(self) -> str:
        return "(" + ", ".join(map(str, self.elements)) + ")"

    def position(self, x: int) -> int:
        return self._pos[x]


OrderedSet = Union[CyclicSet, LinearSet]


def J(obj: OrderedSet) -> CyclicSet:
    """Close a linear order into a cyclic one; identity on cyclic sets."""
    if obj.is_cyclic:
        return obj
    return CyclicSet(obj.elements)


@dataclass(frozen=True, eq=False)
class OrderedMono:
    """An injective map between ordered sets.

    Construction checks totality, injectivity and that the arrow does not go
    from a cyclic set to a linear one.  Whether the map respects the orders
    is a separate question answered by :func:`is_morphism`.
    """

    source: OrderedSet
    target: OrderedSet
    mapping: Mapping[int, int]

    def __post_init__(self):
        mapping = dict(self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if set(mapping) != set(self.source.elements):
            raise ValueError("map must be defined exactly on the source")
        values = list(mapping.values())
        if len(set(values)) != len(values):
            raise ValueError("map is not injective")
        for y in values:
            if y not in self.target:
                raise ValueError(f"image {y} not in target {self.target}")
        if self.source.is_cyclic and not self.target.is_cyclic:
            raise ValueError("no morphisms from cyclic to linear sets")

    @classmethod
    def inclusion(cls, source: OrderedSet, target: OrderedSet) -> "OrderedMono":
        return cls(source, target, {x: x for x in source})

    @classmethod
    def identity(cls, obj: OrderedSet) -> "OrderedMono":
        return cls.inclusion(obj, obj)

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrderedMono):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.mapping == other.mapping)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.mapping.items())))

    def then(self, other: "OrderedMono") -> "OrderedMono":
        """Composite ``other o self``."""
        if other.source != self.target:
            raise ValueError("arrows are not composable")
        return OrderedMono(self.source, other.target,
                           {x: other.mapping[y] for x, y in self.mapping.items()})

    def image(self) -> frozenset:
        return frozenset(self.mapping.values())


def degree(f: OrderedMono) -> Fraction:
    """Winding number of a monomorphism of cyclic sets.

    ``(1/|D|) * sum_x k(x)`` where ``k(x)`` is the least positive integer
    with ``f(next(x)) = next^k(f(x))``.
    """
    if not (f.source.is_cyclic and f.target.is_cyclic):
        raise ValueError("degree is defined for maps between cyclic sets")
    n = len(f.target)
    total = 0
    for x in f.source:
        steps = (f.target.position(f(f.source.next(x)))
                 - f.target.position(f(x))) % n
        total += steps or n
    return Fraction(total, n)


def is_morphism(f: OrderedMono) -> bool:
    """True iff ``f`` is an arrow of the category of (cyclically) ordered sets."""
    try:
        src, tgt = f.source, f.target
        if src.is_cyclic and not tgt.is_cyclic:
            return False
        if not src.is_cyclic and not tgt.is_cyclic:
            pos = [tgt.position(f(x)) for x in src]
            return all(p < q for p, q in zip(pos, pos[1:]))
        return degree(OrderedMono(J(src), tgt, f.mapping)) == 1
    except (ValueError, KeyError, AttributeError, TypeError):
        return False


def _parity(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting a sequence of distinct integers."""
    inv = 0
    n = len(seq)
    for i in range(n):
        si = seq[i]
        for j in range(i + 1, n):
            if si > seq[j]:
                inv += 1
    return -1 if inv & 1 else 1


def tuple_sign(tup: Sequence[int], reference: OrderedSet) -> int:
    """Compare the order of ``tup`` with the order induced by ``reference``.

    Returns 0 on repeated entries.  Cyclic references require odd length;
    the induced cyclic order is read starting at ``tup[0]``, which is well
    defined because rotating an odd tuple is an even permutation.
    """
    for x in tup:
        if x not in reference:
            raise ValueError(f"{x} is not an element of {reference}")
    if len(set(tup)) != len(tup):
        return 0
    pos = [reference.position(x) for x in tup]
    if reference.is_cyclic:
        if len(tup) % 2 == 0:
            raise ValueError("even-length tuples need a linear reference")
        n = len(reference)
        pos = [(p - pos[0]) % n for p in pos]
    return _parity(pos)


class ZSimplex:
    """A chain ``C_0 -> C_1 -> ... -> C_p`` of composable monomorphisms.

    Either give ``arrows`` (p >= 1) or a single object for a 0-simplex.
    Once an object is cyclic all later objects must be cyclic.
    """

    def __init__(self, arrows: Sequence[OrderedMono] = (), obj: OrderedSet | None = None):
        arrows = tuple(arrows)
        if arrows:
            objects = [arrows[0].source]
            for f in arrows:
                if f.source != objects[-1]:
                    raise ValueError("arrows are not composable")
                objects.append(f.target)
        elif obj is not None:
            objects = [obj]
        else:
            raise ValueError("a simplex needs at least one object")
        seen_cyclic = False
        for c in objects:
            if c.is_cyclic:
                seen_cyclic = True
            elif seen_cyclic:
                raise ValueError("illegal kind sequence: cyclic followed by linear")
        self.arrows = arrows
        self.objects = tuple(objects)

    @classmethod
    def chain(cls, *objects: OrderedSet) -> "ZSimplex":
        """Simplex of inclusions (identity on labels)."""
        if len(objects) == 1:
            return cls(obj=objects[0])
        return cls([OrderedMono.inclusion(a, b) for a, b in zip(objects, objects[1:])])

    @property
    def dim(self) -> int:
        return len(self.objects) - 1

    def __len__(self):
        return len(self.objects)

    def __repr__(self) -> str:
        return "ZSimplex(" + " -> ".join(map(repr, self.objects)) + ")"

    def __eq__(self, other):
        if not isinstance(other, ZSimplex):
            return NotImplemented
        return self.objects == other.objects and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.objects, self.arrows))

    def face(self, i: int) -> "ZSimplex":
        """Delete the i-th object, composing the adjacent arrows if interior."""
        p = self.dim
        if not 0 <= i <= p or p == 0:
            raise IndexError(i)
        if p == 1:
            return ZSimplex(obj=self.objects[1 - i])
        if i == 0:
            return ZSimplex(self.arrows[1:])
        if i == p:
            return ZSimplex(self.arrows[:-1])
        merged = self.arrows[i - 1].then(self.arrows[i])
        return ZSimplex(self.arrows[:i - 1] + (merged,) + self.arrows[i + 1:])

    def images(self) -> list[frozenset]:
        """Image of each ``C_i`` in the last object."""
        maps = [{x: x for x in self.objects[-1]}]
        for f in reversed(self.arrows):
            after = maps[0]
            maps.insert(0, {x: after[y] for x, y in f.mapping.items()})
        return [frozenset(m.values()) for m in maps]

    def map_objects(self, fn: Callable[[OrderedSet], OrderedSet]) -> "ZSimplex":
        """Apply an object-level functor that is the identity on labels."""
        if not self.arrows:
            return ZSimplex(obj=fn(self.objects[0]))
        return ZSimplex([OrderedMono(fn(f.source), fn(f.target), f.mapping)
                         for f in self.arrows])

    def Jbar(self) -> "ZSimplex":
        return self.map_objects(J)


def _sign_sum(simplex: ZSimplex, restricted: bool) -> int:
    images = simplex.images()
    ref = simplex.objects[-1]
    if restricted:
        pools = [images[0]] + [b - a for a, b in zip(images, images[1:])]
    else:
        pools = images
    if any(not p for p in pools):
        return 0
    pools = [sorted(p) for p in pools]
    return sum(tuple_sign(t, ref) for t in itertools.product(*pools))


def _prefactor(k: int, sizes: Iterable[int]) -> Fraction:
    return Fraction((-1) ** k * math.factorial(k),
                    math.factorial(2 * k) * math.prod(sizes))


def c_z(simplex: ZSimplex, k: int, restricted: bool = True) -> Fraction:
    """The cyclic set cocycle on a 2k-simplex of cyclic sets.

    With ``restricted`` the sign sum runs only over ``a_i`` in
    ``image(C_i) - image(C_{i-1})``; both sums agree.
    """
    if simplex.dim != 2 * k:
        raise ValueError(f"c_z^{k} needs a {2 * k}-simplex, got dimension {simplex.dim}")
    if not all(c.is_cyclic for c in simplex.objects):
        raise ValueError("c_z is defined on simplices of cyclic sets")
    if restricted:
        sizes = [len(c) for c in simplex.objects]
        if any(a >= b for a, b in zip(sizes, sizes[1:])):
            return Fraction(0)
    total = _sign_sum(simplex, restricted)
    if not total:
        return Fraction(0)
    return _prefactor(k, (len(c) for c in simplex.objects)) * total


def s_k(simplex: ZSimplex, k: int, restricted: bool = True) -> Fraction:
    """The (2k-1)-cochain on linearly ordered sets whose coboundary is c_z o J."""
    if k < 1:
        raise ValueError("s_k needs k >= 1")
    if simplex.dim != 2 * k - 1:
        raise ValueError(f"s_{k} needs a {2 * k - 1}-simplex, got dimension {simplex.dim}")
    if any(c.is_cyclic for c in simplex.objects):
        raise ValueError("s_k is defined on simplices of linear sets")
    total = _sign_sum(simplex, restricted)
    if not total:
        return Fraction(0)
    return _prefactor(k, (len(c) for c in simplex.objects)) * total


def c_z_plus(simplex: ZSimplex, k: int) -> Fraction:
    """Extension of c_z to mixed linear/cyclic simplices, zero on all-linear ones."""
    if simplex.dim != 2 * k:
        raise ValueError(f"c_z+^{k} needs a {2 * k}-simplex, got dimension {simplex.dim}")
    objs = simplex.objects
    if not objs[-1].is_cyclic:
        return Fraction(0)
    if len(objs) == 1 or objs[-2].is_cyclic:
        return c_z(simplex.Jbar(), k)
    return c_z(simplex.Jbar(), k) - s_k(simplex.face(2 * k), k)


Cochain = Callable[[ZSimplex], Fraction]


def coboundary(cochain: Callable, simplex) -> Fraction:
    """Alternating face sum ``sum_i (-1)^i cochain(face_i)``.

    Works for any simplex type exposing ``dim`` and ``face(i)``.
    """
    total = Fraction(0)
    for i in range(simplex.dim + 1):
        value = cochain(simplex.face(i))
        total += value if i % 2 == 0 else -value
    return total


# -- random generators -------------------------------------------------------

def _insert_fresh(rng: random.Random, elems: list[int], count: int, fresh) -> list[int]:
    elems = list(elems)
    for _ in range(count):
        elems.insert(rng.randrange(len(elems) + 1), next(fresh))
    return elems


def _relabel(rng: random.Random, objects: list[OrderedSet], pool: int) -> ZSimplex:
    """Relabel each object independently and conjugate the inclusions."""
    bijections = []
    new_objects = []
    for obj in objects:
        labels = rng.sample(range(pool), len(obj))
        b = dict(zip(obj.elements, labels))
        bijections.append(b)
        new_objects.append(type(obj)([b[x] for x in obj.elements]))
    if len(objects) == 1:
        return ZSimplex(obj=new_objects[0])
    arrows = []
    for i in range(len(objects) - 1):
        src, dst = bijections[i], bijections[i + 1]
        arrows.append(OrderedMono(new_objects[i], new_objects[i + 1],
                                  {src[x]: dst[x] for x in objects[i].elements}))
    return ZSimplex(arrows)


def random_simplex(rng: random.Random, dim: int, max_size: int = 12,
                   linear_prefix: int = 0, relabel: bool = True) -> ZSimplex:
    """Random legal simplex whose first ``linear_prefix`` objects are linear.

    Each arrow inserts fresh labels at uniform positions, so every arrow is an
    order-compatible embedding (degree 1 on the cyclic part).  Arrows that
    add nothing are allowed.
    """
    if max_size < 1:
        raise ValueError("max_size must be positive")
    fresh = itertools.count()
    size0 = rng.randint(1, max(1, max_size - dim))
    elems = [next(fresh) for _ in range(size0)]
    sizes_left = max_size - size0
    seqs = [elems]
    for _ in range(dim):
        add = rng.randint(0, min(sizes_left, 3))
        sizes_left -= add
        seqs.append(_insert_fresh(rng, seqs[-1], add, fresh))
    objects = [LinearSet(s) if i < linear_prefix else CyclicSet(s)
               for i, s in enumerate(seqs)]
    if not relabel:
        return ZSimplex.chain(*objects)
    return _relabel(rng, objects, pool=3 * max_size + 3)
