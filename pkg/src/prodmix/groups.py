"""Finite permutation groups materialised as Cayley tables.

Elements are integers ``0 .. order-1``.  Element 0 is the identity and the
remaining elements are numbered in breadth-first order from the identity,
right-multiplying by the generators in the order they were given.  The
product ``mul[a, b]`` is "apply a, then b" on points.

Subsets of a group are :class:`ElementSet` objects: an immutable boolean
mask over element indices with cached size and normality flag.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidPermutation, NotABijection, OrderExceeded

DEFAULT_MAX_ORDER = 20000

Permutation = tuple  # images of 0..degree-1, see as_permutation()


def as_permutation(images: Sequence[int], degree: int | None = None) -> tuple[int, ...]:
    """Validate an image list and return it as a tuple."""
    try:
        perm = tuple(int(x) for x in images)
    except (TypeError, ValueError) as exc:
        raise InvalidPermutation(f"image list is not a list of integers: {images!r}") from exc
    if degree is not None and len(perm) != degree:
        raise InvalidPermutation(f"expected {degree} images, got {len(perm)}")
    if sorted(perm) != list(range(len(perm))):
        raise NotABijection(f"{list(perm)} is not a bijection on 0..{len(perm) - 1}")
    return perm


@dataclass(frozen=True, eq=False)
class ConjClass:
    index: int
    size: int
    representative: int
    members: np.ndarray  # sorted element indices

    def __contains__(self, g) -> bool:
        i = np.searchsorted(self.members, g)
        return bool(i < self.size and self.members[i] == g)


class GroupTable:
    """A finite group given by its full multiplication table.

    Build one with :func:`build_group`; the constructor trusts its input.
    """

    def __init__(self, mul: np.ndarray, elements: np.ndarray | None = None):
        mul = np.ascontiguousarray(mul, dtype=np.int32)
        n = mul.shape[0]
        self.order = n
        self.identity = 0
        self.mul = mul
        self.elements = elements  # permutation images, one row per element
        self.inv = np.argmax(mul == 0, axis=1).astype(np.int32)
        self.classes = _conjugacy_classes(mul, self.inv)
        self.class_of = np.empty(n, dtype=np.int32)
        for K in self.classes:
            self.class_of[K.members] = K.index
        self.class_sizes = np.array([K.size for K in self.classes], dtype=np.int64)
        self.class_reps = np.array([K.representative for K in self.classes], dtype=np.int64)
        for arr in (self.mul, self.inv, self.class_of, self.class_sizes, self.class_reps):
            arr.setflags(write=False)
        self._orders = None

    def __repr__(self):
        return f"GroupTable(order={self.order}, classes={self.num_classes})"

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    # element-level helpers

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            orders = np.zeros(self.order, dtype=np.int64)
            cur = np.arange(self.order)
            pending = np.ones(self.order, dtype=bool)
            k = 1
            while pending.any():
                hit = pending & (cur == 0)
                orders[hit] = k
                pending &= ~hit
                cur = self.mul[cur, np.arange(self.order)]
                k += 1
            orders.setflags(write=False)
            self._orders = orders
        return self._orders

    def exponent(self) -> int:
        return math.lcm(*(int(o) for o in np.unique(self.element_orders())))

    def power(self, g: int, k: int) -> int:
        r = 0
        for _ in range(k % int(self.element_orders()[g])):
            r = int(self.mul[r, g])
        return r

    def centralizer_order(self, g: int) -> int:
        return self.order // int(self.class_sizes[self.class_of[g]])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    # subsets

    def subset(self, indices: Iterable[int]) -> "ElementSet":
        mask = np.zeros(self.order, dtype=bool)
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.order):
            raise IndexError(f"element index out of range for group of order {self.order}")
        mask[idx] = True
        return ElementSet(self, mask)

    def from_mask(self, mask) -> "ElementSet":
        return ElementSet(self, np.asarray(mask, dtype=bool))

    def class_set(self, i: int) -> "ElementSet":
        return self.from_mask(self.class_of == i)

    def union_of_classes(self, indices: Iterable[int]) -> "ElementSet":
        pick = np.zeros(self.num_classes, dtype=bool)
        pick[list(indices)] = True
        return self.from_mask(pick[self.class_of])

    def full_set(self) -> "ElementSet":
        return self.from_mask(np.ones(self.order, dtype=bool))

    def empty_set(self) -> "ElementSet":
        return self.from_mask(np.zeros(self.order, dtype=bool))


class ElementSet:
    """An immutable subset of a :class:`GroupTable`."""

    __slots__ = ("group", "bits", "size", "is_normal")

    def __init__(self, group: GroupTable, mask: np.ndarray):
        if mask.shape != (group.order,):
            raise ValueError(f"mask has shape {mask.shape}, expected ({group.order},)")
        bits = np.array(mask, dtype=bool)
        bits.setflags(write=False)
        self.group = group
        self.bits = bits
        self.size = int(bits.sum())
        # normal iff every class is fully in or fully out
        hits = np.bincount(group.class_of[bits], minlength=group.num_classes)
        self.is_normal = bool(np.all((hits == 0) | (hits == group.class_sizes)))

    def __len__(self):
        return self.size

    def __contains__(self, g):
        return bool(self.bits[g])

    def __iter__(self):
        return iter(self.indices().tolist())

    def __eq__(self, other):
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __le__(self, other: "ElementSet") -> bool:
        return bool(np.all(other.bits[self.bits]))

    def __or__(self, other):
        return ElementSet(self.group, self.bits | other.bits)

    def __and__(self, other):
        return ElementSet(self.group, self.bits & other.bits)

    def __sub__(self, other):
        return ElementSet(self.group, self.bits & ~other.bits)

    def __repr__(self):
        shown = self.indices()[:8].tolist()
        more = ", ..." if self.size > 8 else ""
        return f"ElementSet(size={self.size}, normal={self.is_normal}, {shown}{more})"

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def classes(self) -> list[int]:
        """Indices of the conjugacy classes contained in this set."""
        G = self.group
        hits = np.bincount(G.class_of[self.bits], minlength=G.num_classes)
        return [int(i) for i in np.flatnonzero(hits == G.class_sizes)]


def build_group(generators: Sequence[Sequence[int]], max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    """Enumerate the group generated by ``generators`` and tabulate it.

    Raises :class:`OrderExceeded` as soon as more than ``max_order`` elements
    have been found.
    """
    if not generators:
        raise InvalidPermutation("at least one generator is required")
    gens = [as_permutation(g) for g in generators]
    degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise InvalidPermutation("generators have different degrees")
    gen_arr = np.array(gens, dtype=np.int64).reshape(len(gens), degree)

    ident = tuple(range(degree))
    index = {ident: 0}
    elements = [ident]
    parent = [(-1, -1)]  # (element, generator) with element * generator = this
    right = []  # right[x][s] = x * gens[s]
    queue = deque([0])
    while queue:
        x = queue.popleft()
        px = np.asarray(elements[x])
        row = []
        for s in range(len(gens)):
            y = tuple(gen_arr[s][px].tolist())
            j = index.get(y)
            if j is None:
                if len(elements) >= max_order:
                    raise OrderExceeded(f"group order exceeds max_order={max_order}")
                j = len(elements)
                index[y] = j
                elements.append(y)
                parent.append((x, s))
                queue.append(j)
            row.append(j)
        right.append(row)

    n = len(elements)
    right = np.array(right, dtype=np.int32).reshape(n, len(gens))
    mul = np.empty((n, n), dtype=np.int32)
    mul[:, 0] = np.arange(n)
    # column b = column parent(b) right-multiplied by the generator; BFS order
    # guarantees parents are filled first
    for b in range(1, n):
        p, s = parent[b]
        mul[:, b] = right[mul[:, p], s]
    elems = np.array(elements, dtype=np.int64).reshape(n, degree)
    elems.setflags(write=False)
    return GroupTable(mul, elems)


def _conjugacy_classes(mul: np.ndarray, inv: np.ndarray) -> list[ConjClass]:
    n = mul.shape[0]
    seen = np.zeros(n, dtype=bool)
    orbits = []
    everything = np.arange(n)
    for x in range(n):
        if seen[x]:
            continue
        # g^-1 x g for every g
        orbit = np.unique(mul[mul[inv, x], everything])
        seen[orbit] = True
        orbits.append(orbit)
    orbits.sort(key=lambda o: (len(o), int(o[0])))
    out = []
    for i, o in enumerate(orbits):
        o.setflags(write=False)
        out.append(ConjClass(index=i, size=len(o), representative=int(o[0]), members=o))
    return out


def conjugacy_classes(G: GroupTable) -> list[ConjClass]:
    return list(G.classes)


def inverse_set(X: ElementSet, G: GroupTable) -> ElementSet:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.inv[X.bits]] = True
    return ElementSet(G, mask)


def normal_closure(X: ElementSet, G: GroupTable) -> ElementSet:
    """Smallest conjugation-invariant superset of X (a union of classes)."""
    touched = np.unique(G.class_of[X.bits])
    return G.union_of_classes(touched.tolist())


def left_translate(g: int, X: ElementSet, G: GroupTable) -> ElementSet:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.mul[g, X.bits]] = True
    return ElementSet(G, mask)


def right_translate(X: ElementSet, g: int, G: GroupTable) -> ElementSet:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.mul[X.bits, g]] = True
    return ElementSet(G, mask)


def generated_subgroup(X: ElementSet, G: GroupTable) -> ElementSet:
    """Subgroup generated by X, by closing {e} under right multiplication."""
    gens = X.indices()
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    while frontier.size:
        prod = G.mul[np.ix_(frontier, gens)].ravel()
        new = np.unique(prod[~mask[prod]])
        mask[new] = True
        frontier = new
    return ElementSet(G, mask)


def derived_subgroup(G: GroupTable) -> ElementSet:
    n = G.order
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    # a^-1 b^-1 a b
    comm = G.mul[G.mul[G.inv[a], G.inv[b]], G.mul[a, b]]
    return generated_subgroup(G.subset(np.unique(comm)), G)


def is_simple(G: GroupTable) -> bool:
    """Advisory simplicity test: every nontrivial class generates G."""
    if G.order == 1:
        return False
    return all(
        generated_subgroup(G.class_set(K.index), G).size == G.order
        for K in G.classes
        if K.representative != G.identity
    )


def check_group_axioms(G: GroupTable, exhaustive_up_to: int = 200, samples: int = 10_000, seed: int = 0) -> bool:
    """Check closure, identity, inverses and associativity of the table.

    Associativity is checked on all triples when the order is at most
    ``exhaustive_up_to`` and on ``samples`` random triples otherwise.
    """
    n = G.order
    mul = G.mul
    if mul.min() < 0 or mul.max() >= n:
        return False
    ar = np.arange(n)
    if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
        return False
    if not (np.all(mul[ar, G.inv] == 0) and np.all(mul[G.inv, ar] == 0)):
        return False
    if n <= exhaustive_up_to:
        for a in range(n):
            if not np.array_equal(mul[mul[a]], mul[a][mul]):
                return False
        return True
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    return bool(np.all(mul[mul[a, b], c] == mul[a, mul[b, c]]))
