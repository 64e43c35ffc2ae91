"""Enumerating and sampling normalized tree shapes.

Normalized trees (see :func:`gluecount.trees.normalize`) have no non-root
vertex with a single internal child.  Equivalently, every vertex below the
root either is a leaf, has one child that is a leaf, or has at least two
children; the root may additionally have a single internal child (a root
stalk survives normalization).

``all_normalized_trees`` enumerates each shape exactly once by building
child forests as non-decreasing sequences over a canonically ordered pool,
so no dedup pass is needed.  ``random_tree`` draws shapes by recursive
composition; its distribution is not uniform and does not matter, only
determinism for a given seed does.
"""

import random
from functools import cache
from typing import Iterator, Sequence

from .trees import Colour, RootedTree, add_root, single_vertex


@cache
def _subtree_pool(n: int) -> tuple[RootedTree, ...]:
    """Trees with n leaves that may hang below a non-root vertex."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    out: list[RootedTree] = []
    if n == 1:
        out.append(single_vertex())
        out.append(add_root([single_vertex()]))
    # Components capped below n leaves: a >= 2 part forest never needs the
    # pool being built, which keeps the recursion well-founded.
    out.extend(
        add_root(list(forest))
        for forest in _forests(n, 1, 0, cap=n - 1)
        if len(forest) >= 2
    )
    return tuple(out)


def _forests(total: int, min_size: int, min_index: int, cap: int) -> Iterator[tuple]:
    """Forests with ``total`` leaves, components drawn from the pools in
    non-decreasing (size, pool position) order starting at the given key."""
    if total == 0:
        yield ()
        return
    for m in range(min_size, min(total, cap) + 1):
        pool = _subtree_pool(m)
        lo = min_index if m == min_size else 0
        for i in range(lo, len(pool)):
            for rest in _forests(total - m, m, i, cap):
                yield (pool[i],) + rest


@cache
def all_normalized_trees(n: int) -> tuple[RootedTree, ...]:
    """Every normalized tree shape with exactly n uncoloured leaves."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    out: list[RootedTree] = []
    if n == 1:
        out.append(single_vertex())
    out.extend(add_root(list(forest)) for forest in _forests(n, 1, 0, cap=n))
    return tuple(out)


def random_tree(rng: random.Random, n_leaves: int, as_root: bool = True) -> RootedTree:
    """A random normalized shape with the given leaf count.

    Procedure (fixed so seeded runs are reproducible): a 1-leaf subtree is a
    bare leaf or a leaf under one vertex, equally likely; otherwise draw the
    child count c uniformly (2..n below the root, 1..n at the root, where
    c = 1 makes a root stalk), split the leaves over a uniform composition
    into c positive parts, and recurse per part.
    """
    if n_leaves < 1:
        raise ValueError(f"need n_leaves >= 1, got {n_leaves}")
    if n_leaves == 1:
        if not as_root:
            return single_vertex() if rng.random() < 0.5 else add_root([single_vertex()])
        roll = rng.randrange(3)
        if roll == 0:
            return single_vertex()
        if roll == 1:
            return add_root([single_vertex()])
        return add_root([add_root([single_vertex()])])
    lo = 1 if as_root else 2
    c = rng.randint(lo, n_leaves)
    if c == 1:
        return add_root([random_tree(rng, n_leaves, as_root=False)])
    marks = sorted(rng.sample(range(1, n_leaves), c - 1))
    parts = [b - a for a, b in zip([0, *marks], [*marks, n_leaves])]
    return add_root([random_tree(rng, p, as_root=False) for p in parts])


def recoloured(t: RootedTree, colours: Sequence[Colour]) -> RootedTree:
    """Copy of ``t`` with leaf colours assigned in canonical leaf order."""
    if len(colours) != t.leaf_count:
        raise ValueError("need one colour per leaf")
    mapping = dict(zip(t.canonical_leaf_order, colours))
    return RootedTree(
        t.root, {v: t.children_of(v) for v in t.vertices}, mapping
    )


def random_coloured_pair(
    rng: random.Random, n_leaves: int, n_colours: int
) -> tuple[RootedTree, RootedTree]:
    """Two random shapes with matching colour multisets (colours drawn
    uniformly for the first tree, then dealt to the second in shuffled
    order), so colour-preserving gluings usually exist."""
    t1 = random_tree(rng, n_leaves)
    t2 = random_tree(rng, n_leaves)
    palette = [Colour.base(rng.randrange(n_colours)) for _ in range(n_leaves)]
    deal = palette[:]
    rng.shuffle(deal)
    return recoloured(t1, palette), recoloured(t2, deal)
