"""Shared hypothesis strategies for random trees."""

from hypothesis import strategies as st

from gluecount.trees import from_nested


def count_leaves(spec):
    if isinstance(spec, int):
        return 1
    return sum(count_leaves(c) for c in spec)


def tree_specs(max_leaves=6, n_colours=1):
    """Nested-list tree specs with at most ``max_leaves`` leaves."""
    leaf = st.integers(min_value=0, max_value=n_colours - 1)
    return st.recursive(
        leaf,
        lambda ch: st.lists(ch, min_size=1, max_size=3),
        max_leaves=max_leaves,
    )


def trees(max_leaves=6, n_colours=1):
    return tree_specs(max_leaves, n_colours).map(from_nested)


@st.composite
def tree_pairs_same_leaves(draw, max_leaves=5, n_colours=1):
    """Pairs of trees with equal leaf counts (gluings need a bijection)."""
    s1 = draw(tree_specs(max_leaves, n_colours))
    k = count_leaves(s1)
    s2 = draw(
        tree_specs(max_leaves, n_colours).filter(lambda s: count_leaves(s) == k)
    )
    return from_nested(s1), from_nested(s2)
