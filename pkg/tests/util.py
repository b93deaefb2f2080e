"""Shared random instance generators for the test suite.

All generators take an explicit random.Random so every test is seeded and
reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from ghtrees import MergeTree, MetricTree


def random_metric_tree(rng: random.Random, n: int, max_len: int = 6) -> MetricTree:
    """Random tree on n nodes with small positive rational lengths."""
    edges = []
    for i in range(1, n):
        parent = rng.randrange(i)
        length = Fraction(rng.randint(1, max_len), rng.choice([1, 2]))
        edges.append((parent, i, length))
    return MetricTree(n, edges)


def random_merge_tree(
    rng: random.Random, leaves: int, den: int = 2, min_units: int = 1
) -> MergeTree:
    """Random merge tree with the given leaf count and no single-child nodes.

    Edge lengths are uniform over [min_units/den, 3] in 1/den steps; raise
    min_units to get trees whose edges are long relative to the candidate
    granularity.
    """
    heights: list[Fraction] = []
    parents: list[int] = []

    def build(parent: int, h: Fraction, k: int) -> None:
        idx = len(heights)
        heights.append(h)
        parents.append(parent)
        if k == 1:
            return
        arity = rng.randint(2, min(k, 3))
        parts = [1] * arity
        for _ in range(k - arity):
            parts[rng.randrange(arity)] += 1
        for part in parts:
            build(idx, h - Fraction(rng.randint(min_units, 3 * den), den), part)

    build(-1, Fraction(rng.randint(-2, 2), den), leaves)
    return MergeTree(heights, parents)


def with_degree_two_nodes(rng: random.Random, m: MergeTree, count: int = 2) -> MergeTree:
    """Subdivide random edges of a merge tree, adding single-child nodes."""
    heights = list(m.heights)
    parents = list(m.parent)
    non_root = [u for u in range(m.node_count) if u != m.root]
    for _ in range(count):
        if not non_root:
            break
        c = rng.choice(non_root)
        p = parents[c]
        lo, hi = heights[c], heights[p]
        mid = (lo + hi) / 2
        new_id = len(heights)
        heights.append(mid)
        parents.append(p)
        parents[c] = new_id
    return MergeTree(heights, parents)


def spine_merge_tree(rng: random.Random, n: int) -> MergeTree:
    """Deep unit-edge merge tree: a long spine with hanging branches."""
    heights = [Fraction(0)]
    parents = [-1]
    spine = 0
    while len(heights) < n:
        heights.append(heights[spine] - 1)
        parents.append(spine)
        spine = len(heights) - 1
        if len(heights) < n and rng.random() < 0.5:
            p = parents[spine]
            heights.append(heights[p] - rng.randint(1, 2))
            parents.append(p)
    return MergeTree(heights, parents)


def shifted(m: MergeTree, c: Fraction) -> MergeTree:
    """The same tree with every height raised by c."""
    return MergeTree([h + c for h in m.heights], m.parent)


def scaled_metric_tree(t: MetricTree, k: Fraction) -> MetricTree:
    return MetricTree(t.node_count, [(u, v, k * l) for u, v, l in t.edges])
