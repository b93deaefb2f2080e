"""Finite representations of continuous maps between merge trees.

A `TreeMap` stores one image point per node of the source tree; the value
at any other source point follows by the shift-extension rule along the
edge (or ray) below it. Verification therefore only ever inspects node
images and extension values, which keeps it finite and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .merge_tree import ABOVE, EDGE, NODE, MergePoint, MergeTree


@dataclass
class TreeMap:
    """A height-nondecreasing map between two merge trees.

    images[u] is the target-tree point assigned to source node u. For a
    source point x on the edge above node c, the extension rule gives
    image(x) = shift(images[c], height(x) - height(c)); points above the
    source root extend from the root image the same way.
    """

    source: MergeTree
    target: MergeTree
    images: list[MergePoint]

    def image(self, u: int) -> MergePoint:
        return self.images[u]

    def apply(self, p: MergePoint) -> MergePoint:
        if p.kind == NODE:
            return self.images[p.anchor]
        if p.kind == EDGE:
            base = self.images[p.anchor]
            return self.target.ancestor_at(base, base.height + (p.height - self.source.heights[p.anchor]))
        root = self.source.root
        base = self.images[root]
        return self.target.ancestor_at(base, base.height + (p.height - self.source.heights[root]))


def identity_map(m: MergeTree) -> TreeMap:
    return TreeMap(m, m, [m.node_point(u) for u in range(m.node_count)])


def verify_report(
    mf: MergeTree,
    mg: MergeTree,
    alpha: TreeMap,
    beta: TreeMap,
    eps_prime: Fraction,
) -> dict[str, bool]:
    """Check each compatibility condition at eps_prime, per condition.

    Conditions, checked at every node of each source tree:
      heights: f(v) <= g(alpha(v)) <= f(v) + eps_prime (and symmetrically);
      ancestors: parent images are ancestors of child images, which by
        transitivity covers every ancestor pair;
      roundtrip: beta(alpha(v)) is an ancestor of v or v itself (and
        symmetrically).
    """
    if alpha.source is not mf or alpha.target is not mg:
        raise ValueError("alpha does not map the given source to the given target")
    if beta.source is not mg or beta.target is not mf:
        raise ValueError("beta does not map the given target to the given source")
    eps_prime = Fraction(eps_prime)

    def heights_ok(src: MergeTree, tm: TreeMap) -> bool:
        for u in range(src.node_count):
            raise_by = tm.images[u].height - src.heights[u]
            if raise_by < 0 or raise_by > eps_prime:
                return False
        return True

    def ancestors_ok(src: MergeTree, dst: MergeTree, tm: TreeMap) -> bool:
        for u in range(src.node_count):
            p = src.parent[u]
            if p == -1:
                continue
            if not dst.is_ancestor(tm.images[p], tm.images[u]):
                return False
        return True

    def roundtrip_ok(src: MergeTree, fwd: TreeMap, back: TreeMap) -> bool:
        for u in range(src.node_count):
            if not src.is_ancestor(back.apply(fwd.images[u]), src.node_point(u)):
                return False
        return True

    return {
        "alpha-heights": heights_ok(mf, alpha),
        "beta-heights": heights_ok(mg, beta),
        "alpha-ancestors": ancestors_ok(mf, mg, alpha),
        "beta-ancestors": ancestors_ok(mg, mf, beta),
        "roundtrip-alpha": roundtrip_ok(mf, alpha, beta),
        "roundtrip-beta": roundtrip_ok(mg, beta, alpha),
    }


def verify_compatible(
    mf: MergeTree,
    mg: MergeTree,
    alpha: TreeMap,
    beta: TreeMap,
    eps_prime: Fraction,
) -> bool:
    """True iff the map pair satisfies all relaxed conditions at eps_prime."""
    return all(verify_report(mf, mg, alpha, beta, eps_prime).values())
