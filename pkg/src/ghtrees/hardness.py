"""Hard-instance generators for GH distance on trees.

Balanced-partition instances translate into pairs of metric trees whose
GH distance separates yes from no instances: a balanced partition yields
a finite correspondence of distortion 2 (so GH distance at most 1), while
no-instances force GH distance at least 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .metric_tree import Correspondence, MetricTree, SizeLimitError, TreePoint


@dataclass(frozen=True)
class BalPartInstance:
    """Partition a multiset of positive integers into m equal-sum blocks."""

    values: tuple[int, ...]
    m: int

    def __post_init__(self):
        if not self.values:
            raise ValueError("instance needs at least one value")
        if any(a < 1 for a in self.values):
            raise ValueError("values must be positive integers")
        if not 1 <= self.m <= len(self.values):
            raise ValueError(f"m={self.m} outside 1..{len(self.values)}")


def balpart_from_3partition(y: list[int], m: int | None = None) -> BalPartInstance:
    """Lift a 3-partition instance to balanced partition.

    Adds the total sum to every element so equal-sum blocks are forced to
    have equal cardinality (hence size 3), preserving yes/no status.
    """
    if len(y) % 3 != 0:
        raise ValueError("3-partition instances need a multiple of 3 elements")
    if m is None:
        m = len(y) // 3
    if m != len(y) // 3:
        raise ValueError("m must be one third of the element count")
    if any(a < 1 for a in y):
        raise ValueError("values must be positive integers")
    total = sum(y)
    return BalPartInstance(tuple(a + total for a in y), m)


def balpart_bruteforce(inst: BalPartInstance, max_n: int = 12) -> list[list[int]] | None:
    """Find a balanced partition as index blocks, or None; exhaustive.

    Items are placed largest-first into bins with sum pruning and
    first-empty-bin symmetry breaking.
    """
    n = len(inst.values)
    if n > max_n:
        raise SizeLimitError(f"{n} items exceed max_n={max_n}")
    total = sum(inst.values)
    if total % inst.m != 0:
        return None
    target = total // inst.m
    order = sorted(range(n), key=lambda i: -inst.values[i])
    sums = [0] * inst.m
    blocks: list[list[int]] = [[] for _ in range(inst.m)]

    def place(k: int) -> bool:
        if k == n:
            return all(s == target for s in sums)
        idx = order[k]
        val = inst.values[idx]
        for b in range(inst.m):
            if sums[b] + val <= target:
                sums[b] += val
                blocks[b].append(idx)
                if place(k + 1):
                    return True
                sums[b] -= val
                blocks[b].pop()
            if sums[b] == 0:
                break
        return False

    if not place(0):
        return None
    return [sorted(b) for b in blocks]


@dataclass(frozen=True)
class HardPair:
    """A pair of metric trees encoding a balanced-partition instance.

    Node numbering in t1: hub 0, pendant 1 (at distance rho), then one
    block per value i: star center p_i followed by its a_i arm leaves.
    t2 is numbered the same way with m centers of abar arms each.
    """

    t1: MetricTree
    t2: MetricTree
    lam: Fraction
    rho: Fraction
    instance: BalPartInstance

    @property
    def abar(self) -> int:
        return sum(self.instance.values) // self.instance.m

    def center1(self, i: int) -> int:
        """Node id of the i-th star center in t1."""
        return 2 + i + sum(self.instance.values[:i])

    def arm_leaf1(self, i: int, k: int) -> int:
        return self.center1(i) + 1 + k

    def center2(self, j: int) -> int:
        return 2 + j * (self.abar + 1)

    def arm_leaf2(self, j: int, k: int) -> int:
        return self.center2(j) + 1 + k


def build_hard_pair(
    inst: BalPartInstance,
    lam: Fraction = Fraction(7),
    rho: Fraction = Fraction(1, 2),
) -> HardPair:
    lam = Fraction(lam)
    rho = Fraction(rho)
    if lam <= 6:
        raise ValueError("lam must exceed 6")
    if not 0 < rho < lam - 6:
        raise ValueError("rho must lie strictly between 0 and lam - 6")
    total = sum(inst.values)
    if total % inst.m != 0:
        raise ValueError("sum of values must be divisible by m")
    abar = total // inst.m

    def star_tree(arm_counts: list[int], arm_len: Fraction) -> MetricTree:
        edges = [(0, 1, rho)]
        nxt = 2
        for count in arm_counts:
            center = nxt
            edges.append((0, center, Fraction(2)))
            nxt += 1
            for _ in range(count):
                edges.append((center, nxt, arm_len))
                nxt += 1
        return MetricTree(nxt, edges)

    t1 = star_tree(list(inst.values), lam)
    t2 = star_tree([abar] * inst.m, lam + 1)
    return HardPair(t1, t2, lam, rho, inst)


def yes_certificate(pair: HardPair, partition: list[list[int]]) -> Correspondence:
    """Finite correspondence of distortion at most 2 from a balanced partition.

    Hubs and pendants pair up, arm leaves are bijected block by block, and
    each star center of t1 pairs with a point one unit into one of its
    image arm edges of t2 (rather than with the center itself, whose
    center-to-center distances would be distorted by 4). Each t2 center
    pairs with the midpoint of a block representative's spoke in t1.
    """
    inst = pair.instance
    abar = pair.abar
    if len(partition) != inst.m:
        raise ValueError(f"partition has {len(partition)} blocks, expected {inst.m}")
    seen = sorted(i for block in partition for i in block)
    if seen != list(range(len(inst.values))):
        raise ValueError("partition is not a partition of the value indices")
    for block in partition:
        if sum(inst.values[i] for i in block) != abar:
            raise ValueError("partition block sums are not balanced")

    t1, t2 = pair.t1, pair.t2
    pairs: list[tuple[TreePoint, TreePoint]] = [
        (t1.node_point(0), t2.node_point(0)),
        (t1.node_point(1), t2.node_point(1)),
    ]
    edge_index = {}
    for idx, (u, v, _) in enumerate(t2.edges):
        edge_index[(u, v)] = idx
    spoke_index = {}
    for idx, (u, v, _) in enumerate(t1.edges):
        spoke_index[(u, v)] = idx

    for j, block in enumerate(partition):
        used = 0
        for i in block:
            # arm leaves of star i map to fresh arm leaves of star j
            first_arm = used
            for k in range(inst.values[i]):
                pairs.append(
                    (
                        t1.node_point(pair.arm_leaf1(i, k)),
                        t2.node_point(pair.arm_leaf2(j, used)),
                    )
                )
                used += 1
            # center p_i sits one unit into its first image arm edge
            arm_edge = edge_index[(pair.center2(j), pair.arm_leaf2(j, first_arm))]
            pairs.append((t1.node_point(pair.center1(i)), t2.edge_point(arm_edge, Fraction(1))))
        # center q_j pairs with the midpoint of the first block member's spoke
        rep = block[0]
        spoke = spoke_index[(0, pair.center1(rep))]
        pairs.append((t1.edge_point(spoke, Fraction(1)), t2.node_point(pair.center2(j))))
    return Correspondence(tuple(pairs))


def subdivide_to_unit(tree: MetricTree) -> MetricTree:
    """Replace every integer-length edge by a path of unit edges."""
    edges: list[tuple[int, int, Fraction]] = []
    nxt = tree.node_count
    for u, v, length in tree.edges:
        if length.denominator != 1:
            raise ValueError(f"edge ({u},{v}) has non-integer length {length}")
        steps = length.numerator
        prev = u
        for k in range(1, steps):
            edges.append((prev, nxt, Fraction(1)))
            prev = nxt
            nxt += 1
        edges.append((prev, v, Fraction(1)))
    return MetricTree(nxt, edges)
