"""Weighted unrooted trees as geodesic metric spaces.

A metric tree is a connected acyclic graph with strictly positive rational
edge lengths; every edge is isometric to an interval, so points in edge
interiors are first-class citizens (`TreePoint`). Distances are exact
Fractions throughout.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .rational import format_rational, parse_rational


class TreeFormatError(ValueError):
    """Raised for malformed tree files."""


class SizeLimitError(ValueError):
    """Raised when a brute-force oracle is asked to exceed its size guard."""


@dataclass(frozen=True)
class TreePoint:
    """A point of the geometric realization: a node, or an edge interior.

    Node-coincident points are canonicalized to node form, so equality of
    TreePoints is equality of points.
    """

    node: int = -1
    edge: int = -1
    offset: Fraction = Fraction(0)

    @property
    def is_node(self) -> bool:
        return self.node >= 0


class MetricTree:
    """Immutable weighted tree on nodes 0..n-1 with geodesic distances."""

    def __init__(
        self,
        node_count: int,
        edges: list[tuple[int, int, Fraction]],
        labels: list[str] | None = None,
    ):
        if node_count <= 0:
            raise ValueError("tree must have at least one node")
        if len(edges) != node_count - 1:
            raise ValueError(
                f"{node_count} nodes need {node_count - 1} edges, got {len(edges)}"
            )
        self.node_count = node_count
        self.edges: list[tuple[int, int, Fraction]] = []
        self.labels = labels
        self._adj: list[list[tuple[int, Fraction, int]]] = [[] for _ in range(node_count)]
        seen_pairs: set[tuple[int, int]] = set()
        for idx, (u, v, length) in enumerate(edges):
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            length = Fraction(length)
            if length <= 0:
                raise ValueError(f"edge ({u},{v}) has non-positive length {length}")
            key = (min(u, v), max(u, v))
            if key in seen_pairs:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen_pairs.add(key)
            self.edges.append((u, v, length))
            self._adj[u].append((v, length, idx))
            self._adj[v].append((u, length, idx))
        self._check_connected()
        self._dist_cache: dict[int, list[Fraction]] = {}

    def _check_connected(self) -> None:
        seen = [False] * self.node_count
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for v, _, _ in self._adj[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        if count != self.node_count:
            raise ValueError("edge set is disconnected or cyclic")

    # ----- points ---------------------------------------------------------

    def node_point(self, u: int) -> TreePoint:
        if not 0 <= u < self.node_count:
            raise ValueError(f"node {u} out of range")
        return TreePoint(node=u)

    def edge_point(self, edge: int, offset: Fraction) -> TreePoint:
        """Point at `offset` from endpoint u along edge (u, v); canonical."""
        if not 0 <= edge < len(self.edges):
            raise ValueError(f"edge {edge} out of range")
        u, v, length = self.edges[edge]
        offset = Fraction(offset)
        if offset < 0 or offset > length:
            raise ValueError(f"offset {offset} outside [0, {length}]")
        if offset == 0:
            return TreePoint(node=u)
        if offset == length:
            return TreePoint(node=v)
        return TreePoint(edge=edge, offset=offset)

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def leaves(self) -> list[int]:
        if self.node_count == 1:
            return [0]
        return [u for u in range(self.node_count) if len(self._adj[u]) == 1]

    # ----- distances ------------------------------------------------------

    def dist_from(self, s: int) -> list[Fraction]:
        """Distances from node s to every node (cached per source)."""
        cached = self._dist_cache.get(s)
        if cached is not None:
            return cached
        dist: list[Fraction | None] = [None] * self.node_count
        dist[s] = Fraction(0)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, length, _ in self._adj[u]:
                if dist[v] is None:
                    dist[v] = dist[u] + length
                    queue.append(v)
        out = [d if d is not None else Fraction(0) for d in dist]
        self._dist_cache[s] = out
        return out

    def _point_legs(self, p: TreePoint) -> list[tuple[int, Fraction]]:
        """(node, extra distance) pairs through which paths leave the point."""
        if p.is_node:
            return [(p.node, Fraction(0))]
        u, v, length = self.edges[p.edge]
        return [(u, p.offset), (v, length - p.offset)]

    def path_distance(self, x: TreePoint, y: TreePoint) -> Fraction:
        """Length of the unique path between two points of the tree."""
        self._validate_point(x)
        self._validate_point(y)
        if x == y:
            return Fraction(0)
        if not x.is_node and not y.is_node and x.edge == y.edge:
            return abs(x.offset - y.offset)
        best: Fraction | None = None
        for a, off_a in self._point_legs(x):
            dist_a = self.dist_from(a)
            for b, off_b in self._point_legs(y):
                d = off_a + dist_a[b] + off_b
                if best is None or d < best:
                    best = d
        assert best is not None
        return best

    def _validate_point(self, p: TreePoint) -> None:
        if p.is_node:
            if not 0 <= p.node < self.node_count:
                raise ValueError(f"point references node {p.node} out of range")
        else:
            if not 0 <= p.edge < len(self.edges):
                raise ValueError(f"point references edge {p.edge} out of range")
            if not 0 < p.offset < self.edges[p.edge][2]:
                raise ValueError("edge point offset outside the open edge interval")

    def eccentricity(self, u: int) -> Fraction:
        return max(self.dist_from(u))

    def diameter_endpoint(self) -> int:
        """A leaf realizing the diameter; deterministic via smallest node id.

        Two sweeps: the farthest node from node 0, then the farthest node
        from it; both are diameter endpoints, the smaller id is returned.
        """
        if self.node_count == 1:
            return 0
        first = self._farthest_from(0)
        second = self._farthest_from(first)
        return min(first, second)

    def _farthest_from(self, s: int) -> int:
        dist = self.dist_from(s)
        best = max(dist)
        return min(u for u in range(self.node_count) if dist[u] == best)


def path_distance(tree: MetricTree, x: TreePoint, y: TreePoint) -> Fraction:
    return tree.path_distance(x, y)


def diameter_endpoint(tree: MetricTree) -> int:
    return tree.diameter_endpoint()


# ----- correspondences ----------------------------------------------------


@dataclass(frozen=True)
class Correspondence:
    """A finite relation between points of two metric trees."""

    pairs: tuple[tuple[TreePoint, TreePoint], ...]

    def __len__(self) -> int:
        return len(self.pairs)


def correspondence_distortion(t1: MetricTree, t2: MetricTree, corr: Correspondence) -> Fraction:
    """max over pairs (x,y),(x',y') of |d1(x,x') - d2(y,y')|."""
    if len(corr) == 0:
        raise ValueError("correspondence is empty")
    pairs = corr.pairs
    worst = Fraction(0)
    for i in range(len(pairs)):
        x, y = pairs[i]
        for j in range(i, len(pairs)):
            xp, yp = pairs[j]
            gap = abs(t1.path_distance(x, xp) - t2.path_distance(y, yp))
            if gap > worst:
                worst = gap
    return worst


def gh_bruteforce_vertices(t1: MetricTree, t2: MetricTree, max_size: int = 6) -> Fraction:
    """Exact GH distance of the two vertex metric spaces, by enumeration.

    Minimizes distortion over correspondences between the vertex sets. Any
    correspondence contains a sub-correspondence formed by one map in each
    direction, so the search runs over map pairs with branch-and-bound.

    Caveat: this is the GH distance of the finite vertex spaces. It can
    differ from the GH distance of the full trees by at most the longest
    edge length, since every tree point is within half the longest edge of
    a vertex. Callers must account for that slack.
    """
    n1, n2 = t1.node_count, t2.node_count
    if n1 > max_size or n2 > max_size:
        raise SizeLimitError(f"vertex counts {n1},{n2} exceed max_size={max_size}")
    d1 = [t1.dist_from(u) for u in range(n1)]
    d2 = [t2.dist_from(u) for u in range(n2)]

    best = max(max(row) for row in d1) + max(max(row) for row in d2)

    def search(assign: list[int], side2: bool) -> None:
        nonlocal best
        i = len(assign)
        total = (n1 + n2) if side2 else n1
        if i == n1 and not side2:
            search(assign, True)
            return
        if side2 and i == total:
            dis = _assignment_distortion(assign, d1, d2, n1)
            if dis < best:
                best = dis
            return
        choices = range(n2) if not side2 else range(n1)
        for c in choices:
            assign.append(c)
            if _partial_ok(assign, d1, d2, n1, best):
                search(assign, side2)
            assign.pop()

    search([], False)
    return best / 2


def _pair_spaces(assign: list[int], n1: int) -> list[tuple[int, int]]:
    pairs = [(a, assign[a]) for a in range(min(len(assign), n1))]
    for k in range(n1, len(assign)):
        pairs.append((assign[k], k - n1))
    return pairs


def _partial_ok(assign, d1, d2, n1, bound) -> bool:
    pairs = _pair_spaces(assign, n1)
    x, y = pairs[-1]
    for xp, yp in pairs[:-1]:
        if abs(d1[x][xp] - d2[y][yp]) >= bound:
            return False
    return True


def _assignment_distortion(assign, d1, d2, n1) -> Fraction:
    pairs = _pair_spaces(assign, n1)
    worst = Fraction(0)
    for (x, y), (xp, yp) in itertools.combinations(pairs, 2):
        gap = abs(d1[x][xp] - d2[y][yp])
        if gap > worst:
            worst = gap
    return worst


# ----- file format --------------------------------------------------------


def parse_tree(text: str) -> MetricTree:
    """Parse the edge-list format: node count line, then `u v length` lines.

    Lengths may be decimals or `p/q` rationals. Lines starting with `#`
    are comments; blank lines are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TreeFormatError("empty tree file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise TreeFormatError(f"bad node count line {lines[0]!r}") from exc
    edges: list[tuple[int, int, Fraction]] = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise TreeFormatError(f"bad edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            length = parse_rational(parts[2])
        except ValueError as exc:
            raise TreeFormatError(f"bad edge line {ln!r}") from exc
        edges.append((u, v, length))
    try:
        return MetricTree(n, edges)
    except ValueError as exc:
        raise TreeFormatError(str(exc)) from exc


def write_tree(tree: MetricTree) -> str:
    """Serialize deterministically: edges sorted by (u, v), lengths as p/q."""
    out = [str(tree.node_count)]
    canon = sorted((min(u, v), max(u, v), length) for u, v, length in tree.edges)
    for u, v, length in canon:
        out.append(f"{u} {v} {format_rational(length)}")
    return "\n".join(out) + "\n"
