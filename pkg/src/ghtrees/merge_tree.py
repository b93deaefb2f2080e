"""Merge trees: rooted trees with strictly decreasing heights toward leaves.

Every merge tree carries an implicit edge from the root extending upward to
+infinity, so each height at or above the root hosts exactly one point.
Trees are immutable after construction; edge-interior points are computed
values (`MergePoint`), never stored nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .metric_tree import MetricTree, TreeFormatError
from .rational import format_rational, parse_rational

NODE = "node"
EDGE = "edge"
ABOVE = "above"


@dataclass(frozen=True)
class MergePoint:
    """A location in a merge tree.

    kind == "node": the node `anchor`.
    kind == "edge": interior of the edge (anchor, parent(anchor)) at `height`.
    kind == "above": the point at `height` on the infinite edge above the root.

    Node-coincident locations are canonicalized to node form by the
    MergeTree constructors, so equality of MergePoints is pointwise.
    """

    kind: str
    anchor: int
    height: Fraction


class MergeTree:
    """Rooted tree with rational node heights and an implicit upward ray."""

    def __init__(self, heights: list[Fraction], parents: list[int]):
        n = len(heights)
        if n == 0:
            raise ValueError("merge tree must have at least one node")
        if len(parents) != n:
            raise ValueError("heights and parents length mismatch")
        self.heights: list[Fraction] = [Fraction(h) for h in heights]
        self.parent: list[int] = list(parents)
        roots = [u for u in range(n) if parents[u] == -1]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]
        self.children: list[list[int]] = [[] for _ in range(n)]
        for u in range(n):
            p = parents[u]
            if u == self.root:
                continue
            if not 0 <= p < n:
                raise ValueError(f"node {u} has parent {p} out of range")
            if self.heights[u] >= self.heights[p]:
                raise ValueError(
                    f"node {u} at height {self.heights[u]} not below parent {p}"
                )
            self.children[p].append(u)
        self._check_acyclic()
        self.depth: list[int] = [0] * n
        order = self._topo_order()
        for u in order:
            for c in self.children[u]:
                self.depth[c] = self.depth[u] + 1
        # min height among descendants (inclusive), for extents and trimming
        self.min_desc: list[Fraction] = list(self.heights)
        for u in reversed(order):
            for c in self.children[u]:
                if self.min_desc[c] < self.min_desc[u]:
                    self.min_desc[u] = self.min_desc[c]
        self._build_lifting()
        self._points_cache: dict[Fraction, list[MergePoint]] = {}
        # set by trim() when everything was trimmed away
        self.degenerate = False

    @property
    def node_count(self) -> int:
        return len(self.heights)

    def _check_acyclic(self) -> None:
        state = [0] * self.node_count
        for start in range(self.node_count):
            u = start
            chain = []
            while state[u] == 0:
                state[u] = 1
                chain.append(u)
                if u == self.root:
                    break
                u = self.parent[u]
                if state[u] == 1:
                    raise ValueError("parent structure contains a cycle")
            for v in chain:
                state[v] = 2

    def _topo_order(self) -> list[int]:
        order = []
        stack = [self.root]
        while stack:
            u = stack.pop()
            order.append(u)
            stack.extend(self.children[u])
        if len(order) != self.node_count:
            raise ValueError("parent structure does not reach all nodes")
        return order

    def _build_lifting(self) -> None:
        n = self.node_count
        levels = max(1, max(self.depth).bit_length())
        up = [list(self.parent)]
        for k in range(1, levels):
            prev = up[-1]
            up.append([prev[prev[u]] if prev[u] != -1 else -1 for u in range(n)])
        self._up = up

    # ----- structural queries ----------------------------------------------

    def leaves(self) -> list[int]:
        return [u for u in range(self.node_count) if not self.children[u]]

    def height(self, u: int) -> Fraction:
        return self.heights[u]

    def edge_lengths(self) -> list[Fraction]:
        """Lengths of the finite edges (parent height minus child height)."""
        return [
            self.heights[self.parent[u]] - self.heights[u]
            for u in range(self.node_count)
            if u != self.root
        ]

    def lca(self, u: int, v: int) -> int:
        if self.depth[u] < self.depth[v]:
            u, v = v, u
        diff = self.depth[u] - self.depth[v]
        k = 0
        while diff:
            if diff & 1:
                u = self._up[k][u]
            diff >>= 1
            k += 1
        if u == v:
            return u
        for k in range(len(self._up) - 1, -1, -1):
            if self._up[k][u] != self._up[k][v]:
                u = self._up[k][u]
                v = self._up[k][v]
        return self.parent[u]

    def _ancestor_node_at_or_below(self, u: int, h: Fraction) -> int:
        """Highest ancestor-or-self of node u with height <= h."""
        for k in range(len(self._up) - 1, -1, -1):
            a = self._up[k][u]
            if a != -1 and self.heights[a] <= h:
                u = a
        return u

    def deepest_leaf_under(self, u: int) -> int:
        """Some leaf descendant realizing min_desc[u]."""
        while self.children[u]:
            for c in self.children[u]:
                if self.min_desc[c] == self.min_desc[u]:
                    u = c
                    break
        return u

    # ----- points -----------------------------------------------------------

    def node_point(self, u: int) -> MergePoint:
        if not 0 <= u < self.node_count:
            raise ValueError(f"node {u} out of range")
        return MergePoint(NODE, u, self.heights[u])

    def edge_point(self, child: int, h: Fraction) -> MergePoint:
        """Point at height h on the edge (child, parent(child)); canonical."""
        if not 0 <= child < self.node_count:
            raise ValueError(f"node {child} out of range")
        if type(h) is not Fraction:
            h = Fraction(h)
        if h == self.heights[child]:
            return self.node_point(child)
        if child == self.root:
            return self.above_point(h)
        p = self.parent[child]
        if not self.heights[child] < h <= self.heights[p]:
            raise ValueError(f"height {h} not on the edge above node {child}")
        if h == self.heights[p]:
            return self.node_point(p)
        return MergePoint(EDGE, child, h)

    def above_point(self, h: Fraction) -> MergePoint:
        if type(h) is not Fraction:
            h = Fraction(h)
        root_h = self.heights[self.root]
        if h < root_h:
            raise ValueError(f"height {h} is below the root")
        if h == root_h:
            return self.node_point(self.root)
        return MergePoint(ABOVE, -1, h)

    def point_height(self, p: MergePoint) -> Fraction:
        return p.height

    def ancestor_at(self, p: MergePoint, h: Fraction) -> MergePoint:
        """The unique ancestor of p at height h >= height(p)."""
        if type(h) is not Fraction:
            h = Fraction(h)
        if h < p.height:
            raise ValueError("ancestor height below the point")
        if h >= self.heights[self.root]:
            return self.above_point(h)
        if p.kind == ABOVE:
            return self.above_point(h)
        a = self._ancestor_node_at_or_below(p.anchor, h)
        return self.edge_point(a, h)

    def shift(self, p: MergePoint, eps: Fraction) -> MergePoint:
        """Map a point to its ancestor `eps` higher (the upward shift map)."""
        if type(eps) is not Fraction:
            eps = Fraction(eps)
        if eps < 0:
            raise ValueError("shift amount must be nonnegative")
        return self.ancestor_at(p, p.height + eps)

    def is_ancestor(self, p: MergePoint, q: MergePoint) -> bool:
        """True iff p is an ancestor of q or equal to it."""
        if p.height < q.height:
            return False
        return self.ancestor_at(q, p.height) == p

    def extent(self, p: MergePoint) -> Fraction:
        """Height gap between p and its deepest descendant."""
        if p.kind == ABOVE:
            return p.height - self.min_desc[self.root]
        return p.height - self.min_desc[p.anchor]

    def points_at_height(self, h: Fraction) -> list[MergePoint]:
        """All points of the tree at height exactly h, ordered by anchor id."""
        if type(h) is not Fraction:
            h = Fraction(h)
        cached = self._points_cache.get(h)
        if cached is not None:
            return list(cached)
        root_h = self.heights[self.root]
        if h > root_h:
            pts = [self.above_point(h)]
        elif h == root_h:
            pts = [self.node_point(self.root)]
        else:
            pts = []
            for u in range(self.node_count):
                if self.heights[u] == h:
                    pts.append(self.node_point(u))
                elif (
                    u != self.root
                    and self.heights[u] < h < self.heights[self.parent[u]]
                ):
                    pts.append(MergePoint(EDGE, u, h))
            pts.sort(key=lambda p: p.anchor)
        self._points_cache[h] = pts
        return list(pts)

    # ----- derived trees ------------------------------------------------------

    def subtree(self, u: int) -> "MergeTree":
        """Descendants of u as a merge tree rooted at u, fresh upward ray."""
        if not 0 <= u < self.node_count:
            raise ValueError(f"node {u} out of range")
        keep = []
        stack = [u]
        while stack:
            w = stack.pop()
            keep.append(w)
            stack.extend(self.children[w])
        keep.sort()
        new_id = {w: i for i, w in enumerate(keep)}
        heights = [self.heights[w] for w in keep]
        parents = [-1 if w == u else new_id[self.parent[w]] for w in keep]
        return MergeTree(heights, parents)


def merge_tree_equal(a: MergeTree, b: MergeTree) -> bool:
    """Structural equality: same heights and same parent relation."""
    return a.heights == b.heights and a.parent == b.parent


# Functional aliases for the structural operations.


def shift(m: MergeTree, x: MergePoint, eps: Fraction) -> MergePoint:
    return m.shift(x, eps)


def extent(m: MergeTree, x: MergePoint) -> Fraction:
    return m.extent(x)


def points_at_height(m: MergeTree, h: Fraction) -> list[MergePoint]:
    return m.points_at_height(h)


def subtree(m: MergeTree, u: int) -> MergeTree:
    return m.subtree(u)


# ----- construction from metric trees ---------------------------------------


def build_merge_tree(tree: MetricTree, s: int) -> MergeTree:
    """Merge tree of x -> -d(s, x) over a metric tree, rooted at vertex s.

    If s is a leaf it is absorbed into the infinite upward edge and its
    unique neighbor becomes the root; otherwise s is the root at height 0.
    Degree-2 nodes are preserved.
    """
    if not 0 <= s < tree.node_count:
        raise ValueError(f"node {s} out of range")
    dist = tree.dist_from(s)
    drop_s = tree.node_count > 1 and tree.degree(s) == 1
    kept = [u for u in range(tree.node_count) if not (drop_s and u == s)]
    new_id = {u: i for i, u in enumerate(kept)}
    heights = [-dist[u] for u in kept]
    parents = [-1] * len(kept)
    # parent in the rooted orientation = neighbor closer to s
    order = sorted(kept, key=lambda u: dist[u])
    for u in order:
        if u == s:
            continue
        for v, length, _ in tree._adj[u]:
            if dist[v] + length == dist[u]:
                if drop_s and v == s:
                    parents[new_id[u]] = -1
                else:
                    parents[new_id[u]] = new_id[v]
                break
    return MergeTree(heights, parents)


# ----- degree-2 suppression --------------------------------------------------


def suppress_degree_two(m: MergeTree) -> MergeTree:
    """Splice out every node with exactly one child.

    A single-child root is spliced too (it is a subdivision point of the
    infinite ray); the new root is the highest surviving node, per the
    convention that the root is the highest point where components merge.
    """
    return _suppress_with_map(m)[0]


def _suppress_with_map(m: MergeTree) -> tuple[MergeTree, list[int]]:
    """Suppression plus the list of original ids kept (indexed by new id)."""
    kept = [u for u in range(m.node_count) if len(m.children[u]) != 1]
    new_id = {u: i for i, u in enumerate(kept)}
    heights = [m.heights[u] for u in kept]
    parents = []
    for u in kept:
        p = m.parent[u]
        while p != -1 and len(m.children[p]) == 1:
            p = m.parent[p]
        parents.append(-1 if p == -1 else new_id[p])
    return MergeTree(heights, parents), kept


def suppressed_point_to_original(
    supp: MergeTree, kept: list[int], orig: MergeTree, p: MergePoint
) -> MergePoint:
    """Reinterpret a point of a suppressed tree inside the original tree."""
    if p.kind == ABOVE:
        return orig.ancestor_at(orig.node_point(kept[supp.root]), p.height)
    base = orig.node_point(kept[p.anchor])
    if p.kind == NODE:
        return base
    return orig.ancestor_at(base, p.height)


# ----- trimming ---------------------------------------------------------------


@dataclass
class TrimResult:
    """A trimmed tree plus the bookkeeping to move points back and forth."""

    tree: MergeTree
    degenerate: bool
    tau: Fraction
    source: MergeTree
    new_of_orig: dict[int, int] = field(default_factory=dict)
    orig_of_new: dict[int, int] = field(default_factory=dict)
    cut_edge_of_new: dict[int, tuple[int, Fraction]] = field(default_factory=dict)
    cut_leaf_of_child: dict[int, int] = field(default_factory=dict)

    def survives(self, u: int) -> bool:
        return u in self.new_of_orig

    def to_original(self, p: MergePoint) -> MergePoint:
        """Reinterpret a point of the trimmed tree inside the source tree."""
        src = self.source
        if self.degenerate:
            base = src.node_point(src.deepest_leaf_under(src.root))
            return src.ancestor_at(base, p.height)
        if p.kind == ABOVE:
            return src.ancestor_at(src.node_point(self.orig_of_new[self.tree.root]), p.height)
        anchor = p.anchor
        if anchor in self.cut_edge_of_new:
            child, cut_h = self.cut_edge_of_new[anchor]
            base = src.ancestor_at(src.node_point(child), cut_h)
        else:
            base = src.node_point(self.orig_of_new[anchor])
        if p.kind == NODE:
            return base
        return src.ancestor_at(base, p.height)

    def cut_point_of(self, u: int) -> MergePoint:
        """Trimmed-tree point where the subtree containing trimmed node u was cut."""
        if self.survives(u):
            raise ValueError(f"node {u} survives the trim")
        src = self.source
        c = u
        while not self.survives(src.parent[c]):
            c = src.parent[c]
        p = src.parent[c]
        cut_h = self.tau + src.min_desc[c]
        if cut_h >= src.heights[p]:
            return self.tree.node_point(self.new_of_orig[p])
        return self.tree.node_point(self.cut_leaf_of_child[c])


def trim_info(m: MergeTree, tau: Fraction) -> TrimResult:
    """Restrict to points with extent >= tau, adding leaves at cut heights.

    If nothing survives, the result is the single point on the infinite ray
    where extent first reaches tau, flagged degenerate.
    """
    tau = Fraction(tau)
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    n = m.node_count
    surviving = [m.heights[u] - m.min_desc[u] >= tau for u in range(n)]
    if not surviving[m.root]:
        single = MergeTree([m.min_desc[m.root] + tau], [-1])
        return TrimResult(tree=single, degenerate=True, tau=tau, source=m)
    kept = [u for u in range(n) if surviving[u]]
    new_of_orig = {u: i for i, u in enumerate(kept)}
    heights = [m.heights[u] for u in kept]
    parents = [-1 if u == m.root else new_of_orig[m.parent[u]] for u in kept]
    cut_edge_of_new: dict[int, tuple[int, Fraction]] = {}
    cut_leaf_of_child: dict[int, int] = {}
    for c in range(n):
        if c == m.root or surviving[c] or not surviving[m.parent[c]]:
            continue
        p = m.parent[c]
        cut_h = tau + m.min_desc[c]
        if cut_h >= m.heights[p]:
            continue
        new_leaf = len(heights)
        heights.append(cut_h)
        parents.append(new_of_orig[p])
        cut_edge_of_new[new_leaf] = (c, cut_h)
        cut_leaf_of_child[c] = new_leaf
    tree = MergeTree(heights, parents)
    return TrimResult(
        tree=tree,
        degenerate=False,
        tau=tau,
        source=m,
        new_of_orig=new_of_orig,
        orig_of_new={i: u for u, i in new_of_orig.items()},
        cut_edge_of_new=cut_edge_of_new,
        cut_leaf_of_child=cut_leaf_of_child,
    )


def trim(m: MergeTree, tau: Fraction) -> MergeTree:
    """Public trimming operation; see `trim_info` for the annotated form."""
    result = trim_info(m, tau)
    result.tree.degenerate = result.degenerate
    return result.tree


# ----- file format -------------------------------------------------------------


def parse_merge_tree(text: str) -> MergeTree:
    """Parse the node-list format: count line, then `id height parent` lines."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TreeFormatError("empty merge-tree file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise TreeFormatError(f"bad node count line {lines[0]!r}") from exc
    if len(lines) - 1 != n:
        raise TreeFormatError(f"expected {n} node lines, got {len(lines) - 1}")
    heights: list[Fraction | None] = [None] * n
    parents = [-2] * n
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise TreeFormatError(f"bad node line {ln!r}")
        try:
            u = int(parts[0])
            h = parse_rational(parts[1])
            p = int(parts[2])
        except ValueError as exc:
            raise TreeFormatError(f"bad node line {ln!r}") from exc
        if not 0 <= u < n:
            raise TreeFormatError(f"node id {u} out of range")
        if heights[u] is not None:
            raise TreeFormatError(f"duplicate node id {u}")
        heights[u] = h
        parents[u] = p
    try:
        return MergeTree([h for h in heights if h is not None], parents)
    except ValueError as exc:
        raise TreeFormatError(str(exc)) from exc


def write_merge_tree(m: MergeTree) -> str:
    out = [str(m.node_count)]
    for u in range(m.node_count):
        out.append(f"{u} {format_rational(m.heights[u])} {m.parent[u]}")
    return "\n".join(out) + "\n"
