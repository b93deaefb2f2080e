"""Interleaving distance between merge trees.

The distance is approximated by a binary search over a quadratic candidate
set, driven by a decision procedure with two regimes:

  * when every finite edge is longer than twice the probe value, an exact
    bottom-up recursion with bipartite matchings decides the probe;
  * otherwise an approximate procedure trims low-extent points, matches
    the two trees level by level and tests a label-preserving rooted-tree
    isomorphism, returning compatible maps with a certified bound.

Every YES answer carries maps that are re-verified before being returned,
so certified values are unconditional upper bounds on the distance.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .maps import TreeMap, verify_compatible
from .matching import hopcroft_karp
from .merge_tree import (
    ABOVE,
    MergePoint,
    MergeTree,
    TrimResult,
    _suppress_with_map,
    suppressed_point_to_original,
    trim_info,
)
from .metric_tree import SizeLimitError
from .rational import isqrt_ceil

# ----- candidate set --------------------------------------------------------


def candidate_values(mf: MergeTree, mg: MergeTree) -> list[Fraction]:
    """Sorted values among which the interleaving distance must lie.

    Half-differences of node heights within each tree, plus absolute
    differences of node heights across the trees. Always contains 0.
    """
    hf = sorted(set(mf.heights))
    hg = sorted(set(mg.heights))
    values = {Fraction(0)}
    for heights in (hf, hg):
        for i, a in enumerate(heights):
            for b in heights[i + 1 :]:
                values.add((b - a) / 2)
    for a in hf:
        for b in hg:
            values.add(abs(a - b))
    return sorted(values)


# ----- decision outcomes ------------------------------------------------------


@dataclass
class DecisionOutcome:
    """Result of one decision probe.

    YES outcomes always carry a map pair that passes verification at
    `certified`; `factor` is the branch guarantee certified/eps.
    """

    yes: bool
    alpha: TreeMap | None = None
    beta: TreeMap | None = None
    certified: Fraction | None = None
    branch: str = ""
    factor: Fraction | None = None


def _no() -> DecisionOutcome:
    return DecisionOutcome(False)


# ----- exact decision for long edges ------------------------------------------


def decide_long(mf: MergeTree, mg: MergeTree, eps: Fraction) -> DecisionOutcome:
    """Exact answer to "distance <= eps" when all finite edges exceed 2*eps.

    Feasibility of a node pair (u, v) is computed bottom-up: the heights
    must agree within eps, the child counts must match, and the feasible
    child pairs must admit a perfect matching. Inputs must already be free
    of single-child nodes; violations are contract errors, not NO answers.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    for name, m in (("first", mf), ("second", mg)):
        if any(len(m.children[u]) == 1 for u in range(m.node_count)):
            raise ValueError(f"{name} tree has single-child nodes; suppress them first")
        if any(length <= 2 * eps for length in m.edge_lengths()):
            raise ValueError(f"{name} tree has an edge of length <= 2*eps")

    order_f = _postorder(mf)
    order_g = _postorder(mg)
    # feasible[(u, v)] = list of matched child pairs, or absent when infeasible
    feasible: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for u in order_f:
        cu = mf.children[u]
        fu = mf.heights[u]
        for v in order_g:
            if abs(fu - mg.heights[v]) > eps:
                continue
            cv = mg.children[v]
            if len(cu) != len(cv):
                continue
            if not cu:
                feasible[(u, v)] = []
                continue
            edges = [
                (i, j)
                for i, ui in enumerate(cu)
                for j, vj in enumerate(cv)
                if (ui, vj) in feasible
            ]
            if len(edges) < len(cu):
                continue
            matched = hopcroft_karp(len(cu), len(cv), edges)
            if len(matched) == len(cu):
                feasible[(u, v)] = [(cu[i], cv[j]) for i, j in matched]

    if (mf.root, mg.root) not in feasible:
        return _no()

    pi: dict[int, int] = {}
    stack = [(mf.root, mg.root)]
    while stack:
        u, v = stack.pop()
        pi[u] = v
        stack.extend(feasible[(u, v)])
    alpha = _maps_from_node_bijection(mf, mg, pi)
    beta = _maps_from_node_bijection(mg, mf, {v: u for u, v in pi.items()})
    return DecisionOutcome(True, alpha, beta, eps, "long", Fraction(1))


def _postorder(m: MergeTree) -> list[int]:
    order = []
    stack = [m.root]
    while stack:
        u = stack.pop()
        order.append(u)
        stack.extend(m.children[u])
    order.reverse()
    return order


def _maps_from_node_bijection(src: MergeTree, dst: MergeTree, pi: dict[int, int]) -> TreeMap:
    """Height-raising map sending each node to (or just above) its partner."""
    images = []
    for u in range(src.node_count):
        v = pi[u]
        h = max(src.heights[u], dst.heights[v])
        images.append(dst.ancestor_at(dst.node_point(v), h))
    return TreeMap(src, dst, images)


# ----- matching levels and induced trees ---------------------------------------


@dataclass
class MatchingLevels:
    """Heights at which the two trimmed trees are compared point by point.

    Anchors are the heights of branching nodes, leaves and the roots of
    both trees. A level is an anchor height with no anchor in the next
    2*eps above it; every point at a level height is a matching point.
    """

    eps: Fraction
    anchors: list[Fraction]
    levels: list[Fraction]
    points_f: list[list[MergePoint]]
    points_g: list[list[MergePoint]]


def _anchor_heights(m: MergeTree) -> set[Fraction]:
    anchors = {m.heights[m.root]}
    for u in range(m.node_count):
        if len(m.children[u]) != 1:
            anchors.add(m.heights[u])
    return anchors


def matching_levels(mf_t: MergeTree, mg_t: MergeTree, eps: Fraction) -> MatchingLevels:
    eps = Fraction(eps)
    anchors = sorted(_anchor_heights(mf_t) | _anchor_heights(mg_t))
    levels = [
        h
        for i, h in enumerate(anchors)
        if i == len(anchors) - 1 or anchors[i + 1] > h + 2 * eps
    ]
    points_f = [mf_t.points_at_height(h) for h in levels]
    points_g = [mg_t.points_at_height(h) for h in levels]
    return MatchingLevels(eps, anchors, levels, points_f, points_g)


@dataclass
class InducedTree:
    """Rooted tree with one node per matching point, ancestry inherited."""

    points: list[MergePoint]
    level_idx: list[int]
    parent: list[int]
    children: list[list[int]]
    root: int


def induced_tree(m_t: MergeTree, levels: MatchingLevels, side: str) -> InducedTree:
    """Build the matching-point tree of one side ("f" or "g")."""
    per_level = levels.points_f if side == "f" else levels.points_g
    points: list[MergePoint] = []
    level_idx: list[int] = []
    index_of: dict[MergePoint, int] = {}
    for li, pts in enumerate(per_level):
        for p in pts:
            index_of[p] = len(points)
            points.append(p)
            level_idx.append(li)
    parent = [-1] * len(points)
    children: list[list[int]] = [[] for _ in points]
    top = len(levels.levels) - 1
    for i, p in enumerate(points):
        li = level_idx[i]
        if li == top:
            continue
        anc = m_t.ancestor_at(p, levels.levels[li + 1])
        pi = index_of[anc]
        parent[i] = pi
        children[pi].append(i)
    roots = [i for i in range(len(points)) if parent[i] == -1]
    if len(roots) != 1:
        raise AssertionError("induced tree must have exactly one top point")
    return InducedTree(points, level_idx, parent, children, roots[0])


def level_isomorphism(tf: InducedTree, tg: InducedTree) -> list[tuple[int, int]] | None:
    """Level-preserving isomorphism as index pairs, or None.

    Canonical codes are computed bottom-up with children codes sorted and
    the level label folded in; equal root codes yield a deterministic
    pairing (children matched in sorted-code order, ties kept in
    construction order).
    """
    interned: dict[tuple[int, tuple[int, ...]], int] = {}

    def codes(t: InducedTree) -> list[int]:
        code = [0] * len(t.points)
        order = sorted(range(len(t.points)), key=lambda i: t.level_idx[i])
        for i in order:
            key = (t.level_idx[i], tuple(sorted(code[c] for c in t.children[i])))
            code[i] = interned.setdefault(key, len(interned))
        return code

    cf = codes(tf)
    cg = codes(tg)
    if cf[tf.root] != cg[tg.root]:
        return None
    pairing: list[tuple[int, int]] = []
    stack = [(tf.root, tg.root)]
    while stack:
        i, j = stack.pop()
        pairing.append((i, j))
        left = sorted(tf.children[i], key=lambda c: cf[c])
        right = sorted(tg.children[j], key=lambda c: cg[c])
        stack.extend(zip(left, right))
    return pairing


# ----- approximate decision for short edges --------------------------------------


def decide_short(mf: MergeTree, mg: MergeTree, eps: Fraction) -> DecisionOutcome:
    """One-sided decision for "distance <= eps" tolerating short edges.

    Never answers NO when the distance is at most eps. YES answers come
    with maps certified at 4*L*eps after trimming at 2*L*eps (where
    L = ceil(sqrt(2*n*s)) + 1 and s is the longest edge over eps), or at
    4*n*eps when trimming is skipped because L >= n. Trees trimmed to
    nothing fall back to a naive pair bounded by the height span.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = mf.node_count + mg.node_count
    lengths = mf.edge_lengths() + mg.edge_lengths()
    max_len = max(lengths) if lengths else Fraction(0)
    s = max_len / eps
    level_bound = isqrt_ceil(2 * n * s) + 1

    if 2 * level_bound < 2 * n:
        tau = 2 * level_bound * eps
        tf = trim_info(mf, tau)
        tg = trim_info(mg, tau)
        if tf.degenerate or tg.degenerate:
            return _naive_outcome(mf, mg, eps)
        certified = 4 * level_bound * eps
        branch = "trim"
        factor = Fraction(4 * level_bound)
    else:
        tf = trim_info(mf, Fraction(0))
        tg = trim_info(mg, Fraction(0))
        certified = 4 * n * eps
        branch = "skip"
        factor = Fraction(4 * n)

    ml = matching_levels(tf.tree, tg.tree, eps)
    itf = induced_tree(tf.tree, ml, "f")
    itg = induced_tree(tg.tree, ml, "g")
    pairing = level_isomorphism(itf, itg)
    if pairing is None:
        return _no()
    alpha, beta = _build_short_maps(mf, mg, tf, tg, ml, itf, itg, pairing)
    if not verify_compatible(mf, mg, alpha, beta, certified):
        # Root anchors can, in contrived configurations, push a lazy gap
        # past the certified bound; the naive pair stays sound.
        return _naive_outcome(mf, mg, eps)
    return DecisionOutcome(True, alpha, beta, certified, branch, factor)


def _naive_outcome(mf: MergeTree, mg: MergeTree, eps: Fraction) -> DecisionOutcome:
    """Map everything to the height of the higher root; always compatible."""
    top = max(mf.heights[mf.root], mg.heights[mg.root])
    alpha_img = mg.ancestor_at(mg.node_point(mg.root), top)
    beta_img = mf.ancestor_at(mf.node_point(mf.root), top)
    alpha = TreeMap(mf, mg, [alpha_img] * mf.node_count)
    beta = TreeMap(mg, mf, [beta_img] * mg.node_count)
    certified = top - min(min(mf.heights), min(mg.heights))
    factor = max(Fraction(1), certified / eps)
    return DecisionOutcome(True, alpha, beta, certified, "naive", factor)


def _build_short_maps(
    mf: MergeTree,
    mg: MergeTree,
    tf: TrimResult,
    tg: TrimResult,
    ml: MatchingLevels,
    itf: InducedTree,
    itg: InducedTree,
    pairing: list[tuple[int, int]],
) -> tuple[TreeMap, TreeMap]:
    """Node images on the original trees from the matching-point pairing.

    A surviving point maps through its matching point: across at equal
    height inside anchor-free gaps wider than 2*eps, and via the lowest
    matching ancestor otherwise. Trimmed-away nodes ride along with the
    cut point above them.
    """
    bij_fg = {itf.points[i]: itg.points[j] for i, j in pairing}
    bij_gf = {itg.points[j]: itf.points[i] for i, j in pairing}
    level_set = set(ml.levels)
    anchor_set = set(ml.anchors)
    eps2 = 2 * ml.eps

    def image_in_trimmed(
        x: MergePoint, src: MergeTree, dst: MergeTree, bij: dict[MergePoint, MergePoint]
    ) -> MergePoint:
        h = x.height
        if h in level_set:
            return bij[x]
        if h not in anchor_set:
            i = bisect_left(ml.anchors, h)
            lo, hi = ml.anchors[i - 1], ml.anchors[i]
            if hi - lo > eps2:
                d = _descend_to(src, x, lo)
                return dst.ancestor_at(bij[d], h)
        j = bisect_right(ml.levels, h)
        a = src.ancestor_at(x, ml.levels[j])
        return bij[a]

    def build(src: MergeTree, dst: MergeTree, ts: TrimResult, td: TrimResult, bij) -> TreeMap:
        images = []
        for u in range(src.node_count):
            if ts.survives(u):
                x = ts.tree.node_point(ts.new_of_orig[u])
            else:
                x = ts.cut_point_of(u)
            images.append(td.to_original(image_in_trimmed(x, ts.tree, td.tree, bij)))
        return TreeMap(src, dst, images)

    return build(mf, mg, tf, tg, bij_fg), build(mg, mf, tg, tf, bij_gf)


def _descend_to(tree: MergeTree, x: MergePoint, target_h: Fraction) -> MergePoint:
    """Unique descendant of x at target_h inside an anchor-free gap."""
    cur = tree.root if x.kind == ABOVE else x.anchor
    while tree.heights[cur] > target_h:
        ch = tree.children[cur]
        if len(ch) != 1:
            raise AssertionError("descent crossed an anchor inside a nodeless gap")
        cur = ch[0]
    return tree.edge_point(cur, target_h)


# ----- dispatch -------------------------------------------------------------------


def decide(mf: MergeTree, mg: MergeTree, eps: Fraction) -> DecisionOutcome:
    """Decide "distance <= eps", exactly when the edge lengths allow it.

    Both trees are canonicalized by suppressing single-child nodes. If
    eps is 0 or every remaining finite edge is longer than 2*eps, the
    exact procedure runs and the answer is definitive; otherwise the
    approximate one runs. YES outcomes are re-verified at their certified
    value before being returned, with maps on the original trees.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    sf, kept_f = _suppress_with_map(mf)
    sg, kept_g = _suppress_with_map(mg)
    long_ok = eps == 0 or (
        all(length > 2 * eps for length in sf.edge_lengths())
        and all(length > 2 * eps for length in sg.edge_lengths())
    )
    if long_ok:
        out = decide_long(sf, sg, eps)
        if out.yes:
            alpha = _lift_suppressed_map(mf, mg, sg, kept_f, kept_g, out.alpha)
            beta = _lift_suppressed_map(mg, mf, sf, kept_g, kept_f, out.beta)
            out = DecisionOutcome(True, alpha, beta, out.certified, out.branch, out.factor)
    else:
        out = decide_short(mf, mg, eps)
    if out.yes and not verify_compatible(mf, mg, out.alpha, out.beta, out.certified):
        raise AssertionError("accepted maps failed verification")
    return out


def _lift_suppressed_map(
    src: MergeTree,
    dst: MergeTree,
    dst_supp: MergeTree,
    kept_src: list[int],
    kept_dst: list[int],
    tm: TreeMap,
) -> TreeMap:
    """Extend a map on suppressed trees to the original node sets."""
    new_of_orig = {orig: i for i, orig in enumerate(kept_src)}
    images: list[MergePoint] = []
    for u in range(src.node_count):
        c = u
        while c not in new_of_orig:
            c = src.children[c][0]
        img = suppressed_point_to_original(dst_supp, kept_dst, dst, tm.images[new_of_orig[c]])
        lift = src.heights[u] - src.heights[c]
        images.append(dst.ancestor_at(img, img.height + lift))
    return TreeMap(src, dst, images)


# ----- binary search ------------------------------------------------------------


@dataclass
class InterleavingResult:
    """Accepted pivot with its maps and unconditional certified bound."""

    pivot: Fraction
    certified: Fraction
    alpha: TreeMap
    beta: TreeMap
    c_factor: Fraction
    branch: str


def interleaving_distance(mf: MergeTree, mg: MergeTree) -> InterleavingResult:
    """Binary search over the candidate set using the decision procedure.

    Terminates with consecutive NO/YES candidates and returns the YES
    pivot together with its maps and their certified value. The search
    descends on every YES, so a NO can never appear above an already
    accepted YES; the protocol's fallback of returning a lower YES under
    a higher NO is therefore never triggered. The pivot never exceeds the
    true distance (the distance is a member of the candidate set), and
    the certified value never undershoots it.
    """
    lam = candidate_values(mf, mg)
    lo = -1
    hi = len(lam)
    best: DecisionOutcome | None = None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        out = decide(mf, mg, lam[mid])
        if out.yes:
            hi = mid
            best = out
        else:
            lo = mid
    if best is None:
        raise AssertionError("decision procedure rejected every candidate")
    assert best.alpha is not None and best.beta is not None
    return InterleavingResult(
        pivot=lam[hi],
        certified=best.certified,
        alpha=best.alpha,
        beta=best.beta,
        c_factor=max(Fraction(1), Fraction(best.factor)),
        branch=best.branch,
    )


# ----- brute-force oracle ----------------------------------------------------------


def interleaving_bruteforce(mf: MergeTree, mg: MergeTree, max_leaves: int = 5) -> Fraction:
    """Exact interleaving distance of small trees, by enumeration.

    Scans the candidate values in ascending order; for each, enumerates
    assignments of every leaf to a point of the other tree exactly eps
    higher, extends by shifting, and checks the exact compatibility
    conditions on all nodes. Returns the least feasible value.
    """
    lf = mf.leaves()
    lg = mg.leaves()
    if len(lf) > max_leaves or len(lg) > max_leaves:
        raise SizeLimitError(
            f"leaf counts {len(lf)},{len(lg)} exceed max_leaves={max_leaves}"
        )
    # the deepest leaf of each tree must find an image exactly eps higher,
    # so the gap between minimum heights lower-bounds the distance
    low_gap = abs(min(mf.heights) - min(mg.heights))
    for eps in candidate_values(mf, mg):
        if eps < low_gap:
            continue
        a_opts = _exact_leaf_assignments(mf, mg, lf, eps)
        if not a_opts:
            continue
        b_opts = _exact_leaf_assignments(mg, mf, lg, eps)
        if not b_opts:
            continue
        for a in a_opts:
            alpha_nodes = _extend_exact(mf, mg, a, eps)
            for b in b_opts:
                beta_nodes = _extend_exact(mg, mf, b, eps)
                if _exact_roundtrips_ok(mf, mg, alpha_nodes, beta_nodes, eps):
                    return eps
    raise AssertionError("no candidate admits compatible maps")


def _exact_leaf_assignments(
    src: MergeTree, dst: MergeTree, leaves: list[int], eps: Fraction
) -> list[list[MergePoint]]:
    """All leaf-image tuples extending to a well-defined exact map."""
    cands = []
    for x in leaves:
        pts = dst.points_at_height(src.heights[x] + eps)
        if not pts:
            return []
        cands.append(pts)
    lca_h = [
        [src.heights[src.lca(a, b)] for b in leaves] for a in leaves
    ]
    out: list[list[MergePoint]] = []
    assign: list[MergePoint] = []

    def backtrack(i: int) -> None:
        if i == len(leaves):
            out.append(list(assign))
            return
        for p in cands[i]:
            ok = True
            for j in range(i):
                meet = lca_h[j][i] + eps
                if dst.ancestor_at(assign[j], meet) != dst.ancestor_at(p, meet):
                    ok = False
                    break
            if ok:
                assign.append(p)
                backtrack(i + 1)
                assign.pop()

    backtrack(0)
    return out


def _extend_exact(
    src: MergeTree, dst: MergeTree, leaf_images: list[MergePoint], eps: Fraction
) -> list[MergePoint]:
    """Node images of the exact map determined by the leaf images."""
    leaves = src.leaves()
    img_of_leaf = dict(zip(leaves, leaf_images))
    images = []
    for u in range(src.node_count):
        x = src.deepest_leaf_under(u)
        images.append(dst.ancestor_at(img_of_leaf[x], src.heights[u] + eps))
    return images


def _exact_roundtrips_ok(
    mf: MergeTree,
    mg: MergeTree,
    alpha_nodes: list[MergePoint],
    beta_nodes: list[MergePoint],
    eps: Fraction,
) -> bool:
    def apply_at(tree_nodes: list[MergePoint], host: MergeTree, target: MergeTree, p: MergePoint) -> MergePoint:
        base = host.root if p.kind == ABOVE else p.anchor
        img = tree_nodes[base]
        return target.ancestor_at(img, img.height + (p.height - host.heights[base]))

    for u in range(mf.node_count):
        back = apply_at(beta_nodes, mg, mf, alpha_nodes[u])
        if back != mf.ancestor_at(mf.node_point(u), mf.heights[u] + 2 * eps):
            return False
    for v in range(mg.node_count):
        back = apply_at(alpha_nodes, mf, mg, beta_nodes[v])
        if back != mg.ancestor_at(mg.node_point(v), mg.heights[v] + 2 * eps):
            return False
    return True
