"""Tests for the metric-tree data model and its oracles."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from ghtrees import (
    Correspondence,
    MetricTree,
    SizeLimitError,
    TreeFormatError,
    correspondence_distortion,
    gh_bruteforce_vertices,
    parse_tree,
    write_tree,
)
from util import random_metric_tree


@pytest.fixture
def path_tree():
    """Path a-b-c with lengths 1, 2."""
    return parse_tree("3\n0 1 1\n1 2 2")


class TestParse:
    def test_path(self, path_tree):
        assert path_tree.node_count == 3
        assert len(path_tree.edges) == 2

    def test_single_node(self):
        t = parse_tree("1")
        assert t.node_count == 1
        assert t.leaves() == [0]

    def test_duplicate_edge(self):
        with pytest.raises(TreeFormatError):
            parse_tree("3\n0 1 1\n0 1 2")

    def test_nonpositive_length(self):
        with pytest.raises(TreeFormatError):
            parse_tree("2\n0 1 0")

    def test_disconnected(self):
        with pytest.raises(TreeFormatError):
            parse_tree("4\n0 1 1\n0 1 2\n2 3 1")

    def test_cycle(self):
        with pytest.raises(TreeFormatError):
            parse_tree("3\n0 1 1\n1 2 1\n2 0 1")

    def test_malformed_line(self):
        with pytest.raises(TreeFormatError):
            parse_tree("2\n0 1")

    def test_comments_and_rationals(self):
        t = parse_tree("# a path\n2\n0 1 1/3\n")
        assert t.edges[0][2] == Fraction(1, 3)

    def test_roundtrip(self):
        rng = random.Random(0)
        for _ in range(10):
            t = random_metric_tree(rng, rng.randint(1, 12))
            again = parse_tree(write_tree(t))
            assert write_tree(again) == write_tree(t)


class TestPathDistance:
    def test_path_endpoints(self, path_tree):
        a, c = path_tree.node_point(0), path_tree.node_point(2)
        assert path_tree.path_distance(a, c) == 3

    def test_identity(self, path_tree):
        m = path_tree.edge_point(0, Fraction(1, 2))
        assert path_tree.path_distance(m, m) == 0

    def test_edge_midpoint(self, path_tree):
        m = path_tree.edge_point(0, Fraction(1, 2))
        c = path_tree.node_point(2)
        assert path_tree.path_distance(m, c) == Fraction(5, 2)

    def test_metric_axioms_random(self):
        rng = random.Random(1)
        for _ in range(5):
            t = random_metric_tree(rng, 10)
            pts = [t.node_point(u) for u in range(t.node_count)]
            pts += [
                t.edge_point(e, t.edges[e][2] / 3)
                for e in range(min(4, len(t.edges)))
            ]
            for x, y in combinations(pts, 2):
                dxy = t.path_distance(x, y)
                assert dxy > 0
                assert dxy == t.path_distance(y, x)
            for x, y, z in combinations(pts, 3):
                assert t.path_distance(x, z) <= t.path_distance(x, y) + t.path_distance(y, z)


class TestDiameterEndpoint:
    def test_path(self, path_tree):
        assert path_tree.diameter_endpoint() == 0

    def test_star_longest_arm(self):
        # center 0; leaf 1 on the length-3 arm, leaf 2 on length-2, leaf 3 on length-1
        t = MetricTree(4, [(0, 1, Fraction(3)), (0, 2, Fraction(2)), (0, 3, Fraction(1))])
        assert t.diameter_endpoint() == 1

    def test_single_node(self):
        assert parse_tree("1").diameter_endpoint() == 0

    def test_realizes_diameter_random(self):
        rng = random.Random(2)
        for _ in range(15):
            t = random_metric_tree(rng, rng.randint(2, 50))
            s = t.diameter_endpoint()
            diam = max(
                max(t.dist_from(u)) for u in range(t.node_count)
            )
            assert max(t.dist_from(s)) == diam
            assert t.degree(s) == 1


class TestDistortion:
    def test_isometric_copies(self, path_tree):
        other = parse_tree("3\n0 1 1\n1 2 2")
        corr = Correspondence(
            ((path_tree.node_point(0), other.node_point(0)),
             (path_tree.node_point(2), other.node_point(2)))
        )
        assert correspondence_distortion(path_tree, other, corr) == 0

    def test_paths_of_different_length(self):
        t1 = parse_tree("2\n0 1 3")
        t2 = parse_tree("2\n0 1 4")
        corr = Correspondence(
            ((t1.node_point(0), t2.node_point(0)),
             (t1.node_point(1), t2.node_point(1)))
        )
        assert correspondence_distortion(t1, t2, corr) == 1

    def test_empty_rejected(self, path_tree):
        with pytest.raises(ValueError):
            correspondence_distortion(path_tree, path_tree, Correspondence(()))

    def test_swap_invariance(self):
        rng = random.Random(3)
        t1 = random_metric_tree(rng, 6)
        t2 = random_metric_tree(rng, 5)
        pairs = tuple(
            (t1.node_point(rng.randrange(6)), t2.node_point(rng.randrange(5)))
            for _ in range(8)
        )
        corr = Correspondence(pairs)
        swapped = Correspondence(tuple((y, x) for x, y in pairs))
        assert correspondence_distortion(t1, t2, corr) == correspondence_distortion(
            t2, t1, swapped
        )


class TestGhBruteforce:
    def test_identity(self):
        rng = random.Random(4)
        for _ in range(5):
            t = random_metric_tree(rng, rng.randint(1, 5))
            assert gh_bruteforce_vertices(t, t) == 0

    def test_single_edges(self):
        # frozen: full enumeration over all covering subsets of the 2x2 pairs
        t1 = parse_tree("2\n0 1 2")
        t2 = parse_tree("2\n0 1 4")
        assert gh_bruteforce_vertices(t1, t2) == 1

    def test_paths(self):
        # frozen: full enumeration over all covering subsets of the 3x3 pairs
        t1 = parse_tree("3\n0 1 1\n1 2 1")
        t2 = parse_tree("3\n0 1 1\n1 2 2")
        assert gh_bruteforce_vertices(t1, t2) == Fraction(1, 2)

    def test_size_guard(self):
        rng = random.Random(5)
        t = random_metric_tree(rng, 7)
        with pytest.raises(SizeLimitError):
            gh_bruteforce_vertices(t, t, max_size=6)
