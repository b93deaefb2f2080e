"""Tests for candidate values, both deciders, the search, and the oracle."""

import random
from fractions import Fraction

import pytest

from ghtrees import (
    MergeTree,
    SizeLimitError,
    TreeMap,
    candidate_values,
    decide,
    decide_long,
    decide_short,
    induced_tree,
    interleaving_bruteforce,
    interleaving_distance,
    level_isomorphism,
    matching_levels,
    suppress_degree_two,
    trim,
    verify_compatible,
)
from util import random_merge_tree, shifted, with_degree_two_nodes

F = Fraction


@pytest.fixture
def three_leaf():
    return MergeTree([F(-3), F(-4), F(-5)], [-1, 0, 0])


class TestCandidates:
    def test_single_nodes(self):
        m = MergeTree([F(0)], [-1])
        assert candidate_values(m, m) == [F(0)]

    def test_hand_instance(self, three_leaf):
        lam = candidate_values(three_leaf, three_leaf)
        assert lam == [F(0), F(1, 2), F(1), F(2)]

    def test_contains_distance_of_identical_trees(self, three_leaf):
        lam = candidate_values(three_leaf, three_leaf)
        assert F(0) in lam
        assert interleaving_bruteforce(three_leaf, three_leaf) == F(0)

    def test_oracle_value_is_member(self):
        rng = random.Random(30)
        for _ in range(15):
            mf = random_merge_tree(rng, rng.randint(1, 4))
            mg = random_merge_tree(rng, rng.randint(1, 4))
            assert interleaving_bruteforce(mf, mg) in candidate_values(mf, mg)


class TestDecideLong:
    def test_identity_eps_zero(self, three_leaf):
        out = decide_long(three_leaf, three_leaf, F(0))
        assert out.yes and out.certified == 0
        assert verify_compatible(three_leaf, three_leaf, out.alpha, out.beta, F(0))

    def test_leaf_perturbation(self):
        # oracle: distance equals the perturbation delta = 1/4
        delta = F(1, 4)
        mf = MergeTree([F(-3), F(-4), F(-5)], [-1, 0, 0])
        mg = MergeTree([F(-3), F(-4), F(-5) - delta], [-1, 0, 0])
        assert interleaving_bruteforce(mf, mg) == delta
        assert not decide_long(mf, mg, delta / 2).yes
        assert decide_long(mf, mg, delta).yes

    def test_child_count_mismatch(self):
        mf = MergeTree([F(0), F(-4), F(-5)], [-1, 0, 0])
        mg = MergeTree([F(0), F(-4), F(-5), F(-6)], [-1, 0, 0, 0])
        assert not decide_long(mf, mg, F(1)).yes

    def test_short_edge_is_contract_error(self):
        mf = MergeTree([F(0), F(-1)], [-1, 0])
        with pytest.raises(ValueError):
            decide_long(mf, mf, F(1))

    def test_unsuppressed_is_contract_error(self):
        mf = MergeTree([F(0), F(-5), F(-9), F(-10)], [-1, 0, 1, 1])
        with pytest.raises(ValueError):
            decide_long(mf, mf, F(1))

    def test_exactness_against_oracle(self):
        rng = random.Random(31)
        for _ in range(20):
            mf = suppress_degree_two(random_merge_tree(rng, rng.randint(1, 4)))
            mg = suppress_degree_two(random_merge_tree(rng, rng.randint(1, 4)))
            d = interleaving_bruteforce(mf, mg)
            lengths = mf.edge_lengths() + mg.edge_lengths()
            min_len = min(lengths) if lengths else None
            for eps in candidate_values(mf, mg):
                if min_len is not None and min_len <= 2 * eps:
                    continue
                assert decide_long(mf, mg, eps).yes == (d <= eps)


class TestMatchingLevels:
    def test_single_leaves_equal_height(self):
        m = MergeTree([F(-2)], [-1])
        ml = matching_levels(m, m, F(1))
        assert ml.levels == [F(-2)]
        assert len(ml.points_f[0]) == 1 and len(ml.points_g[0]) == 1

    def test_blocked_level(self):
        # anchors 0 and -1 with eps 1: -1 is blocked since 0 lies in (-1, 1]
        mf = MergeTree([F(0), F(-5), F(-6)], [-1, 0, 0])
        mg = MergeTree([F(-1), F(-5), F(-6)], [-1, 0, 0])
        ml = matching_levels(mf, mg, F(1))
        assert F(0) in ml.levels
        assert F(-1) not in ml.levels

    def test_spread_anchors_all_levels(self):
        mf = MergeTree([F(0), F(-3), F(-6)], [-1, 0, 0])
        ml = matching_levels(mf, mf, F(1))
        assert ml.levels == [F(-6), F(-3), F(0)]


class TestInducedTreeAndIsomorphism:
    def test_identical_trimmed_trees(self, three_leaf):
        ml = matching_levels(three_leaf, three_leaf, F(1, 4))
        tf = induced_tree(three_leaf, ml, "f")
        tg = induced_tree(three_leaf, ml, "g")
        pairing = level_isomorphism(tf, tg)
        assert pairing is not None
        assert {tf.points[i] for i, _ in pairing} == set(tf.points)

    def test_two_level_hand_instance(self):
        # levels at -4 (two points) and 0 (one point): a path plus a sibling
        m = MergeTree([F(0), F(-4), F(-5)], [-1, 0, 0])
        ml = matching_levels(m, m, F(1, 2))
        t = induced_tree(m, ml, "f")
        level_counts = {}
        for li in t.level_idx:
            level_counts[li] = level_counts.get(li, 0) + 1
        top = len(ml.levels) - 1
        assert level_counts[top] == 1
        assert t.parent[t.root] == -1

    def test_mirrored_children_isomorphic(self):
        mf = MergeTree([F(0), F(-4), F(-5)], [-1, 0, 0])
        mg = MergeTree([F(0), F(-5), F(-4)], [-1, 0, 0])
        ml = matching_levels(mf, mg, F(1, 4))
        pairing = level_isomorphism(induced_tree(mf, ml, "f"), induced_tree(mg, ml, "g"))
        assert pairing is not None

    def test_count_mismatch_not_isomorphic(self):
        mf = MergeTree([F(0), F(-4), F(-4)], [-1, 0, 0])
        mg = MergeTree([F(0), F(-4), F(-4), F(-4)], [-1, 0, 0, 0])
        ml = matching_levels(mf, mg, F(1, 4))
        pairing = level_isomorphism(induced_tree(mf, ml, "f"), induced_tree(mg, ml, "g"))
        assert pairing is None


class TestDecideShort:
    def test_identical_trees(self, three_leaf):
        out = decide_short(three_leaf, three_leaf, F(1))
        assert out.yes
        assert verify_compatible(three_leaf, three_leaf, out.alpha, out.beta, out.certified)

    def test_eps_must_be_positive(self, three_leaf):
        with pytest.raises(ValueError):
            decide_short(three_leaf, three_leaf, F(0))

    def test_structural_mismatch_no(self):
        mf = MergeTree(
            [F(0), F(-10), F(-30), F(-10), F(-30), F(-1, 4)], [-1, 0, 1, 0, 3, 0]
        )
        mg = MergeTree([F(0), F(-10), F(-30), F(-1, 4)], [-1, 0, 1, 0])
        out = decide_short(mf, mg, F(1, 2))
        assert not out.yes
        assert interleaving_bruteforce(mf, mg) > F(1, 2)

    def test_vertical_shift_yes(self):
        rng = random.Random(32)
        for _ in range(8):
            m = random_merge_tree(rng, rng.randint(2, 4))
            c = F(1, 2)
            other = shifted(m, c)
            out = decide_short(m, other, c)
            assert out.yes
            assert verify_compatible(m, other, out.alpha, out.beta, out.certified)


class TestDecideDispatch:
    def test_long_path_taken(self):
        m = MergeTree([F(0), F(-5), F(-5)], [-1, 0, 0])
        out = decide(m, m, F(2))
        assert out.yes and out.branch == "long"

    def test_short_path_taken(self):
        m = MergeTree([F(0), F(-5), F(-5)], [-1, 0, 0])
        out = decide(m, m, F(3))
        assert out.yes and out.branch in ("trim", "skip", "naive")

    def test_eps_zero_long(self, three_leaf):
        out = decide(three_leaf, three_leaf, F(0))
        assert out.yes and out.branch == "long"

    def test_negative_eps_rejected(self, three_leaf):
        with pytest.raises(ValueError):
            decide(three_leaf, three_leaf, F(-1))

    def test_degree_two_inputs_handled(self):
        rng = random.Random(33)
        for _ in range(8):
            base = random_merge_tree(rng, rng.randint(1, 4))
            mf = with_degree_two_nodes(rng, base, 2)
            d = interleaving_bruteforce(mf, base)
            assert d == 0
            for eps in candidate_values(mf, base):
                out = decide(mf, base, eps)
                assert out.yes

    def test_one_sided_error(self):
        rng = random.Random(34)
        for _ in range(12):
            mf = random_merge_tree(rng, rng.randint(1, 4))
            mg = random_merge_tree(rng, rng.randint(1, 4))
            d = interleaving_bruteforce(mf, mg)
            for eps in candidate_values(mf, mg):
                out = decide(mf, mg, eps)
                if d <= eps:
                    assert out.yes
                if out.yes:
                    assert verify_compatible(mf, mg, out.alpha, out.beta, out.certified)


class TestInterleavingDistance:
    def test_identity(self, three_leaf):
        res = interleaving_distance(three_leaf, three_leaf)
        assert res.pivot == 0 and res.certified == 0

    def test_exact_on_long_perturbation(self):
        delta = F(1, 4)
        mf = MergeTree([F(0), F(-4), F(-5)], [-1, 0, 0])
        mg = MergeTree([F(0), F(-4), F(-5) - delta], [-1, 0, 0])
        assert interleaving_bruteforce(mf, mg) == delta
        res = interleaving_distance(mf, mg)
        assert res.pivot == delta
        assert res.certified == delta

    def test_brackets_oracle(self):
        rng = random.Random(35)
        for _ in range(15):
            mf = random_merge_tree(rng, rng.randint(1, 4))
            mg = random_merge_tree(rng, rng.randint(1, 4))
            d = interleaving_bruteforce(mf, mg)
            res = interleaving_distance(mf, mg)
            assert res.pivot <= d <= res.certified
            assert res.pivot in candidate_values(mf, mg)

    def test_symmetric_pivot(self):
        rng = random.Random(36)
        for _ in range(10):
            mf = random_merge_tree(rng, rng.randint(1, 4))
            mg = random_merge_tree(rng, rng.randint(1, 4))
            assert (
                interleaving_distance(mf, mg).pivot
                == interleaving_distance(mg, mf).pivot
            )


class TestVerify:
    def test_identity_maps(self, three_leaf):
        ident = TreeMap(
            three_leaf, three_leaf, [three_leaf.node_point(u) for u in range(3)]
        )
        assert verify_compatible(three_leaf, three_leaf, ident, ident, F(0))

    def test_sibling_swap_fails_roundtrip(self):
        m = MergeTree([F(0), F(-4), F(-4)], [-1, 0, 0])
        swap = TreeMap(m, m, [m.node_point(0), m.node_point(2), m.node_point(1)])
        ident = TreeMap(m, m, [m.node_point(u) for u in range(3)])
        assert not verify_compatible(m, m, swap, ident, F(0))

    def test_wrong_tree_rejected(self, three_leaf):
        other = MergeTree([F(0)], [-1])
        ident = TreeMap(other, other, [other.node_point(0)])
        with pytest.raises(ValueError):
            verify_compatible(three_leaf, three_leaf, ident, ident, F(0))


class TestOracle:
    def test_identity_zero(self):
        rng = random.Random(37)
        for _ in range(5):
            m = random_merge_tree(rng, rng.randint(1, 4))
            assert interleaving_bruteforce(m, m) == 0

    def test_single_leaves(self):
        ma = MergeTree([F(-3)], [-1])
        mb = MergeTree([F(-5)], [-1])
        assert interleaving_bruteforce(ma, mb) == 2

    def test_size_guard(self):
        rng = random.Random(38)
        m = random_merge_tree(rng, 6)
        with pytest.raises(SizeLimitError):
            interleaving_bruteforce(m, m, max_leaves=5)

    def test_trim_monotone(self):
        rng = random.Random(39)
        for _ in range(10):
            mf = random_merge_tree(rng, rng.randint(2, 4))
            mg = random_merge_tree(rng, rng.randint(2, 4))
            d = interleaving_bruteforce(mf, mg)
            for tau in (F(1, 2), F(1)):
                tf, tg = trim(mf, tau), trim(mg, tau)
                if tf.degenerate or tg.degenerate:
                    continue
                assert interleaving_bruteforce(tf, tg) <= d

    def test_matched_counts_agree_when_close(self):
        rng = random.Random(40)
        for _ in range(10):
            mf = random_merge_tree(rng, rng.randint(2, 4))
            mg = random_merge_tree(rng, rng.randint(2, 4))
            d = interleaving_bruteforce(mf, mg)
            for eps in candidate_values(mf, mg):
                if eps < d or eps <= 0:
                    continue
                ml = matching_levels(mf, mg, eps)
                for pf, pg in zip(ml.points_f, ml.points_g):
                    assert len(pf) == len(pg)
                break
