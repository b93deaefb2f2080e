"""Gromov-Hausdorff estimates for metric trees via merge-tree interleaving.

Rooting both trees and taking the interleaving distance of the resulting
merge trees brackets the GH distance within constant factors: half the GH
distance is a lower bound for the minimized interleaving value, and for a
diameter-endpoint root of the first tree some root of the second stays
within 14 times the GH distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .interleave import InterleavingResult, interleaving_distance
from .merge_tree import MergeTree, build_merge_tree
from .metric_tree import MetricTree

ALL_PAIRS = "all"
DIAMETER = "diameter"


@dataclass
class GhEstimate:
    """Result of the root-minimization, with a sound GH bracket.

    delta_hat is the interleaving pivot of the best root pair, certified
    the unconditional upper bound carried by its maps; the GH distance
    lies in [lower_bound, upper_bound].
    """

    delta_hat: Fraction
    certified: Fraction
    lower_bound: Fraction
    upper_bound: Fraction
    best_pair: tuple[int, int]
    mode: str
    c_factor: Fraction


def gh_bounds_from_certified(certified: Fraction, c_factor: Fraction) -> tuple[Fraction, Fraction]:
    """GH bracket from a certified interleaving bound and decider factor."""
    certified = Fraction(certified)
    c_factor = Fraction(c_factor)
    if certified < 0:
        raise ValueError("certified must be nonnegative")
    if c_factor < 1:
        raise ValueError("c_factor must be at least 1")
    return certified / (14 * c_factor), 2 * certified


def approx_gh(t1: MetricTree, t2: MetricTree, mode: str = DIAMETER) -> GhEstimate:
    """Minimize the interleaving estimate over root choices.

    DIAMETER mode fixes a diameter endpoint of the first tree and scans
    the second tree's vertices (linearly many interleaving calls);
    ALL_PAIRS scans every vertex pair. Pairs are ranked by
    (certified, pivot) lexicographically, ties broken by (u, v) order.
    """
    if mode not in (ALL_PAIRS, DIAMETER):
        raise ValueError(f"unknown mode {mode!r}")
    roots1 = [t1.diameter_endpoint()] if mode == DIAMETER else list(range(t1.node_count))
    best: InterleavingResult | None = None
    best_pair = (-1, -1)
    merged1: dict[int, MergeTree] = {}
    merged2: dict[int, MergeTree] = {}
    done = False
    for u in roots1:
        if done:
            break
        m1 = merged1.setdefault(u, build_merge_tree(t1, u))
        low_f = min(m1.heights)
        for v in range(t2.node_count):
            if best is not None:
                # the deepest leaves must land within the probe height raise,
                # so |min height gap| lower-bounds any pair's distance
                gap = abs(low_f + t2.eccentricity(v))
                if gap > best.certified:
                    continue
            m2 = merged2.setdefault(v, build_merge_tree(t2, v))
            res = interleaving_distance(m1, m2)
            if best is None or (res.certified, res.pivot) < (best.certified, best.pivot):
                best = res
                best_pair = (u, v)
            if best.certified == 0 and best.pivot == 0:
                done = True
                break
    assert best is not None
    lower, upper = gh_bounds_from_certified(best.certified, best.c_factor)
    return GhEstimate(
        delta_hat=best.pivot,
        certified=best.certified,
        lower_bound=lower,
        upper_bound=upper,
        best_pair=best_pair,
        mode=mode,
        c_factor=best.c_factor,
    )
