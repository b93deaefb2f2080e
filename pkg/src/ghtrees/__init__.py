"""Approximate Gromov-Hausdorff distance for metric trees.

The library models metric trees and merge trees with exact rational
arithmetic, computes interleaving distances between merge trees with a
certified approximate decision procedure, reduces GH estimation to the
interleaving distance, and generates hard instance pairs from balanced
partition problems.
"""

from .gh import ALL_PAIRS, DIAMETER, GhEstimate, approx_gh, gh_bounds_from_certified
from .hardness import (
    BalPartInstance,
    HardPair,
    balpart_bruteforce,
    balpart_from_3partition,
    build_hard_pair,
    subdivide_to_unit,
    yes_certificate,
)
from .interleave import (
    DecisionOutcome,
    InterleavingResult,
    candidate_values,
    decide,
    decide_long,
    decide_short,
    induced_tree,
    interleaving_bruteforce,
    interleaving_distance,
    level_isomorphism,
    matching_levels,
)
from .maps import TreeMap, verify_compatible, verify_report
from .matching import hopcroft_karp
from .merge_tree import (
    MergePoint,
    MergeTree,
    build_merge_tree,
    extent,
    merge_tree_equal,
    parse_merge_tree,
    points_at_height,
    shift,
    subtree,
    suppress_degree_two,
    trim,
    write_merge_tree,
)
from .metric_tree import (
    Correspondence,
    MetricTree,
    SizeLimitError,
    TreeFormatError,
    TreePoint,
    correspondence_distortion,
    gh_bruteforce_vertices,
    parse_tree,
    path_distance,
    write_tree,
)

__all__ = [
    "ALL_PAIRS",
    "DIAMETER",
    "BalPartInstance",
    "Correspondence",
    "DecisionOutcome",
    "GhEstimate",
    "HardPair",
    "InterleavingResult",
    "MergePoint",
    "MergeTree",
    "MetricTree",
    "SizeLimitError",
    "TreeFormatError",
    "TreeMap",
    "TreePoint",
    "approx_gh",
    "balpart_bruteforce",
    "balpart_from_3partition",
    "build_hard_pair",
    "build_merge_tree",
    "candidate_values",
    "correspondence_distortion",
    "decide",
    "decide_long",
    "decide_short",
    "extent",
    "path_distance",
    "gh_bounds_from_certified",
    "gh_bruteforce_vertices",
    "hopcroft_karp",
    "induced_tree",
    "interleaving_bruteforce",
    "interleaving_distance",
    "level_isomorphism",
    "matching_levels",
    "merge_tree_equal",
    "parse_merge_tree",
    "parse_tree",
    "points_at_height",
    "shift",
    "subtree",
    "subdivide_to_unit",
    "suppress_degree_two",
    "trim",
    "verify_compatible",
    "verify_report",
    "write_merge_tree",
    "write_tree",
    "yes_certificate",
]
