"""Command-line interface.

Exit codes: 0 on success, 1 on validation errors, 2 when a brute-force
size guard is exceeded. All numeric output is exact `p/q` by default;
`--decimal K` switches to fixed-point rendering with K digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .gh import approx_gh
from .hardness import BalPartInstance, balpart_bruteforce, build_hard_pair
from .interleave import (
    candidate_values,
    decide,
    interleaving_bruteforce,
    interleaving_distance,
)
from .maps import TreeMap, verify_report
from .merge_tree import (
    ABOVE,
    EDGE,
    MergePoint,
    MergeTree,
    build_merge_tree,
    parse_merge_tree,
    write_merge_tree,
)
from .metric_tree import SizeLimitError, gh_bruteforce_vertices, parse_tree, write_tree
from .rational import format_decimal, format_rational, parse_rational


def _fmt(value: Fraction, decimal: int | None) -> str:
    if decimal is None:
        return format_rational(value)
    return format_decimal(value, decimal)


def _load_metric(path: str):
    return parse_tree(Path(path).read_text())


def _load_merge(path: str) -> MergeTree:
    return parse_merge_tree(Path(path).read_text())


def _point_repr(p: MergePoint, decimal: int | None) -> str:
    if p.kind == ABOVE:
        return f"above {_fmt(p.height, decimal)}"
    if p.kind == EDGE:
        return f"edge {p.anchor} {_fmt(p.height, decimal)}"
    return f"node {p.anchor}"


def _print_maps(alpha: TreeMap, beta: TreeMap, decimal: int | None) -> None:
    for name, tm in (("alpha", alpha), ("beta", beta)):
        for u, img in enumerate(tm.images):
            print(f"{name} {u} {_point_repr(img, decimal)}")


def _parse_maps(text: str, mf: MergeTree, mg: MergeTree) -> tuple[TreeMap, TreeMap]:
    imgs: dict[str, dict[int, MergePoint]] = {"alpha": {}, "beta": {}}
    trees = {"alpha": mg, "beta": mf}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] not in ("alpha", "beta"):
            raise ValueError(f"bad map line {line!r}")
        which = parts[0]
        tree = trees[which]
        try:
            src = int(parts[1])
            kind = parts[2]
            if kind == "node":
                point = tree.node_point(int(parts[3]))
            elif kind == "edge":
                point = tree.edge_point(int(parts[3]), parse_rational(parts[4]))
            elif kind == "above":
                point = tree.above_point(parse_rational(parts[3]))
            else:
                raise ValueError(f"unknown point kind {kind!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad map line {line!r}: {exc}") from exc
        imgs[which][src] = point
    for which, src_tree in (("alpha", mf), ("beta", mg)):
        missing = [u for u in range(src_tree.node_count) if u not in imgs[which]]
        if missing:
            raise ValueError(f"{which} lacks images for nodes {missing}")
    alpha = TreeMap(mf, mg, [imgs["alpha"][u] for u in range(mf.node_count)])
    beta = TreeMap(mg, mf, [imgs["beta"][v] for v in range(mg.node_count)])
    return alpha, beta


def _cmd_gh(args) -> int:
    t1 = _load_metric(args.tree1)
    t2 = _load_metric(args.tree2)
    est = approx_gh(t1, t2, mode=args.mode)
    values = {
        "delta_hat": _fmt(est.delta_hat, args.decimal),
        "certified": _fmt(est.certified, args.decimal),
        "lower_bound": _fmt(est.lower_bound, args.decimal),
        "upper_bound": _fmt(est.upper_bound, args.decimal),
        "best_pair": list(est.best_pair),
        "c_factor": _fmt(est.c_factor, args.decimal),
        "mode": est.mode,
    }
    if args.json:
        print(json.dumps(values))
    else:
        print(f"delta_hat {values['delta_hat']}")
        print(f"certified {values['certified']}")
        print(f"bracket [{values['lower_bound']}, {values['upper_bound']}]")
        print(f"best_pair {est.best_pair[0]} {est.best_pair[1]}")
        print(f"c_factor {values['c_factor']}")
        print(f"mode {est.mode}")
    return 0


def _cmd_interleave(args) -> int:
    mf = _load_merge(args.tree1)
    mg = _load_merge(args.tree2)
    res = interleaving_distance(mf, mg)
    print(f"pivot {_fmt(res.pivot, args.decimal)}")
    print(f"certified {_fmt(res.certified, args.decimal)}")
    print(f"c_factor {_fmt(res.c_factor, args.decimal)}")
    print(f"branch {res.branch}")
    _print_maps(res.alpha, res.beta, args.decimal)
    return 0


def _cmd_decide(args) -> int:
    mf = _load_merge(args.tree1)
    mg = _load_merge(args.tree2)
    eps = parse_rational(args.eps)
    out = decide(mf, mg, eps)
    if out.yes:
        print("YES")
        print(f"certified {_fmt(out.certified, args.decimal)}")
    else:
        print("NO")
    return 0


def _cmd_candidates(args) -> int:
    mf = _load_merge(args.tree1)
    mg = _load_merge(args.tree2)
    for value in candidate_values(mf, mg):
        print(_fmt(value, args.decimal))
    return 0


def _cmd_merge_tree(args) -> int:
    tree = _load_metric(args.tree)
    merged = build_merge_tree(tree, args.root)
    sys.stdout.write(write_merge_tree(merged))
    return 0


def _cmd_gen_hard(args) -> int:
    values = tuple(int(part) for part in args.x.split(","))
    inst = BalPartInstance(values, args.m)
    lam = parse_rational(args.lam)
    rho = parse_rational(args.rho)
    pair = build_hard_pair(inst, lam, rho)
    prefix = Path(args.out_prefix)
    Path(f"{prefix}.t1.tree").write_text(write_tree(pair.t1))
    Path(f"{prefix}.t2.tree").write_text(write_tree(pair.t2))
    label = "unknown"
    partition = None
    if len(values) <= 12:
        partition = balpart_bruteforce(inst)
        label = "yes" if partition is not None else "no"
    meta = [
        f"x: {','.join(str(a) for a in values)}",
        f"m: {inst.m}",
        f"lambda: {format_rational(lam)}",
        f"rho: {format_rational(rho)}",
        f"label: {label}",
    ]
    if partition is not None:
        meta.append("partition: " + "|".join(",".join(map(str, b)) for b in partition))
    Path(f"{prefix}.meta").write_text("\n".join(meta) + "\n")
    print(f"wrote {prefix}.t1.tree {prefix}.t2.tree {prefix}.meta")
    return 0


def _cmd_verify(args) -> int:
    mf = _load_merge(args.tree1)
    mg = _load_merge(args.tree2)
    eps = parse_rational(args.eps)
    alpha, beta = _parse_maps(Path(args.maps).read_text(), mf, mg)
    report = verify_report(mf, mg, alpha, beta, eps)
    for name, ok in report.items():
        print(f"{name} {'PASS' if ok else 'FAIL'}")
    print(f"overall {'PASS' if all(report.values()) else 'FAIL'}")
    return 0


def _cmd_oracle(args) -> int:
    if args.kind == "gh":
        t1 = _load_metric(args.tree1)
        t2 = _load_metric(args.tree2)
        value = gh_bruteforce_vertices(t1, t2, max_size=args.max_size)
        print(f"gh_vertices {_fmt(value, args.decimal)}")
    else:
        mf = _load_merge(args.tree1)
        mg = _load_merge(args.tree2)
        value = interleaving_bruteforce(mf, mg, max_leaves=args.max_leaves)
        print(f"interleaving {_fmt(value, args.decimal)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghtrees",
        description="Approximate Gromov-Hausdorff distance for metric trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_decimal(p):
        p.add_argument("--decimal", type=int, default=None, metavar="K",
                       help="render numbers with K decimal digits instead of p/q")

    p = sub.add_parser("gh", help="GH bracket for two metric trees")
    p.add_argument("tree1")
    p.add_argument("tree2")
    p.add_argument("--mode", choices=["all", "diameter"], default="diameter")
    p.add_argument("--json", action="store_true")
    add_decimal(p)
    p.set_defaults(func=_cmd_gh)

    p = sub.add_parser("interleave", help="interleaving distance of two merge trees")
    p.add_argument("tree1")
    p.add_argument("tree2")
    add_decimal(p)
    p.set_defaults(func=_cmd_interleave)

    p = sub.add_parser("decide", help="decide distance <= eps for merge trees")
    p.add_argument("tree1")
    p.add_argument("tree2")
    p.add_argument("--eps", required=True)
    add_decimal(p)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("candidates", help="candidate distance values")
    p.add_argument("tree1")
    p.add_argument("tree2")
    add_decimal(p)
    p.set_defaults(func=_cmd_candidates)

    p = sub.add_parser("merge-tree", help="merge tree of a metric tree at a root")
    p.add_argument("tree")
    p.add_argument("--root", type=int, required=True)
    p.set_defaults(func=_cmd_merge_tree)

    p = sub.add_parser("gen-hard", help="generate a hard metric-tree pair")
    p.add_argument("--x", required=True, help="comma-separated positive integers")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default="7")
    p.add_argument("--rho", default="1/2")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=_cmd_gen_hard)

    p = sub.add_parser("verify", help="verify a map pair at a tolerance")
    p.add_argument("tree1")
    p.add_argument("tree2")
    p.add_argument("maps")
    p.add_argument("--eps", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="brute-force reference values (size-guarded)")
    oracle_sub = p.add_subparsers(dest="kind", required=True)
    po = oracle_sub.add_parser("gh")
    po.add_argument("tree1")
    po.add_argument("tree2")
    po.add_argument("--max-size", type=int, default=6)
    add_decimal(po)
    po.set_defaults(func=_cmd_oracle, kind="gh")
    po = oracle_sub.add_parser("interleave")
    po.add_argument("tree1")
    po.add_argument("tree2")
    po.add_argument("--max-leaves", type=int, default=5)
    add_decimal(po)
    po.set_defaults(func=_cmd_oracle, kind="interleave")

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    entry()
