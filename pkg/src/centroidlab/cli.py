"""Command-line front end.

Subcommands: sample, exact, limit, simulate, compare, oracle, export-dot.
The CLI is a thin adapter over the library: it parses and validates flags,
calls one library function, and formats the result.  Usage errors exit 2,
domain/runtime errors exit 1, success exits 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import exact, limit, montecarlo, oracle, treegen
from .analysis import find_centroids
from .families import FamilyParams, make_family
from .rng import RngStream

__all__ = ["CliInvocation", "parse_args", "execute", "main"]

_ENV_SEED = "CENTROIDLAB_SEED"


@dataclass
class CliInvocation:
    subcommand: str
    args: argparse.Namespace
    family: FamilyParams | None


def _add_family_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument(
        "--family",
        choices=["recursive", "plane", "dary", "general"],
        required=required,
        help="tree family (dary needs --d, general needs --alpha)",
    )
    p.add_argument("--d", type=int, default=None, help="arity for --family dary")
    p.add_argument(
        "--alpha", type=float, default=None, help="alpha for --family general"
    )


def _resolve_family(
    parser: argparse.ArgumentParser, args: argparse.Namespace, allow_alpha_only=False
) -> FamilyParams | None:
    fam = getattr(args, "family", None)
    if fam is None:
        if allow_alpha_only and args.alpha is not None:
            fam = "general"
        else:
            return None
    if fam in ("recursive", "plane", "dary") and args.alpha is not None:
        parser.error(f"--alpha contradicts --family {fam} (alpha is fixed)")
    if fam != "dary" and args.d is not None:
        parser.error("--d is only meaningful with --family dary")
    try:
        return make_family(fam, alpha=args.alpha, d=args.d)
    except ValueError as exc:
        parser.error(str(exc))


def _default_seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(os.environ.get(_ENV_SEED, "0"))


def _quantity_group(p: argparse.ArgumentParser, flags: dict[str, dict]) -> None:
    group = p.add_argument_group("quantity (exactly one)")
    for flag, kwargs in flags.items():
        group.add_argument(flag, **kwargs)


_EXACT_QUANTITIES = ["path_prob", "depth_ge", "parent_prob", "subtree_count",
                     "two_centroid", "subtree_prob", "moon_depth", "moon_label",
                     "moon_branch"]
_LIMIT_QUANTITIES = ["path_prob", "depth_ccdf", "depth_pmf", "depth_mean",
                     "depth_var", "depth_moment", "label_pmf", "label_mean",
                     "label_var", "label_moment", "not_centroid",
                     "subtree_density", "subtree_cdf", "point_mass",
                     "subtree_moment", "gf"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centroidlab",
        description="Centroid statistics of random very simple increasing trees.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sample", help="sample trees and print parent arrays")
    _add_family_flags(p)
    p.add_argument("-n", type=int, required=True, help="tree size")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--count", type=int, default=1, help="number of trees")
    p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("exact", help="evaluate an exact finite-n formula")
    _add_family_flags(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=0.5)
    _quantity_group(p, {
        "--path-prob": dict(type=int, metavar="K", help="P(node K on the sigma-path)"),
        "--depth-ge": dict(type=int, metavar="H", help="P(centroid depth >= H)"),
        "--parent-prob": dict(type=int, nargs=2, metavar=("K", "J"),
                              help="P(parent of node K+J is K)"),
        "--subtree-count": dict(type=int, metavar="M",
                                help="expected number of size-M subtrees"),
        "--two-centroid": dict(action="store_true",
                               help="probability of a twin centroid pair"),
        "--subtree-prob": dict(type=int, metavar="M",
                               help="P(centroid subtree has M nodes)"),
        "--moon-depth": dict(action="store_true",
                             help="Moon's mean centroid depth (recursive)"),
        "--moon-label": dict(action="store_true",
                             help="Moon's mean centroid label (recursive)"),
        "--moon-branch": dict(type=int, metavar="B",
                              help="Moon's ancestral-branch mass at B (recursive)"),
    })

    p = sub.add_parser("limit", help="evaluate a limit-law quantity")
    _add_family_flags(p, required=False)
    _quantity_group(p, {
        "--path-prob": dict(type=int, metavar="K"),
        "--depth-ccdf": dict(type=int, metavar="H"),
        "--depth-pmf": dict(type=int, metavar="H"),
        "--depth-mean": dict(action="store_true"),
        "--depth-var": dict(action="store_true"),
        "--depth-moment": dict(type=int, metavar="M",
                               help="M-th falling factorial moment of the depth"),
        "--label-pmf": dict(type=int, metavar="K"),
        "--label-mean": dict(action="store_true"),
        "--label-var": dict(action="store_true"),
        "--label-moment": dict(type=int, metavar="M"),
        "--not-centroid": dict(type=float, metavar="THETA"),
        "--subtree-density": dict(type=float, metavar="THETA"),
        "--subtree-cdf": dict(type=float, metavar="THETA"),
        "--point-mass": dict(action="store_true"),
        "--subtree-moment": dict(type=int, metavar="R"),
        "--gf": dict(type=float, metavar="V",
                     help="depth generating functions C(V) and A(V)"),
    })

    p = sub.add_parser("simulate", help="Monte Carlo experiment")
    _add_family_flags(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--collect", action="append", choices=list(montecarlo.COLLECTORS),
                   default=None, help="collector (repeatable; default all)")
    p.add_argument("--bins", type=int, default=25)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.add_argument("--plot-script", default=None,
                   help="also write a gnuplot script (needs --format csv and --out)")

    p = sub.add_parser("compare", help="empirical vs reference distribution")
    _add_family_flags(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--collect", choices=["depth", "label", "subtree_fraction"],
                   required=True)
    p.add_argument("--against", choices=["exact", "asymptotic"],
                   default="asymptotic")
    p.add_argument("--bins", type=int, default=25)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("oracle", help="enumeration-equivalence suite (n <= 8)")
    _add_family_flags(p)
    p.add_argument("-n", type=int, default=8, help="largest size to verify")

    p = sub.add_parser("export-dot", help="sample one tree and write DOT")
    _add_family_flags(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    return parser


def parse_args(argv: list[str]) -> CliInvocation:
    parser = _build_parser()
    args = parser.parse_args(argv)
    family = _resolve_family(parser, args, allow_alpha_only=args.subcommand == "limit")

    if args.subcommand in ("exact", "limit"):
        names = _EXACT_QUANTITIES if args.subcommand == "exact" else _LIMIT_QUANTITIES
        # identity checks: 0 is a legitimate value for e.g. --depth-ge
        chosen = [
            name for name in names
            if getattr(args, name) is not None and getattr(args, name) is not False
        ]
        if len(chosen) != 1:
            parser.error(
                f"{args.subcommand} needs exactly one quantity flag, got {chosen or 'none'}"
            )
        args.quantity = chosen[0]
        if args.subcommand == "limit" and family is None:
            parser.error("limit needs --family or --alpha")
        if args.subcommand == "exact" and not 0.5 <= args.sigma < 1.0:
            parser.error("--sigma must lie in [0.5, 1)")

    if args.subcommand == "oracle" and not 1 <= args.n <= 8:
        parser.error("oracle supports -n between 1 and 8")
    if args.subcommand == "simulate" and args.plot_script is not None:
        if args.format != "csv" or args.out is None:
            parser.error("--plot-script requires --format csv and --out")
    for int_flag in ("n", "trials", "count"):
        value = getattr(args, int_flag, None)
        if value is not None and value < 1:
            parser.error(f"--{int_flag} must be >= 1")
    return CliInvocation(subcommand=args.subcommand, args=args, family=family)


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _run_sample(inv: CliInvocation) -> int:
    a = inv.args
    seed = _default_seed(a)
    trees = [
        treegen.sample_tree(inv.family, a.n, RngStream(seed, i))
        for i in range(a.count)
    ]
    _write_out(treegen.trees_to_text(trees, inv.family, a.n, seed), a.out)
    return 0


def _run_exact(inv: CliInvocation) -> int:
    a, fam = inv.args, inv.family
    q = a.quantity
    if q == "path_prob":
        val = exact.p_lambda_exact(
            exact.PathProbQuery(family=fam, n=a.n, k=a.path_prob, sigma=a.sigma)
        )
    elif q == "depth_ge":
        val = exact.p_depth_ge_exact(fam, a.n, a.depth_ge)
    elif q == "parent_prob":
        k, j = a.parent_prob
        val = exact.parent_prob(fam.alpha, k, j)
    elif q == "subtree_count":
        val = exact.expected_subtree_count(fam.alpha, a.n, a.subtree_count)
    elif q == "two_centroid":
        val = exact.prob_two_centroids(fam, a.n)
    elif q == "subtree_prob":
        val = exact.p_centroid_subtree_exact(fam, a.n, a.subtree_prob)
    elif q == "moon_depth":
        val = exact.moon_recursive_stats(a.n, fam).expected_depth
    elif q == "moon_label":
        val = exact.moon_recursive_stats(a.n, fam).expected_label
    else:  # moon_branch
        pmf = exact.moon_recursive_stats(a.n, fam).ancestral_branch_pmf
        if a.moon_branch not in pmf:
            raise ValueError(f"B must lie in 0..{max(pmf)}")
        val = pmf[a.moon_branch]
    print(_fmt(val))
    return 0


def _run_limit(inv: CliInvocation) -> int:
    a = inv.args
    alpha = inv.family.alpha
    q = a.quantity
    if q == "path_prob":
        val = limit.lim_p_lambda(alpha, a.path_prob)
    elif q == "depth_ccdf":
        val = limit.depth_limit_dist(alpha, a.depth_ccdf).ccdf
    elif q == "depth_pmf":
        val = limit.depth_limit_dist(alpha, a.depth_pmf).pmf
    elif q == "depth_mean":
        val = limit.depth_limit_mean(alpha)
    elif q == "depth_var":
        val = limit.depth_limit_variance(alpha)
    elif q == "depth_moment":
        val = limit.depth_limit_factorial_moment(alpha, a.depth_moment)
    elif q == "label_pmf":
        val = limit.label_limit_pmf(alpha, a.label_pmf)
    elif q == "label_mean":
        val = limit.label_limit_mean(alpha)
    elif q == "label_var":
        val = limit.label_limit_variance(alpha)
    elif q == "label_moment":
        val = limit.label_limit_factorial_moment(alpha, a.label_moment)
    elif q == "not_centroid":
        val = limit.not_centroid_asym(alpha, a.not_centroid)
    elif q == "subtree_density":
        val = limit.subtree_limit_density(alpha, a.subtree_density)
    elif q == "subtree_cdf":
        val = limit.subtree_limit_cdf(alpha, a.subtree_cdf)
    elif q == "point_mass":
        val = limit.subtree_point_mass(alpha)
    elif q == "subtree_moment":
        val = limit.subtree_limit_moment(alpha, a.subtree_moment)
    else:  # gf
        c, a_val = limit.eval_depth_gf(alpha, a.gf)
        print(f"{_fmt(c)} {_fmt(a_val)}")
        return 0
    print(_fmt(val))
    return 0


def _run_simulate(inv: CliInvocation) -> int:
    a = inv.args
    collectors = tuple(dict.fromkeys(a.collect)) if a.collect else montecarlo.COLLECTORS
    config = montecarlo.ExperimentConfig(
        family=inv.family,
        n=a.n,
        trials=a.trials,
        master_seed=_default_seed(a),
        collectors=collectors,
        subtree_bins=a.bins,
    )
    summary = montecarlo.run_experiment(config, threads=a.threads)
    if a.format == "json":
        _write_out(summary.to_json() + "\n", a.out)
    else:
        _write_out(summary.to_csv(), a.out)
    if a.plot_script is not None:
        _write_plot_script(a.plot_script, a.out, collectors)
    return 0


def _write_plot_script(path: str, csv_path: str, collectors: tuple[str, ...]) -> None:
    plotted = [c for c in collectors if c != "two_centroid"]
    lines = [
        "set datafile separator ','",
        "set key outside",
        "set style data histeps",
        f"# empirical distributions from {csv_path}",
    ]
    plots = ", ".join(
        f"'{csv_path}' using 2:(strcol(1) eq '{c}' ? column(3) : NaN) title '{c}'"
        for c in plotted
    )
    lines.append(f"plot {plots}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _run_compare(inv: CliInvocation) -> int:
    a = inv.args
    config = montecarlo.ExperimentConfig(
        family=inv.family,
        n=a.n,
        trials=a.trials,
        master_seed=_default_seed(a),
        collectors=(a.collect,),
        subtree_bins=a.bins,
    )
    summary = montecarlo.run_experiment(config, threads=a.threads)
    alpha = inv.family.alpha
    if a.against == "asymptotic":
        if a.collect == "depth":
            ref = montecarlo.depth_limit_table(alpha)
        elif a.collect == "label":
            ref = montecarlo.label_limit_table(alpha)
        else:
            ref = montecarlo.subtree_limit_table(alpha, a.bins)
    else:
        if a.collect == "depth":
            ref = montecarlo.depth_exact_table(inv.family, a.n)
        elif a.collect == "subtree_fraction":
            if a.n > 2000:
                raise ValueError(
                    "exact subtree reference is O(n^2); use n <= 2000 or --against asymptotic"
                )
            ref = montecarlo.subtree_exact_table(inv.family, a.n, a.bins)
        else:
            raise ValueError(
                "no exact finite-n label law is available; use --against asymptotic"
            )
    stats = montecarlo.compare_distributions(summary.tables[a.collect], ref)
    print(json.dumps(stats.to_dict(), sort_keys=True))
    return 0


def _run_oracle(inv: CliInvocation) -> int:
    checks = oracle.run_family_suite(inv.family, n_max=inv.args.n)
    width = max(len(c.name) for c in checks)
    print(f"{'family':<12} {'n':>2} {'check':<{width}} {'max_abs_err':>12} status")
    ok = True
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        ok &= c.passed
        print(
            f"{c.family:<12} {c.n:>2} {c.name:<{width}} {c.max_abs_err:>12.3e} {status}"
        )
    print(f"overall: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def _run_export_dot(inv: CliInvocation) -> int:
    a = inv.args
    seed = _default_seed(a)
    tree = treegen.sample_tree(inv.family, a.n, RngStream(seed, 0))
    report = find_centroids(tree)
    lines = [
        "digraph tree {",
        f'  // family={inv.family.tag} n={a.n} seed={seed}',
        f"  // centroids: {','.join(str(c) for c in report.centroid_labels)}"
        f" nearest={report.nearest_label} depth={report.nearest_depth}"
        f" subtree={report.subtree_size}",
        "  node [shape=circle];",
    ]
    centroids = set(report.centroid_labels)
    for v in range(1, a.n + 1):
        if v in centroids:
            lines.append(f'  {v} [label="{v}", style=filled, fillcolor=lightblue];')
        else:
            lines.append(f'  {v} [label="{v}"];')
    for k in range(2, a.n + 1):
        lines.append(f"  {int(tree.parent[k])} -> {k};")
    lines.append("}")
    _write_out("\n".join(lines) + "\n", a.out)
    return 0


_DISPATCH = {
    "sample": _run_sample,
    "exact": _run_exact,
    "limit": _run_limit,
    "simulate": _run_simulate,
    "compare": _run_compare,
    "oracle": _run_oracle,
    "export-dot": _run_export_dot,
}


def execute(inv: CliInvocation) -> int:
    try:
        return _DISPATCH[inv.subcommand](inv)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv: list[str] | None = None) -> int:
    inv = parse_args(sys.argv[1:] if argv is None else argv)
    return execute(inv)


if __name__ == "__main__":
    sys.exit(main())
