"""Command-line front end.

Subcommands: ``stats`` (graph constants), ``kappa`` (drift lower bound),
``simulate`` (trial CSV), ``check`` (inequality checks CSV), ``sweep``
(bound across a cycle family, CSV).  Output is byte-deterministic given
the flags: the default seed is the fixed constant DEFAULT_SEED, floats
print with 12 significant digits, and the worker count (GPDRIFT_WORKERS)
never changes results.

Exit codes: 0 ok, 2 bad input or flags, 3 the small-cliques condition
fails where a bound is required, 4 a check failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .drift import PivotIncrementDistribution, drift_lower_bound
from .experiments import (
    TrialBatch,
    check_domination,
    check_pivot_step_probability,
    check_lower_tail,
    checks_csv_text,
    estimate_drift,
    log_spaced_ints,
    run_batch,
    sweep_csv_text,
    sweep_cycles,
    trials_csv_text,
    write_text,
)
from .graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    graph_stats,
    parse_graph,
)
from .groups import groups_from_spec
from .piling import Word
from .walk import FixedWord, ParetoLetter, WordChoice

DEFAULT_SEED = 1729

_FAMILIES = {
    "cycle": cycle_graph,
    "edgeless": edgeless_graph,
    "complete": complete_graph,
}


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def _load_graph(args) -> Graph:
    if args.graph is not None:
        with open(args.graph, "r", encoding="utf-8") as fh:
            return parse_graph(fh.read())
    if args.family is not None:
        if args.D is None:
            raise ValueError("--family needs --D")
        return _FAMILIES[args.family](args.D)
    raise ValueError("provide --graph FILE or --family NAME --D N")


def _parse_word(token: str, graph: Graph, groups) -> Word:
    index = {label: i for i, label in enumerate(graph.labels)}
    word = []
    for piece in token.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "^" in piece:
            label, _, power = piece.partition("^")
            try:
                k = int(power)
            except ValueError as exc:
                raise ValueError(f"bad exponent in letter {piece!r}") from exc
        else:
            label, k = piece, 1
        if label not in index:
            raise ValueError(f"unknown vertex label {label!r}")
        v = index[label]
        value = groups[v].from_int(k)
        if groups[v].is_identity(value):
            raise ValueError(f"letter {piece!r} is the identity in its vertex group")
        word.append((v, value))
    if not word:
        raise ValueError("empty word")
    return tuple(word)


def _parse_nu(spec: str, graph: Graph, groups):
    kind, _, rest = spec.partition(":")
    if kind == "fixed":
        return FixedWord(_parse_word(rest, graph, groups))
    if kind == "list":
        with open(rest, "r", encoding="utf-8") as fh:
            words = [
                _parse_word(line.strip(), graph, groups)
                for line in fh
                if line.strip() and not line.startswith("#")
            ]
        return WordChoice(words)
    if kind == "pareto":
        try:
            alpha = float(rest)
        except ValueError as exc:
            raise ValueError(f"bad pareto exponent {rest!r}") from exc
        return ParetoLetter(alpha)
    raise ValueError(f"unknown nu spec {spec!r} (fixed:/list:/pareto:)")


def _default_nu(graph: Graph, groups):
    value = groups[0].from_int(1)
    if groups[0].is_identity(value):
        raise ValueError("cannot build the default nu word at vertex 0")
    return FixedWord(((0, value),))


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="path to a graph file (JSON or edge list)")
    p.add_argument("--family", choices=sorted(_FAMILIES), help="built-in graph family")
    p.add_argument("--D", type=int, help="vertex count for --family")


def _add_walk_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--groups", default="z", help="vertex groups: z | zmod:<m> | comma list")
    p.add_argument("--nu", default=None, help="nu sampler: fixed:<word> | list:<path> | pareto:<alpha>")
    p.add_argument("--n", type=int, default=100, help="steps per walk")
    p.add_argument("--trials", type=int, default=1000, help="independent walks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed")


def _build_batch(args) -> TrialBatch:
    graph = _load_graph(args)
    groups = groups_from_spec(args.groups, graph.vertex_count)
    nu = _parse_nu(args.nu, graph, groups) if args.nu else _default_nu(graph, groups)
    if args.n < 1:
        raise ValueError("--n must be positive")
    if args.trials < 1:
        raise ValueError("--trials must be positive")
    return TrialBatch(
        graph=graph,
        groups=groups,
        nu=nu,
        steps=args.n,
        trials=args.trials,
        base_seed=args.seed,
    )


def cmd_stats(args) -> int:
    stats = graph_stats(_load_graph(args))
    print(
        json.dumps(
            {
                "D": stats.vertex_count,
                "C": stats.max_clique,
                "B": stats.max_neighbourhood,
                "small_cliques": stats.small_cliques,
            }
        )
    )
    return 0


def cmd_kappa(args) -> int:
    stats = graph_stats(_load_graph(args))
    if not stats.small_cliques:
        print(
            f"small-cliques condition fails: D={stats.vertex_count} is not greater "
            f"than 3B+2C={3 * stats.max_neighbourhood + 2 * stats.max_clique}",
            file=sys.stderr,
        )
        return 3
    bound = drift_lower_bound(
        stats.max_neighbourhood, stats.max_clique, stats.vertex_count
    )
    print(
        json.dumps(
            {
                "kappa": _round12(bound.kappa),
                "t_star": _round12(bound.t_star),
                "mean_U": _round12(bound.mean_increment),
                "mgf": _round12(bound.mgf_at_t_star),
            }
        )
    )
    return 0


def cmd_simulate(args) -> int:
    batch = _build_batch(args)
    metrics = run_batch(batch)
    write_text(args.output, trials_csv_text(metrics))
    drift = estimate_drift(batch)
    print(
        json.dumps(
            {
                "trials": batch.trials,
                "steps": batch.steps,
                "drift": _round12(drift.mean),
                "stderr": None if drift.stderr is None else _round12(drift.stderr),
                "output": args.output,
            }
        )
    )
    return 0


def cmd_check(args) -> int:
    batch = _build_batch(args)
    stats = graph_stats(batch.graph)
    if not stats.small_cliques:
        print("small-cliques condition fails; no bound to check", file=sys.stderr)
        return 3
    d, b, c = stats.vertex_count, stats.max_neighbourhood, stats.max_clique
    bound = drift_lower_bound(b, c, d)
    reports = [
        check_lower_tail(batch, bound.kappa),
        check_pivot_step_probability(batch),
        check_domination(batch, PivotIncrementDistribution(b, c, d)),
    ]
    write_text(args.output, checks_csv_text(reports))
    failed = False
    for r in reports:
        status = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
        failed = failed or (not r.skipped and not r.passed)
        print(
            f"{r.name}: {status} statistic={r.statistic:.6g} "
            f"threshold={r.threshold:.6g} {r.detail}"
        )
    return 4 if failed else 0


def cmd_sweep(args) -> int:
    if args.D_list:
        try:
            d_values = sorted({int(x) for x in args.D_list.split(",") if x.strip()})
        except ValueError as exc:
            raise ValueError(f"bad --D-list {args.D_list!r}") from exc
    else:
        d_values = log_spaced_ints(args.start, args.stop, args.points)
    if not d_values or min(d_values) < 3:
        raise ValueError("cycle lengths must be at least 3")
    rows = sweep_cycles(d_values)
    write_text(args.output, sweep_csv_text(rows))
    print(json.dumps({"rows": len(rows), "output": args.output}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpdrift",
        description="Graph products: normal forms, alternating walks, drift bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="print D, C, B and the small-cliques flag")
    _add_graph_args(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("kappa", help="print the drift lower bound")
    _add_graph_args(p)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("simulate", help="run walks, write a trials CSV")
    _add_graph_args(p)
    _add_walk_args(p)
    p.add_argument("--output", default="trials.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="run the inequality checks, write a CSV")
    _add_graph_args(p)
    _add_walk_args(p)
    p.add_argument("--output", default="checks.csv")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="bound across cycle lengths, write a CSV")
    p.add_argument("--family", choices=["cycle"], default="cycle")
    p.add_argument("--from", dest="start", type=int, default=17)
    p.add_argument("--to", dest="stop", type=int, default=12000)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--D-list", dest="D_list", default=None, help="explicit comma list")
    p.add_argument("--output", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
