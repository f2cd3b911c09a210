"""Command-line interface.

Subcommands: ``generate`` (draw a correlated pair to files), ``match`` (run
one matcher on a pair of graph files), ``simulate`` (Monte Carlo grid to
CSV), ``oracle`` (exhaustive small-scale reports), ``bounds`` (analytic
divergence/tail/constant evaluation).

Exit codes: 0 success, 2 parameter error, 3 file/format error, 4 resource
refusal.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, lap
from .errors import FormatError, ParameterError, ResourceLimitError
from .graphs import (
    PRNG_ALGORITHM,
    CorrelatedPairSpec,
    Graph,
    Seeding,
    count_disagreements,
    generate_correlated_pair,
    permute_vertices,
)
from .harness import (
    HASH_ALGORITHM,
    emit_results,
    match_records_csv_text,
    parse_config_file,
    results_csv_text,
    run_experiment,
    skipped_cells,
)
from .io import GRAPH_FORMATS, load_graph, load_seeds, write_graph
from .matchers import SgmConfig, rgm_match, sgm_match
from .svgplot import accuracy_plot_svg
from .theory import (
    binomial_tail_lower_bound,
    brute_force_gm,
    brute_force_rgm,
    exact_binomial_tail,
    kl_divergence_bernoulli,
    seed_threshold_constants,
    tail_threshold,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgmatch",
        description="Seeded graph matching on correlated graph pairs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="draw a correlated graph pair to files")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--rho", type=float, required=True)
    g.add_argument("--seed", type=int, default=0, help="64-bit generator seed")
    g.add_argument("--out-g1", required=True)
    g.add_argument("--out-g2", required=True)
    g.add_argument("--format", choices=GRAPH_FORMATS, default="dense_csv")

    m = sub.add_parser("match", help="match one graph pair")
    m.add_argument("--method", choices=("sgm", "rgm", "faq"), required=True)
    m.add_argument("--g1", required=True)
    m.add_argument("--g2", required=True)
    m.add_argument("--seeds", help="CSV of seed pairs v_in_g1,v_in_g2")
    m.add_argument("--format", choices=GRAPH_FORMATS, default="dense_csv")
    m.add_argument("--max-iters", type=int, default=20)
    m.add_argument("--tol", type=float, default=1e-6)
    m.add_argument("--out", help="write the full vertex map CSV here (default stdout)")

    s = sub.add_parser("simulate", help="run a Monte Carlo experiment grid")
    s.add_argument("--config", required=True, help="key=value config file")
    s.add_argument("--out", required=True, help="results CSV path")
    s.add_argument("--json", dest="json_out", help="also write a JSON provenance file")
    s.add_argument(
        "--emit-matches",
        metavar="BASE",
        help="write per-cell match-record CSVs next to BASE",
    )
    s.add_argument("--plot", help="write an accuracy-vs-seeds SVG here")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument(
        "--timing",
        action="store_true",
        help="record measured wall time per cell (off by default so output "
        "is bit-reproducible)",
    )

    o = sub.add_parser("oracle", help="exhaustive brute-force report (small graphs)")
    o.add_argument("--mode", choices=("gm", "rgm"), required=True)
    o.add_argument("--g1", required=True)
    o.add_argument("--g2", required=True)
    o.add_argument("--format", choices=GRAPH_FORMATS, default="dense_csv")
    o.add_argument("--seeds", help="seed-pair CSV (rgm mode)")
    o.add_argument("--s", type=int, help="treat the first S vertices as seeds (rgm mode)")

    b = sub.add_parser("bounds", help="evaluate analytic divergences/bounds/constants")
    bsub = b.add_subparsers(dest="bounds_command", required=True)
    bk = bsub.add_parser("kl", help="Bernoulli Kullback-Leibler divergence")
    bk.add_argument("--r", type=float, required=True)
    bk.add_argument("--q", type=float, required=True)
    bt = bsub.add_parser("tail", help="binomial upper-tail lower bound")
    bt.add_argument("--eta", type=int, required=True)
    bt.add_argument("--q", type=float, required=True)
    bt.add_argument("--r", type=float, required=True)
    bt.add_argument("--exact", action="store_true", help="also report the exact tail")
    bc = bsub.add_parser("constants", help="seed-count threshold constants")
    bc.add_argument("--p", type=float, required=True)
    bc.add_argument("--rho", type=float, required=True)
    bc.add_argument("--eps", type=float, required=True)

    return parser


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _cmd_generate(args) -> int:
    spec = CorrelatedPairSpec(args.n, args.p, args.rho, args.seed)
    g1, g2 = generate_correlated_pair(spec)
    write_graph(g1, args.out_g1, args.format)
    write_graph(g2, args.out_g2, args.format)
    _emit(
        {
            "n": args.n,
            "p": args.p,
            "rho": args.rho,
            "rng_seed": args.seed,
            "prng": PRNG_ALGORITHM,
            "g1": args.out_g1,
            "g2": args.out_g2,
            "latent_alignment": "identity",
        }
    )
    return 0


def _canonicalize(g1: Graph, g2: Graph, seed_pairs: np.ndarray):
    """Relabel both graphs so seed pairs occupy the index prefix in order.

    Returns the canonical graphs plus, for each side, the original ids in
    canonical-slot order (seeds first, then sorted nonseeds).
    """
    n = g1.n
    if g2.n != n:
        raise ParameterError(f"graphs differ in size: {g1.n} vs {g2.n}")
    s = len(seed_pairs)
    for col, name in ((0, "first"), (1, "second")):
        bad = seed_pairs[(seed_pairs[:, col] < 0) | (seed_pairs[:, col] >= n)]
        if len(bad):
            raise ParameterError(f"seed vertex out of range in {name} graph")
    order1 = np.concatenate(
        [seed_pairs[:, 0], np.setdiff1d(np.arange(n), seed_pairs[:, 0])]
    )
    order2 = np.concatenate(
        [seed_pairs[:, 1], np.setdiff1d(np.arange(n), seed_pairs[:, 1])]
    )
    relabel1 = np.empty(n, dtype=np.int64)
    relabel1[order1] = np.arange(n)
    relabel2 = np.empty(n, dtype=np.int64)
    relabel2[order2] = np.arange(n)
    return (
        permute_vertices(g1, relabel1),
        permute_vertices(g2, relabel2),
        order1,
        order2,
        s,
    )


def _cmd_match(args) -> int:
    g1 = load_graph(args.g1, args.format)
    g2 = load_graph(args.g2, args.format)
    seed_pairs = load_seeds(args.seeds) if args.seeds else np.empty((0, 2), dtype=np.int64)
    if args.method == "rgm" and len(seed_pairs) == 0:
        raise ParameterError("rgm needs a nonempty --seeds file")
    if args.method == "faq" and len(seed_pairs):
        raise ParameterError("faq ignores seeds; run without --seeds or use sgm")

    g1c, g2c, order1, order2, s = _canonicalize(g1, g2, seed_pairs)
    seeding = Seeding.for_pair(g1c, g2c, s)
    if args.method == "rgm":
        result = rgm_match(g1c, g2c, seeding)
    else:
        result = sgm_match(g1c, g2c, seeding, SgmConfig(args.max_iters, args.tol))

    full_map = np.empty(g1.n, dtype=np.int64)
    full_map[order1[:s]] = order2[:s]
    full_map[order1[s:]] = order2[s + result.permutation]

    lines = ["v_in_g1,v_in_g2,is_seed"]
    seeded = np.zeros(g1.n, dtype=bool)
    seeded[seed_pairs[:, 0]] = True
    for v in range(g1.n):
        lines.append(f"{v},{full_map[v]},{int(seeded[v])}")
    text = "\n".join(lines) + "\n"

    summary = {
        "method": args.method,
        "n": g1.n,
        "seeds": s,
        "nonseeds": seeding.m,
        "objective": result.objective,
        "iterations": result.iterations,
        "converged": result.converged,
        "lap_backend": lap.backend(),
    }
    if g1.is_binary() and g2.is_binary():
        summary["disagreements"] = count_disagreements(
            g1c, g2c, seeding, result.permutation
        ).total

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _emit(summary)
    else:
        sys.stdout.write(text)
        print(json.dumps(summary, indent=2), file=sys.stderr)
    return 0


def _cmd_simulate(args) -> int:
    cfg = parse_config_file(args.config)
    keep = bool(args.emit_matches)
    out = run_experiment(cfg, threads=args.threads, timing=args.timing, keep_records=keep)
    cells, records = out if keep else (out, None)

    with open(args.out, "w") as fh:
        fh.write(results_csv_text(cells))
    if args.json_out:
        emit_results(cells, args.json_out, "json", config=cfg, skipped=skipped_cells(cfg))
    if records is not None:
        for (method, rho, s), recs in records.items():
            path = f"{args.emit_matches}.{method}.rho{rho:g}.s{s}.csv"
            with open(path, "w") as fh:
                fh.write(match_records_csv_text(recs))
    if args.plot:
        with open(args.plot, "w") as fh:
            fh.write(accuracy_plot_svg(cells))
    skipped = skipped_cells(cfg)
    if skipped:
        print(f"skipped {len(skipped)} infeasible cells (rgm@s=0 / faq@s>0)", file=sys.stderr)
    return 0


def _load_pair_with_seeds(args):
    g1 = load_graph(args.g1, args.format)
    g2 = load_graph(args.g2, args.format)
    if args.seeds:
        pairs = load_seeds(args.seeds)
        g1c, g2c, _, _, s = _canonicalize(g1, g2, pairs)
        return g1c, g2c, s
    s = args.s or 0
    if not 0 <= s <= g1.n - 1:
        raise ParameterError(f"seed count {s} outside [0, {g1.n - 1}]")
    return g1, g2, s


def _cmd_oracle(args) -> int:
    if args.mode == "gm":
        g1 = load_graph(args.g1, args.format)
        g2 = load_graph(args.g2, args.format)
        report = brute_force_gm(g1, g2)
    else:
        g1, g2, s = _load_pair_with_seeds(args)
        if s < 1:
            raise ParameterError("rgm oracle needs at least one seed (--seeds or --s)")
        report = brute_force_rgm(g1, g2, Seeding.for_pair(g1, g2, s))
    _emit(
        {
            "mode": args.mode,
            "optimum": report.optimum,
            "argmin_count": report.argmin_count,
            "identity_is_unique_argmin": report.identity_is_unique_argmin,
            "better_than_identity": report.better_than_identity,
        }
    )
    return 0


def _cmd_bounds(args) -> int:
    if args.bounds_command == "kl":
        _emit({"r": args.r, "q": args.q, "kl": kl_divergence_bernoulli(args.r, args.q)})
    elif args.bounds_command == "tail":
        value = binomial_tail_lower_bound(args.eta, args.q, args.r)
        payload = {"eta": args.eta, "q": args.q, "r": args.r, "lower_bound": value}
        if args.exact:
            k = tail_threshold(args.eta, args.r)
            payload["threshold"] = k
            payload["exact_tail"] = exact_binomial_tail(args.eta, args.q, k)
        _emit(payload)
    else:
        c5, c6 = seed_threshold_constants(args.p, args.rho, args.eps)
        _emit(
            {
                "p": args.p,
                "rho": args.rho,
                "eps": args.eps,
                "c5_lower": c5,
                "c6_upper": c6,
            }
        )
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "match": _cmd_match,
    "simulate": _cmd_simulate,
    "oracle": _cmd_oracle,
    "bounds": _cmd_bounds,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
