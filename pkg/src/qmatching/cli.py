"""Command-line entry point: ``solve``, ``sweep`` and ``verify``."""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .experiments import ExperimentConfig, fit_scaling, generate_graph, run_experiment, rows_to_csv
from .graph import read_edge_list, validate_matching
from .guessing import PHASE1
from .matcher import maximum_matching
from .oracle import LIST, MATRIX, build_oracle
from .reference import brute_force_max_matching, shortest_aug_path_length


def _solve(args) -> int:
    g = read_edge_list(args.graph)
    res = maximum_matching(build_oracle(g, args.model, ordering_seed=args.seed))
    text = res.to_json(include_logs=not args.summary) + "\n"
    if args.json:
        Path(args.json).parent.mkdir(parents=True, exist_ok=True)
        Path(args.json).write_text(text)
    rep = res.report
    print(f"n={g.n} m={g.m} model={args.model} size={res.size} phases={res.phase_count} "
          f"T={rep.T} I={rep.I} bound={rep.bound:.3f}")
    if not args.json:
        sys.stdout.write(text)
    return 0


def _sweep(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.workers:
        cfg.workers = args.workers
    rows = run_experiment(cfg)
    if not cfg.csv_path:
        sys.stdout.write(rows_to_csv(rows))
    if args.fit:
        for metric in args.fit:
            try:
                fit = fit_scaling(rows, metric)
            except ValueError as exc:
                print(f"fit {metric}: {exc}", file=sys.stderr)
                continue
            if fit is None:
                print(f"fit {metric}: undefined (zero median)", file=sys.stderr)
            else:
                print(f"fit {metric}: exponent={fit.exponent:.4f} constant={fit.constant:.4g} "
                      f"residual={fit.residual:.4f}", file=sys.stderr)
    bad = [r for r in rows if r["brute_size"] != "" and r["brute_size"] != r["match_size"]]
    return 1 if bad else 0


def _instance(rng: random.Random, n_max: int):
    family = rng.choice(("gnp", "gnm", "bipartite", "path", "cycle"))
    n = rng.randint(3 if family == "cycle" else 2, n_max)
    seed = rng.randrange(2**31)
    if family == "gnm":
        params = {"n": n, "m": rng.randint(0, n * (n - 1) // 2)}
    elif family in ("gnp", "bipartite"):
        params = {"n": n, "p": rng.choice((0.1, 0.3, 0.5, 0.8))}
    else:
        params = {"n": n}
    return family, params, seed, generate_graph(family, params, seed)


def verify(n_max: int, trials: int, seed: int = 0, out=sys.stdout) -> dict:
    """Hard assertions over random small instances in both models.

    Returns failure counts keyed by assertion; shortest-path monotonicity
    is reported but advisory.
    """
    rng = random.Random(seed)
    fail = {"size": 0, "valid": 0, "phase1_cap": 0, "phase2_cap": 0, "depth": 0, "matrix_I": 0}
    advisory = {"runs": 0, "monotone": 0}
    for _ in range(trials):
        family, params, s, g = _instance(rng, n_max)
        want = brute_force_max_matching(g).size
        for model in (MATRIX, LIST):
            oracle = build_oracle(g, model, ordering_seed=s)
            res = maximum_matching(oracle)
            rep = res.report
            tag = f"{family} {params} seed={s} model={model}"
            if res.size != want:
                fail["size"] += 1
                print(f"FAIL size {tag}: got {res.size}, want {want}", file=out)
            if not validate_matching(g, res.matching):
                fail["valid"] += 1
                print(f"FAIL valid {tag}", file=out)
            n = g.n
            for call in rep.calls:
                if call.phase == PHASE1:
                    cap, key = (2 * n + 1 if model == MATRIX else 3 * n + 1), "phase1_cap"
                else:
                    cap, key = (4 * n if model == MATRIX else 5 * n), "phase2_cap"
                if call.incorrect > cap:
                    fail[key] += 1
                    print(f"FAIL {key} {tag}: call {call.phase_index} I={call.incorrect} > {cap}", file=out)
            depth_cap = n * (n - 1) // 2 if model == MATRIX else 2 * g.m + n
            if rep.T > depth_cap:
                fail["depth"] += 1
                print(f"FAIL depth {tag}: T={rep.T} > {depth_cap}", file=out)
            if model == MATRIX:
                present = sum(1 for _, outcome in oracle.ledger.items() if outcome)
                if rep.I != present:
                    fail["matrix_I"] += 1
                    print(f"FAIL matrix_I {tag}: I={rep.I}, present answers={present}", file=out)
            lengths = [shortest_aug_path_length(g, rec.matching_before) for rec in res.phases]
            advisory["runs"] += 1
            advisory["monotone"] += all(
                b is None or b > a for a, b in zip(lengths, lengths[1:])
            )
    return {"failures": fail, "advisory": advisory}


def _verify(args) -> int:
    summary = verify(args.n_max, args.trials, args.seed)
    fail, adv = summary["failures"], summary["advisory"]
    for key, count in fail.items():
        print(f"{'PASS' if count == 0 else 'FAIL'} {key}: {count} violations")
    runs = adv["runs"] or 1
    print(f"INFO shortest length increases between phases in {adv['monotone']}/{adv['runs']} runs "
          f"({100 * adv['monotone'] / runs:.2f}%)")
    return 0 if not any(fail.values()) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qmatching", description="query-model maximum matching")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="match one graph file")
    s.add_argument("graph", help='edge list: "n m" header then one "u v" per line')
    s.add_argument("--model", choices=(MATRIX, LIST), default=MATRIX)
    s.add_argument("--seed", type=int, default=0, help="neighbor-order seed for the list model")
    s.add_argument("--json", help="write the full result here instead of stdout")
    s.add_argument("--summary", action="store_true", help="omit per-phase logs, guesses and ledger")
    s.set_defaults(func=_solve)

    w = sub.add_parser("sweep", help="run an experiment config and emit CSV")
    w.add_argument("--config", required=True, help="JSON experiment config")
    w.add_argument("--workers", type=int, default=0, help="override the config's worker count")
    w.add_argument("--fit", action="append", choices=("I", "bound", "T", "phases"),
                   help="print a power-law fit of this metric (repeatable)")
    w.set_defaults(func=_sweep)

    v = sub.add_parser("verify", help="check hard assertions on random small graphs")
    v.add_argument("--n-max", type=int, default=16)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
