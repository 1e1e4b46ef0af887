"""Command line front end: align, eval and explain subcommands.

Progress goes to stderr, results go to files (align) or stdout (eval,
explain).  Exit codes: 0 success, 1 configuration problems, 2 unreadable or
unusable data, 3 explain queries that found nothing to explain.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time

from . import engine, evaluation, explain
from .engine import Config
from .ingest import (DEFAULT_TYPE_RELATION, IngestError, attach_seeds,
                     load_openea_dir, load_plain)

log = logging.getLogger("flora")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NOT_FOUND = 3

ENTITY_FILE = "entity_alignment.tsv"
RELATION_FILE = "relation_alignment.tsv"
RANKING_FILE = "ranking.tsv"
EXPLANATIONS_FILE = "explanations.jsonl"
MANIFEST_FILE = "manifest.json"


class ConfigProblem(Exception):
    pass


class DataProblem(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems as exit code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flora", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    _align_flags(sub.add_parser("align", help="align two knowledge graphs"))
    _eval_flags(sub.add_parser("eval",
                               help="score an alignment against gold links"))
    _explain_flags(sub.add_parser("explain",
                                  help="justify matches from a finished run"))
    return parser


def _align_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("inputs")
    src.add_argument("--openea", metavar="DIR",
                     help="directory in the OpenEA layout")
    src.add_argument("--kg1", metavar="FILE", help="relational triples, KG1")
    src.add_argument("--kg2", metavar="FILE", help="relational triples, KG2")
    src.add_argument("--attr1", metavar="FILE", help="attribute triples, KG1")
    src.add_argument("--attr2", metavar="FILE", help="attribute triples, KG2")
    src.add_argument("--seeds", metavar="FILE",
                     help="known entity pairs fixed at score 1")
    src.add_argument("--sim-file", metavar="FILE",
                     help="precomputed literal similarities (replaces the "
                          "builtin string provider)")
    p.add_argument("--config", metavar="FILE", help="key = value options")
    p.add_argument("--out-dir", metavar="DIR", default="flora-out")
    p.add_argument("--seed", type=int, help="sampling seed")
    p.add_argument("--threads", type=int,
                   help="worker threads (or FLORA_THREADS)")
    tune = p.add_argument_group("tuning")
    tune.add_argument("--theta-r", type=float)
    tune.add_argument("--theta-s", type=float)
    tune.add_argument("--theta-e", type=float)
    tune.add_argument("--alpha", type=float)
    tune.add_argument("--epsilon", type=float)
    tune.add_argument("--max-iters", type=int)
    tune.add_argument("--l-max", type=int)
    tune.add_argument("--fun-budget", type=int)
    tune.add_argument("--rel-report-threshold", type=float)
    tune.add_argument("--candidate-cap", type=int)
    tune.add_argument("--exact-cap", type=int)
    tune.add_argument("--top-k", type=int)
    tune.add_argument("--no-pruning", action="store_true")
    tune.add_argument("--type-relation")


def _eval_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pred", metavar="FILE", required=True,
                   help="predicted pairs (entity_alignment.tsv)")
    p.add_argument("--gold", metavar="FILE", required=True)
    p.add_argument("--ranking", metavar="FILE",
                   help="scored pairs for Hit@K and MRR (ranking.tsv)")
    p.add_argument("--ks", default="1,10", help="comma-separated K values")
    p.add_argument("--openea", metavar="DIR",
                   help="dataset for the category breakdown")
    p.add_argument("--kg1", metavar="FILE")
    p.add_argument("--kg2", metavar="FILE")
    p.add_argument("--attr1", metavar="FILE")
    p.add_argument("--attr2", metavar="FILE")
    p.add_argument("--type-relation", default=DEFAULT_TYPE_RELATION)
    p.add_argument("--out", metavar="FILE", help="write metrics here too")


def _explain_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--run-dir", metavar="DIR", required=True)
    p.add_argument("--pair", nargs=2, metavar=("LABEL1", "LABEL2"))
    p.add_argument("--all", action="store_true", dest="all_pairs")


# -- align -------------------------------------------------------------------


def _build_config(args) -> Config:
    try:
        cfg = Config.from_file(args.config) if args.config else Config()
        return cfg.merged(
            theta_r=args.theta_r, theta_s=args.theta_s, theta_e=args.theta_e,
            alpha=args.alpha, epsilon=args.epsilon, max_iters=args.max_iters,
            l_max=args.l_max, fun_budget=args.fun_budget,
            rel_report_threshold=args.rel_report_threshold,
            rng_seed=args.seed, candidate_cap=args.candidate_cap,
            exact_cap=args.exact_cap, top_k=args.top_k,
            pruning=False if args.no_pruning else None,
            threads=args.threads, type_relation=args.type_relation)
    except (ValueError, OSError) as e:
        raise ConfigProblem(str(e)) from e


def _load_bundle(args, cfg: Config):
    if args.openea and (args.kg1 or args.kg2):
        raise ConfigProblem("--openea and --kg1/--kg2 are mutually exclusive")
    if args.openea:
        return load_openea_dir(args.openea, cfg.type_relation)
    if not args.kg1 or not args.kg2:
        raise ConfigProblem("need --openea, or both --kg1 and --kg2")
    return load_plain(args.kg1, args.kg2, args.attr1, args.attr2,
                      type_relation=cfg.type_relation)


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def cmd_align(args) -> int:
    cfg = _build_config(args)
    t0 = time.perf_counter()
    bundle = _load_bundle(args, cfg)
    if args.seeds:
        attach_seeds(bundle, args.seeds)
    if args.sim_file and not os.path.isfile(args.sim_file):
        raise DataProblem(f"cannot read sim file {args.sim_file}")
    for w in bundle.warnings:
        log.warning("%s", w)
    t_load = time.perf_counter() - t0
    log.info("loaded %s and %s", bundle.kg1, bundle.kg2)

    t0 = time.perf_counter()
    result = engine.run(bundle, cfg, sim_file=args.sim_file)
    t_align = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        os.makedirs(args.out_dir, exist_ok=True)
    except OSError as e:
        raise DataProblem(f"cannot create {args.out_dir}: {e}") from e
    matches = result.entity_matches()
    rel_matches = result.relation_matches()
    ranking = result.ranking()
    _write(args.out_dir, ENTITY_FILE,
           (f"{l1}\t{l2}\t{s:.6f}" for l1, l2, s in matches))
    _write(args.out_dir, RELATION_FILE,
           (f"{l1}\t{op}\t{l2}\t{s12:.6f}\t{s21:.6f}"
            for l1, op, l2, s12, s21 in rel_matches))
    _write(args.out_dir, RANKING_FILE,
           (f"{l1}\t{l2}\t{s:.6f}" for l1, l2, s in ranking))
    explanations = explain.reported_explanations(result)
    explain.write_jsonl(explanations, os.path.join(args.out_dir,
                                                   EXPLANATIONS_FILE))
    t_write = time.perf_counter() - t0

    manifest = {
        "tool": "flora 0.1.0",
        "config": cfg.to_dict(),
        "threads": cfg.resolve_threads(),
        "inputs": {name: {"path": path, "sha256": _sha256(path)}
                   for name, path in sorted(bundle.sources.items())},
        "sim_file": ({"path": args.sim_file,
                      "rows_loaded": result.table.rows_loaded,
                      "rows_skipped": result.table.rows_skipped}
                     if args.sim_file else None),
        "provider": result.table.provider,
        "counts": {
            "kg1_entities": len(bundle.kg1.entity_ids()),
            "kg2_entities": len(bundle.kg2.entity_ids()),
            "kg1_triples": bundle.kg1.n_triples(),
            "kg2_triples": bundle.kg2.n_triples(),
            "literal_pairs": len(result.table),
            "seeds": len(bundle.seed_links),
            "entity_matches": len(matches),
            "relation_matches": len(rel_matches),
            "ranked_pairs": len(ranking),
        },
        "iterations": [vars(s) for s in result.iterations],
        "converged": result.converged,
        "timings": {"load": t_load, "align": t_align, "write": t_write},
    }
    with open(os.path.join(args.out_dir, MANIFEST_FILE), "w",
              encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    log.info("%d entity matches, %d relation matches, outputs in %s",
             len(matches), len(rel_matches), args.out_dir)
    return EXIT_OK


def _write(directory: str, name: str, lines) -> None:
    with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


# -- eval ----------------------------------------------------------------------


def _read_pairs(path: str) -> list[tuple[str, str]]:
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise DataProblem(f"cannot read {path}: {e}") from e
    pairs = []
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise DataProblem(f"{path}:{lineno}: expected at least 2 columns")
            pairs.append((parts[0], parts[1]))
    return pairs


def _read_ranking(path: str) -> list[tuple[str, str, float]]:
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise DataProblem(f"cannot read {path}: {e}") from e
    rows = []
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataProblem(f"{path}:{lineno}: expected 3 columns")
            try:
                rows.append((parts[0], parts[1], float(parts[2])))
            except ValueError as e:
                raise DataProblem(f"{path}:{lineno}: bad score") from e
    return rows


def cmd_eval(args) -> int:
    try:
        ks = tuple(int(k) for k in args.ks.split(","))
        if not ks or any(k < 1 for k in ks):
            raise ValueError
    except ValueError:
        raise ConfigProblem(f"--ks must be positive integers, got {args.ks!r}")
    pred = _read_pairs(args.pred)
    gold = _read_pairs(args.gold)
    ranking = _read_ranking(args.ranking) if args.ranking else None
    kg1 = None
    if args.openea or (args.kg1 and args.kg2):
        bundle = _load_bundle(args, Config(type_relation=args.type_relation))
        kg1 = bundle.kg1
    try:
        report = evaluation.evaluate(pred, gold, ranking, kg1, ks)
    except ValueError as e:
        raise DataProblem(str(e)) from e
    lines = [f"{key}\t{value}" for key, value in report.lines()]
    print("\n".join(lines))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


# -- explain --------------------------------------------------------------------


def cmd_explain(args) -> int:
    if bool(args.pair) == bool(args.all_pairs):
        raise ConfigProblem("need exactly one of --pair or --all")
    run_dir = args.run_dir
    exp_path = os.path.join(run_dir, EXPLANATIONS_FILE)
    man_path = os.path.join(run_dir, MANIFEST_FILE)
    if not os.path.isfile(exp_path) or not os.path.isfile(man_path):
        raise DataProblem(f"{run_dir} is not a finished run directory")
    with open(man_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    theta_e = manifest["config"]["theta_e"]
    records = []
    with open(exp_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    if args.all_pairs:
        for rec in records:
            print(explain.Explanation.from_record(rec).render())
            print()
        return EXIT_OK
    l1, l2 = args.pair
    for rec in records:
        if rec["entity1"] == l1 and rec["entity2"] == l2:
            print(explain.Explanation.from_record(rec).render())
            return EXIT_OK
    for a, b, s in _read_ranking(os.path.join(run_dir, RANKING_FILE)):
        if a == l1 and b == l2:
            print(f"({l1}, {l2}) was scored (best {s:.6f}) but not reported: "
                  f"below theta_e={theta_e} or pruned by mutual-max assignment",
                  file=sys.stderr)
            return EXIT_NOT_FOUND
    print(f"({l1}, {l2}) was never scored: no shared evidence survived "
          f"candidate search", file=sys.stderr)
    return EXIT_NOT_FOUND


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "align":
            return cmd_align(args)
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_explain(args)
    except ConfigProblem as e:
        print(f"flora: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataProblem, IngestError) as e:
        print(f"flora: data error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
