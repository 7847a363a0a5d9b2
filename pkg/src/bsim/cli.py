"""Command-line interface.

    bsim parse <files...>
    bsim trace <submission> [--loop-bound N --recursion-bound M --budget K]
    bsim graph <trace-file> [--dot]
    bsim compare <a> <b>
    bsim corpus <dir> [--jobs J --out matrix.csv]
    bsim mutate <base> --level L --chance C --seed S [--exclude-value-injecting]
    bsim experiment robustness|accuracy <config.json>

Exit codes: 0 success, 1 usage, 2 ingest failure, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BsimError, MutationError, ParseError, ResolveError
from .executor import ExecutorLimits, execute_program, trace_from_doc
from .harness import (
    compare_corpus,
    load_submission,
    report_json,
    run_accuracy,
    run_robustness,
    time_pairs,
)
from .lang import DEFAULT_ENTRY_NAME, SourceUnit, parse_unit, resolve_program
from .matcher import sim_program
from .mutator import MutationConfig, mutate
from .pidg import build_pidg_set, serialize_pidg, to_dot

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INGEST = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_limits(p: argparse.ArgumentParser):
    p.add_argument("--loop-bound", type=int, default=3, metavar="N",
                   help="max body entries per loop site per path (default 3)")
    p.add_argument("--recursion-bound", type=int, default=2, metavar="M",
                   help="max simultaneous activations per method (default 2)")
    p.add_argument("--budget", type=int, default=4096, metavar="K",
                   help="max explored paths per entry point (default 4096)")
    p.add_argument("--entry", default=DEFAULT_ENTRY_NAME, metavar="NAME",
                   help="entry method name (default: main)")


def _limits(args) -> ExecutorLimits:
    return ExecutorLimits(loop_bound=args.loop_bound,
                          recursion_bound=args.recursion_bound,
                          context_budget=args.budget)


def build_parser() -> _Parser:
    parser = _Parser(prog="bsim",
                     description="Behavioural similarity for a Java-like mini-language")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse source files and report structure")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("trace", help="symbolically execute a submission")
    p.add_argument("submission")
    _add_limits(p)
    p.add_argument("-o", "--out", help="write the trace set JSON here")

    p = sub.add_parser("graph", help="build graphs from a trace-set file")
    p.add_argument("trace_file")
    p.add_argument("-o", "--out", help="write the graph set JSON here")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")

    p = sub.add_parser("compare", help="behavioural similarity of two submissions")
    p.add_argument("a")
    p.add_argument("b")
    _add_limits(p)

    p = sub.add_parser("corpus", help="all-pairs similarity matrix of a directory")
    p.add_argument("dir")
    _add_limits(p)
    p.add_argument("--jobs", type=int, default=None, metavar="J",
                   help="parallel pair comparisons (default: logical cores)")
    p.add_argument("--out", help="write the CSV matrix here (default stdout)")

    p = sub.add_parser("mutate", help="generate one simulated-plagiarism variant")
    p.add_argument("base")
    p.add_argument("--level", type=int, required=True, choices=[1, 2, 3, 4, 5])
    p.add_argument("--chance", type=float, required=True,
                   help="per-site transformation chance in percent")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--exclude-value-injecting", action="store_true")
    p.add_argument("--out", help="directory for the variant sources")

    p = sub.add_parser("experiment", help="run a replication experiment")
    p.add_argument("kind", choices=["robustness", "accuracy", "timing"])
    p.add_argument("config", help="experiment configuration JSON")
    p.add_argument("--out", help="write the report JSON here (default stdout)")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except SystemExit:
        raise
    except (ParseError, ResolveError) as exc:
        print(f"bsim: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except BsimError as exc:
        print(f"bsim: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except Exception as exc:  # noqa: BLE001 - report and use the internal code
        print(f"bsim: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def _dispatch(args) -> int:
    if args.command == "parse":
        return _cmd_parse(args)
    if args.command == "trace":
        return _cmd_trace(args)
    if args.command == "graph":
        return _cmd_graph(args)
    if args.command == "compare":
        return _cmd_compare(args)
    if args.command == "corpus":
        return _cmd_corpus(args)
    if args.command == "mutate":
        return _cmd_mutate(args)
    if args.command == "experiment":
        return _cmd_experiment(args)
    raise AssertionError(args.command)


def _cmd_parse(args) -> int:
    status = EXIT_OK
    for path in args.files:
        try:
            text = Path(path).read_text(encoding="utf-8")
            ast = parse_unit(SourceUnit(path, text))
        except OSError as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            status = EXIT_INGEST
            continue
        except ParseError as exc:
            print(f"{exc}", file=sys.stderr)
            status = EXIT_INGEST
            continue
        for cls in ast.classes:
            members = len(cls.members)
            print(f"{path}: class {cls.name}"
                  + (f" extends {cls.superclass}" if cls.superclass else "")
                  + f" ({members} members)")
    return status


def _load(path: str):
    sub = load_submission(path)
    return sub


def _cmd_trace(args) -> int:
    sub = _load(args.submission)
    program = resolve_program(list(sub.units), entry_name=args.entry)
    traces = execute_program(program, _limits(args))
    doc = {"schema": "trace-set/1", "submission": sub.id,
           "entry_points": [e.signature for e in program.entry_points],
           "warnings": program.warnings,
           "traces": [t.to_doc() for t in traces]}
    payload = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        print(f"wrote {len(traces)} traces to {args.out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _cmd_graph(args) -> int:
    doc = json.loads(Path(args.trace_file).read_text(encoding="utf-8"))
    if doc.get("schema") != "trace-set/1":
        raise BsimError("expected a trace-set/1 document")
    traces = [trace_from_doc(td) for td in doc["traces"]]
    graphs = build_pidg_set(traces)
    if args.dot:
        payload = "\n".join(to_dot(g) for g in graphs) + "\n"
    else:
        payload = json.dumps({"schema": "graph-set/1",
                              "graphs": [serialize_pidg(g) for g in graphs]},
                             indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        print(f"wrote {len(graphs)} graphs to {args.out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _cmd_compare(args) -> int:
    limits = _limits(args)
    a = _load(args.a)
    b = _load(args.b)
    pa = resolve_program(list(a.units), entry_name=args.entry)
    pb = resolve_program(list(b.units), entry_name=args.entry)
    ga = build_pidg_set(execute_program(pa, limits))
    gb = build_pidg_set(execute_program(pb, limits))
    score = sim_program(ga, gb)
    print(json.dumps({"a": a.id, "b": b.id, "similarity": round(score.value, 4),
                      "graphs_a": len(ga), "graphs_b": len(gb)}, sort_keys=True))
    return EXIT_OK


def _cmd_corpus(args) -> int:
    import os

    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    matrix = compare_corpus(args.dir, _limits(args), entry_name=args.entry,
                            jobs=jobs)
    for sid, err in matrix.failures:
        print(f"skipped {sid}: {err}", file=sys.stderr)
    csv_text = matrix.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        print(f"wrote {len(matrix.ids)}x{len(matrix.ids)} matrix to {args.out}")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def _cmd_mutate(args) -> int:
    sub = _load(args.base)
    cfg = MutationConfig(level=args.level, chance=args.chance, seed=args.seed,
                         exclude_value_injecting=args.exclude_value_injecting)
    variant_units, record = mutate(list(sub.units), cfg, base_id=sub.id,
                                   variant_id=f"{sub.id}-variant")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for u in variant_units:
            (out / Path(u.path).name).write_text(u.text, encoding="utf-8")
        (out / "variant.json").write_text(
            json.dumps(record.to_doc(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        print(f"wrote variant ({len(record.applied)} applications) to {out}")
    else:
        for u in variant_units:
            if len(variant_units) > 1:
                print(f"// --- {Path(u.path).name}")
            sys.stdout.write(u.text)
    return EXIT_OK


def _experiment_inputs(paths: list[str]) -> list[tuple[str, list[SourceUnit]]]:
    out = []
    for p in paths:
        sub = load_submission(p)
        out.append((sub.id, list(sub.units)))
    return out


def _cmd_experiment(args) -> int:
    config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    limits_doc = config.get("limits", {})
    limits = ExecutorLimits(
        loop_bound=limits_doc.get("loop_bound", 3),
        recursion_bound=limits_doc.get("recursion_bound", 2),
        context_budget=limits_doc.get("context_budget", 4096))
    entry = config.get("entry", DEFAULT_ENTRY_NAME)
    if args.kind == "robustness":
        report = run_robustness(
            bases=_experiment_inputs(config["bases"]),
            levels=config.get("levels", [1, 2, 3, 4, 5]),
            chances=config.get("chances", [20.0, 40.0, 60.0]),
            counts_per_level={int(k): v for k, v in
                              config.get("counts_per_level", {}).items()},
            seed=config.get("seed", 0),
            limits=limits,
            exclude_value_injecting=config.get("exclude_value_injecting", False),
            entry_name=entry, jobs=args.jobs)
    elif args.kind == "accuracy":
        if "innocent_dir" in config:
            from .harness import discover_submissions
            innocent = [(s.id, list(s.units))
                        for s in discover_submissions(config["innocent_dir"])]
        else:
            innocent = _experiment_inputs(config["innocent"])
        report = run_accuracy(
            innocent=innocent,
            bases=_experiment_inputs(config["bases"]),
            levels=config.get("levels", [1, 2, 3, 4, 5]),
            chances=config.get("chances", [40.0, 60.0, 80.0, 100.0]),
            counts_per_level={int(k): v for k, v in
                              config.get("counts_per_level", {}).items()},
            seed=config.get("seed", 0),
            limits=limits,
            excluded_pairs=[tuple(p) for p in config.get("excluded_pairs", [])],
            entry_name=entry, jobs=args.jobs)
    else:
        source = config.get("corpus_dir") or config["corpus"]
        report = time_pairs(source, limits, entry_name=entry)
    payload = report_json(report)
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        print(f"wrote report to {args.out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
