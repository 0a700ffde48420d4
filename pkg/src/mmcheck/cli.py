"""Command-line front-end.

One binary, subcommand style:

    mmcheck check  <trace.mmh> --model sc [--witness] [--stats] [--max-k N]
    mmcheck oracle <trace.mmh> --model sc [--oracle-mode total|store] ...
    mmcheck gen sat --variant sc|relaxed <file.cnf> [-o out.mmh]
    mmcheck gen random --model sc --threads N --events N --vars N --seed S
    mmcheck mutate --seed S <trace.mmh> [-o out.mmh]

Exit codes are the API: 0 consistent, 1 inconsistent, 2 usage/parse/model
error, 3 resource bound exceeded.  Machine-readable output goes to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from .errors import (
    KTooLargeError,
    KTooLargeForOracleError,
    MmcheckError,
    SearchSpaceTooLargeError,
)
from .events import History
from .models import MODELS, get_model
from .oracle import oracle_store, oracle_total
from .reduction import parse_dimacs, sat_to_history_relaxed, sat_to_history_sc
from .simgen import SIMULATED_MODELS, generate_program, mutate, simulate
from .solver import DEFAULT_MAX_K, Verdict, solve
from .trace import format_history, parse_history

EXIT_CONSISTENT = 0
EXIT_INCONSISTENT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class CheckReport:
    """Line-oriented `key: value` report for check/oracle runs."""

    verdict: Verdict
    model: str
    h: History
    elapsed_ms: float
    show_witness: bool
    show_stats: bool

    def lines(self) -> list[str]:
        out = [
            f"verdict: {self.verdict.outcome.value}",
            f"model: {self.model}",
            f"k: {self.h.k}",
            f"n: {self.h.n}",
        ]
        if self.show_witness:
            if self.verdict.consistent:
                refs = " < ".join(self.h.ref(w) for w in self.verdict.witness)
                out.append(f"tw: {refs}")
            elif self.verdict.diagnostics:
                out.append(f"diagnostics: {self.verdict.diagnostics}")
        if self.show_stats:
            stats = self.verdict.stats
            if stats is not None:
                out.append(f"subsets: {stats.subsets_evaluated}")
                out.append(f"graphs: {stats.graphs_built}")
                out.append(f"kahn: {stats.kahn_runs}")
            out.append(f"elapsed_ms: {self.elapsed_ms:.1f}")
        return out


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_report(report: CheckReport) -> int:
    print("\n".join(report.lines()))
    return EXIT_CONSISTENT if report.verdict.consistent else EXIT_INCONSISTENT


def cmd_check(args: argparse.Namespace) -> int:
    h = parse_history(_read_text(args.trace))
    spec = get_model(args.model)
    start = time.perf_counter()
    verdict = solve(h, spec, max_k=args.max_k)
    elapsed = (time.perf_counter() - start) * 1000.0
    return _emit_report(
        CheckReport(verdict, spec.name, h, elapsed, args.witness, args.stats)
    )


def cmd_oracle(args: argparse.Namespace) -> int:
    h = parse_history(_read_text(args.trace))
    spec = get_model(args.model)
    decider = oracle_total if args.oracle_mode == "total" else oracle_store
    start = time.perf_counter()
    verdict = decider(h, spec)
    elapsed = (time.perf_counter() - start) * 1000.0
    return _emit_report(
        CheckReport(verdict, spec.name, h, elapsed, args.witness, args.stats)
    )


def cmd_gen_sat(args: argparse.Namespace) -> int:
    cnf = parse_dimacs(_read_text(args.cnf))
    if args.variant == "sc":
        h = sat_to_history_sc(cnf)
    else:
        h = sat_to_history_relaxed(cnf)
    _write_output(format_history(h), args.output)
    return EXIT_CONSISTENT


def cmd_gen_random(args: argparse.Namespace) -> int:
    prog = generate_program(
        args.threads, args.events, args.vars, args.seed
    )
    h = simulate(prog, args.model, args.seed)
    _write_output(format_history(h), args.output)
    return EXIT_CONSISTENT


def cmd_mutate(args: argparse.Namespace) -> int:
    h = parse_history(_read_text(args.trace))
    mutated = mutate(h, args.seed)
    _write_output(format_history(mutated, explicit_rf=True), args.output)
    return EXIT_CONSISTENT


def _model_arg(value: str) -> str:
    return value.lower()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmcheck",
        description="Consistency checking of shared-memory traces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_check_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("trace", help="trace file (.mmh)")
        p.add_argument(
            "--model",
            required=True,
            type=_model_arg,
            choices=sorted(MODELS),
            help="memory model to check against",
        )
        p.add_argument(
            "--witness",
            action="store_true",
            help="print the write order (or failure diagnostics)",
        )
        p.add_argument(
            "--stats", action="store_true", help="print search statistics"
        )

    p_check = sub.add_parser("check", help="run the subset solver")
    add_check_flags(p_check)
    p_check.add_argument(
        "--max-k",
        type=int,
        default=DEFAULT_MAX_K,
        help=f"write-count cap (default {DEFAULT_MAX_K})",
    )
    p_check.set_defaults(func=cmd_check)

    p_oracle = sub.add_parser("oracle", help="run a brute-force decider")
    add_check_flags(p_oracle)
    p_oracle.add_argument(
        "--oracle-mode",
        choices=("total", "store"),
        default="total",
        help="enumerate total write orders or per-variable store orders",
    )
    p_oracle.set_defaults(func=cmd_oracle)

    p_gen = sub.add_parser("gen", help="generate traces")
    gen_sub = p_gen.add_subparsers(dest="generator", required=True)

    p_sat = gen_sub.add_parser("sat", help="compile a 3-CNF formula")
    p_sat.add_argument("cnf", help="DIMACS CNF file")
    p_sat.add_argument(
        "--variant",
        choices=("sc", "relaxed"),
        default="sc",
        help="strict-model or buffer-proof construction",
    )
    p_sat.add_argument("-o", "--output", default=None)
    p_sat.set_defaults(func=cmd_gen_sat)

    p_rand = gen_sub.add_parser("random", help="simulate a random program")
    p_rand.add_argument(
        "--model",
        required=True,
        type=_model_arg,
        choices=SIMULATED_MODELS,
    )
    p_rand.add_argument("--threads", type=int, default=2)
    p_rand.add_argument(
        "--events", type=int, default=3, help="events per thread"
    )
    p_rand.add_argument("--vars", type=int, default=2)
    p_rand.add_argument("--seed", type=int, default=0)
    p_rand.add_argument("-o", "--output", default=None)
    p_rand.set_defaults(func=cmd_gen_random)

    p_mut = sub.add_parser("mutate", help="rewire one read's writer")
    p_mut.add_argument("trace", help="trace file (.mmh)")
    p_mut.add_argument("--seed", type=int, default=0)
    p_mut.add_argument("-o", "--output", default=None)
    p_mut.set_defaults(func=cmd_mutate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        KTooLargeError,
        KTooLargeForOracleError,
        SearchSpaceTooLargeError,
    ) as exc:
        print(f"mmcheck: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MmcheckError, OSError) as exc:
        print(f"mmcheck: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
