"""``sdt`` command line: generate machines, enumerate pairs, learn, sample, compare, canonicalize, draw.

Reports go to stdout as ``key: value`` lines.  When a command produces a
file and ``--out`` is absent, the file goes to stdout and the report to
stderr.  Exit status: 0 success, 1 the operation failed (budget, fold
conflict, caps, search bound), 2 usage or unreadable input.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .dataset import DatasetParseError, format_dataset, parse_dataset
from .equivalence import NonConvergence, bounded_equiv, canonicalize, default_depth, isomorphic
from .learner import LearnerError, learn
from .oracle import BudgetExhausted, budgeted, machine_oracle
from .sampler import SearchBoundExceeded, components
from .strings import Alphabet, AlphabetError
from .transducer import (
    DEFAULT_PAIR_CAP,
    PairCapExceeded,
    Sdt,
    SdtError,
    enumerate_pairs,
    format_sdt,
    parse_sdt,
    random_sdt,
    to_dot,
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    max_len: int | None = None
    query_budget: int | None = None
    pair_cap: int = DEFAULT_PAIR_CAP
    depth: int | None = None
    out: Path | None = None

    def __post_init__(self):
        for name in ("max_len", "query_budget", "pair_cap", "depth"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be non-negative")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(args.seed, args.max_len, args.query_budget, args.pair_cap, args.depth, args.out)


class Report:
    def __init__(self):
        self.lines: list[str] = []

    def __setitem__(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = str(value).lower()
        elif value is None:
            value = "none"
        self.lines.append(f"{key}: {value}")

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _load_sdt(path: Path) -> Sdt:
    try:
        return parse_sdt(_read(path))
    except SdtError as e:
        raise UsageError(f"{path}: {e}") from e


def _emit(config: RunConfig, content: str, report: Report | None) -> None:
    if config.out is not None:
        config.out.write_text(content, encoding="utf-8")
        if report is not None:
            sys.stdout.write(report.text())
    else:
        sys.stdout.write(content)
        if report is not None:
            sys.stderr.write(report.text())


def _show(x: str) -> str:
    return x if x else "-"


# -- commands ----------------------------------------------------------------

def cmd_gen(args, config: RunConfig) -> int:
    if args.states < 1:
        raise UsageError("--states must be at least 1")
    try:
        G = random_sdt(
            args.states,
            Alphabet(tuple(args.inalpha)),
            Alphabet(tuple(args.outalpha)),
            args.max_out_len,
            args.max_out_set,
            config.seed,
        )
    except AlphabetError as e:
        raise UsageError(str(e)) from e
    report = Report()
    report["states"] = len(G.states)
    report["edges"] = len(G.transitions)
    report["accepting"] = len(G.accepts)
    _emit(config, format_sdt(G), report)
    return 0


def cmd_pairs(args, config: RunConfig) -> int:
    G = _load_sdt(args.machine)
    max_len = config.max_len if config.max_len is not None else len(G.states) + 2
    try:
        D = enumerate_pairs(G, max_len, config.pair_cap)
    except PairCapExceeded as e:
        print(f"error: more than {e.cap} pairs at max length {max_len}", file=sys.stderr)
        return 1
    report = Report()
    report["pairs"] = len(D)
    report["max_len"] = max_len
    _emit(config, format_dataset(D), report if config.out else None)
    return 0


def cmd_learn(args, config: RunConfig) -> int:
    target = _load_sdt(args.target)
    try:
        D = parse_dataset(_read(args.dataset), target.input_alphabet, target.output_alphabet)
    except (DatasetParseError, AlphabetError) as e:
        raise UsageError(f"{args.dataset}: {e}") from e
    inner = machine_oracle(target)
    oracle = budgeted(inner, config.query_budget) if config.query_budget is not None else inner
    report = Report()
    report["pairs"] = len(D)
    start = time.perf_counter()
    status = 0
    H = None
    try:
        H = learn(D, oracle)
    except (BudgetExhausted, LearnerError) as e:
        report["error"] = f"{type(e).__name__}: {e}"
        status = 1
    stats = inner.stats()
    report["translation_queries"] = stats.translation_queries
    report["domain_queries"] = stats.domain_queries
    report["cache_hits"] = stats.cache_hits
    report["wall_time_s"] = f"{time.perf_counter() - start:.3f}"
    if H is None:
        sys.stdout.write(report.text())
        return status
    depth = config.depth if config.depth is not None else default_depth(H, target)
    verdict = bounded_equiv(H, target, depth, config.pair_cap)
    report["states"] = len(H.states)
    report["depth"] = depth
    report["equivalent"] = verdict.equivalent
    report["counterexample"] = None if verdict.equivalent else _show(verdict.counterexample)
    _emit(config, format_sdt(H), report)
    return 0


def cmd_cs(args, config: RunConfig) -> int:
    G = _load_sdt(args.machine)
    try:
        parts = components(G, config.depth)
    except SearchBoundExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    cs = parts["n0"] | parts["n1"].pairs | parts["n2"].pairs
    report = Report()
    report["cs"] = len(cs)
    for name, part in parts.items():
        report[name] = len(part)
    _emit(config, format_dataset(cs), report)
    return 0


def cmd_equiv(args, config: RunConfig) -> int:
    G1, G2 = _load_sdt(args.first), _load_sdt(args.second)
    depth = config.depth if config.depth is not None else default_depth(G1, G2)
    try:
        verdict = bounded_equiv(G1, G2, depth, config.pair_cap)
    except PairCapExceeded as e:
        print(f"error: output sets exceed {e.cap} strings", file=sys.stderr)
        return 1
    report = Report()
    report["isomorphic"] = isomorphic(G1, G2)
    report["depth"] = depth
    report["equivalent"] = verdict.equivalent
    report["counterexample"] = None if verdict.equivalent else _show(verdict.counterexample)
    sys.stdout.write(report.text())
    return 0


def cmd_canon(args, config: RunConfig) -> int:
    G = _load_sdt(args.machine)
    try:
        result = canonicalize(G, start=config.max_len, cap=config.pair_cap)
    except (NonConvergence, PairCapExceeded, LearnerError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    report = Report()
    report["states"] = len(result.machine.states)
    report["rounds"] = result.rounds
    report["depth"] = result.depth
    report["stable"] = result.stable
    _emit(config, format_sdt(result.machine), report)
    return 0


def cmd_dot(args, config: RunConfig) -> int:
    G = _load_sdt(args.machine)
    _emit(config, to_dot(G), None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=0, help="random seed (gen)")
    shared.add_argument("--max-len", type=int, help="maximum input length (pairs; start depth for canon)")
    shared.add_argument("--query-budget", type=int, help="distinct oracle questions allowed (learn)")
    shared.add_argument("--pair-cap", type=int, default=DEFAULT_PAIR_CAP, help="enumeration guard")
    shared.add_argument("--depth", type=int, help="equivalence depth (learn, equiv) or search bound (cs)")
    shared.add_argument("--out", type=Path, help="write the produced file here instead of stdout")

    parser = argparse.ArgumentParser(prog="sdt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[shared], help="random trim machine")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--inalpha", default="ab")
    p.add_argument("--outalpha", default="AB")
    p.add_argument("--max-out-len", type=int, default=2)
    p.add_argument("--max-out-set", type=int, default=2)
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("pairs", parents=[shared], help="enumerate translation pairs")
    p.add_argument("machine", type=Path)
    p.set_defaults(run=cmd_pairs)

    p = sub.add_parser("learn", parents=[shared], help="learn from a dataset with a machine-backed oracle")
    p.add_argument("dataset", type=Path)
    p.add_argument("target", type=Path)
    p.set_defaults(run=cmd_learn)

    p = sub.add_parser("cs", parents=[shared], help="characteristic sample")
    p.add_argument("machine", type=Path)
    p.set_defaults(run=cmd_cs)

    p = sub.add_parser("equiv", parents=[shared], help="compare two machines")
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("canon", parents=[shared], help="canonical form")
    p.add_argument("machine", type=Path)
    p.set_defaults(run=cmd_canon)

    p = sub.add_parser("dot", parents=[shared], help="DOT rendering")
    p.add_argument("machine", type=Path)
    p.set_defaults(run=cmd_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args, RunConfig.from_args(args))
    except UsageError as e:
        print(f"sdt {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
