"""Command-line interface: ``maskdist <command> ...``.

Exit status: 0 success, 1 usage or model error, 2 ``check`` found a
distance above zero, 3 a state cap was exceeded, 4 ``bench`` mismatch.
"""

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import MaskDistError, SourceError, StateExplosion
from .game import dump_game
from .gcl import parse_file
from .relations import masking_sim
from .semantics import DEFAULT_STATE_CAP, Machine, compile_program, dump_lts, restrict
from .solver import STRONG, WEAK, build_game, distance, format_value

log = logging.getLogger("maskdist")

EXIT_OK, EXIT_USAGE, EXIT_NOT_MASKING, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4
STATE_CAP_ENV = "MASKDIST_STATE_CAP"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: str = None
    impl: str = None
    mode: str = STRONG
    fmt: str = "text"
    state_cap: int = DEFAULT_STATE_CAP
    derive_nominal: bool = False


def corpus_dir():
    return Path(resources.files("maskdist") / "corpus")


def resolve_model_path(name):
    """A path on disk, or failing that the name of a bundled corpus file."""
    path = Path(name)
    if path.exists():
        return path
    bundled = corpus_dir() / name
    if bundled.exists():
        return bundled
    raise UsageError(f"no such model file: {name}")


def load_model(name, state_cap):
    return compile_program(parse_file(resolve_model_path(name)), state_cap)


def load_pair(cfg):
    """Compile the nominal and implementation systems named by ``cfg``."""
    if not cfg.spec and not cfg.derive_nominal:
        raise UsageError("--spec is required unless --derive-nominal is given")
    impl = load_model(cfg.impl, cfg.state_cap)
    if cfg.derive_nominal:
        spec = restrict(impl, impl.fault_set)
    else:
        spec = load_model(cfg.spec, cfg.state_cap)
    if spec.deadlocks:
        log.warning("nominal model has %d deadlock state(s), e.g. %s",
                    len(spec.deadlocks), spec.describe(min(spec.deadlocks)))
    return spec, impl


def make_config(args):
    cap = args.state_cap
    if cap is None:
        env = os.environ.get(STATE_CAP_ENV)
        try:
            cap = int(env) if env else DEFAULT_STATE_CAP
        except ValueError:
            raise UsageError(f"{STATE_CAP_ENV} must be an integer, got {env!r}") from None
    if cap < 1:
        raise UsageError("the state cap must be positive")
    spec = getattr(args, "spec", None)
    impl = getattr(args, "impl", None)
    derive = getattr(args, "derive_nominal", False)
    if derive and spec:
        raise UsageError("--derive-nominal computes the nominal model; do not also pass --spec")
    return RunConfig(args.command, spec, impl, WEAK if getattr(args, "weak", False) else STRONG,
                     getattr(args, "format", "text"), cap, derive)


# -- commands -------------------------------------------------------------------

def cmd_dist(args, cfg, out):
    spec, impl = load_pair(cfg)
    report = distance(spec, impl, cfg.mode, cfg.state_cap)
    if cfg.fmt == "machine":
        print(report.to_machine(), file=out)
    else:
        print(report.to_text(), file=out)
        if args.trace and report.witness is not None:
            for line in report.witness_lines():
                print("  " + line, file=out)
    return EXIT_OK


def cmd_check(args, cfg, out):
    spec, impl = load_pair(cfg)
    report = distance(spec, impl, cfg.mode, cfg.state_cap)
    if report.value == 0:
        print("MASKING: yes", file=out)
        return EXIT_OK
    print(f"MASKING: no (distance {format_value(report.value)})", file=out)
    return EXIT_NOT_MASKING


def cmd_trace(args, cfg, out):
    spec, impl = load_pair(cfg)
    report = distance(spec, impl, cfg.mode, cfg.state_cap)
    if report.witness is None:
        print("no error trace: every fault is masked", file=out)
        return EXIT_OK
    if cfg.fmt == "machine":
        print(report.to_machine(), file=out)
        return EXIT_OK
    print(f"{report.to_text()}; {report.witness.fault_count} fault(s) before the error state:",
          file=out)
    for k, line in enumerate(report.witness_lines(), 1):
        print(f"{k:4d}. {line}", file=out)
    return EXIT_OK


def cmd_stats(args, cfg, out):
    spec, impl = load_pair(cfg)
    t0 = time.perf_counter()
    game = build_game(spec, impl, cfg.mode, cfg.state_cap)
    build_ms = round((time.perf_counter() - t0) * 1000, 3)
    doc = {
        "spec_states": spec.num_states,
        "spec_edges": len(spec.edges),
        "spec_deadlocks": len(spec.deadlocks),
        "impl_states": impl.num_states,
        "impl_edges": len(impl.edges),
        "impl_deadlocks": len(impl.deadlocks),
        "fault_labels": sorted(lab.name for lab in impl.fault_set),
        "game_states": game.num_states,
        "game_edges": game.num_edges,
        "error_reachable": game.err is not None,
        "build_ms": build_ms,
    }
    if cfg.fmt == "machine":
        print(json.dumps(doc, sort_keys=True), file=out)
    else:
        for key, val in doc.items():
            if isinstance(val, list):
                val = ", ".join(val) or "-"
            print(f"{key}: {val}", file=out)
    return EXIT_OK


def cmd_export(args, cfg, out):
    if args.what == "lts":
        print(dump_lts(load_model(cfg.impl, cfg.state_cap)), end="", file=out)
        return EXIT_OK
    spec, impl = load_pair(cfg)
    if args.what == "game":
        print(dump_game(build_game(spec, impl, cfg.mode, cfg.state_cap)), end="", file=out)
        return EXIT_OK
    rel = masking_sim(spec, impl, cfg.mode)
    if rel is None:
        print("no masking simulation relates the initial states", file=out)
        return EXIT_NOT_MASKING
    print(rel.dump(), end="", file=out)
    return EXIT_OK


def cmd_simulate(args, cfg, inp, out):
    machine = Machine(parse_file(resolve_model_path(cfg.impl)))
    state = machine.initial_state()
    steps = 0
    while True:
        print(f"state: {machine.describe(state)}", file=out)
        moves = machine.enabled(state)
        if not moves:
            print("deadlock: no action is enabled", file=out)
            return EXIT_OK
        for k, (action, _) in enumerate(moves):
            tag = {"faulty": " (fault)", "internal": " (internal)"}.get(action.kind.value, "")
            print(f"  [{k}] {action.instance}.{action.label}{tag}", file=out)
        print("choose> ", end="", file=out)
        out.flush()
        line = inp.readline()
        if not line or line.strip() in ("q", "quit"):
            print("", file=out)
            print(f"stopped after {steps} step(s)", file=out)
            return EXIT_OK
        try:
            choice = int(line.strip())
            if not 0 <= choice < len(moves):
                raise ValueError
        except ValueError:
            print(f"enter a number between 0 and {len(moves) - 1}, or q", file=out)
            continue
        action, state = moves[choice]
        steps += 1
        print(f"-> {action.instance}.{action.label}", file=out)


# -- bench ----------------------------------------------------------------------

@dataclass(frozen=True)
class FixtureRow:
    model: str
    params: str
    mode: str
    expected: Fraction
    line: int = 0

    @property
    def stem(self):
        return f"{self.model}_{self.params.replace(',', '_')}"


def parse_fixtures(text, source="<fixtures>"):
    rows = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) != 4:
            raise UsageError(f"{source}:{no}: expected model;params;mode;num/den")
        model, params, mode, val = parts
        if mode not in (STRONG, WEAK):
            raise UsageError(f"{source}:{no}: mode must be strong or weak, got {mode!r}")
        try:
            expected = Fraction(val)
        except ValueError:
            raise UsageError(f"{source}:{no}: bad rational {val!r}") from None
        rows.append(FixtureRow(model, params, mode, expected, no))
    return rows


def nominal_for(corpus, stem):
    """The nominal file sharing the longest prefix of ``stem`` at an underscore boundary."""
    parts = stem.split("_")
    for k in range(len(parts), 0, -1):
        cand = corpus / ("_".join(parts[:k]) + ".nominal.gcl")
        if cand.exists():
            return cand
    raise UsageError(f"no nominal model for {stem} in {corpus}")


def run_row(row, corpus, state_cap):
    impl_path = corpus / f"{row.stem}.impl.gcl"
    if not impl_path.exists():
        raise UsageError(f"missing model file {impl_path}")
    t0 = time.perf_counter()
    impl = compile_program(parse_file(impl_path), state_cap)
    spec = compile_program(parse_file(nominal_for(corpus, row.stem)), state_cap)
    report = distance(spec, impl, row.mode, state_cap)
    seconds = time.perf_counter() - t0
    return row, report, seconds


def cmd_bench(args, cfg, out):
    corpus = Path(args.corpus) if args.corpus else corpus_dir()
    names = [args.fixtures] if args.fixtures else ["reference.txt"]
    if args.extended and not args.fixtures:
        names.append("reference_extended.txt")
    rows = []
    for name in names:
        path = Path(name) if Path(name).exists() else corpus / name
        if not path.exists():
            raise UsageError(f"no such fixture file: {name}")
        rows += parse_fixtures(path.read_text(encoding="utf-8"), str(path))
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(lambda r: run_row(r, corpus, cfg.state_cap), rows))

    print("model;params;mode;expected;value;fault_budget;states;seconds;status", file=out)
    failures = 0
    records = []
    for row, report, seconds in results:
        ok = report.value == row.expected
        failures += not ok
        value = report.value
        print(f"{row.model};{row.params};{row.mode};{row.expected.numerator}/{row.expected.denominator};"
              f"{value.numerator}/{value.denominator};{report.fault_budget or 'inf'};"
              f"{report.stats['game_states']};{seconds:.3f};{'PASS' if ok else 'FAIL'}", file=out)
        records.append({"model": row.model, "params": row.params, "mode": row.mode,
                        "expected": row.expected, "value": value, "seconds": seconds,
                        "states": report.stats["game_states"]})
    print(f"# {len(results) - failures}/{len(results)} rows match", file=out)
    if args.plot_dir:
        from .plotting import plot_bench
        for path in plot_bench(records, args.plot_dir):
            print(f"# wrote {path}", file=out)
    return EXIT_MISMATCH if failures else EXIT_OK


# -- argument parsing -----------------------------------------------------------

def _common(p, pair=True):
    if pair:
        p.add_argument("--spec", help="nominal model (.gcl)")
        p.add_argument("--derive-nominal", action="store_true",
                       help="use the implementation with its fault actions removed as nominal")
    p.add_argument("--impl", required=True, help="fault-tolerant implementation (.gcl)")
    p.add_argument("--weak", action="store_true", help="use the weak game (abstracts from τ)")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--state-cap", type=int, default=None,
                   help=f"maximum number of states (default {DEFAULT_STATE_CAP}, or ${STATE_CAP_ENV})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="maskdist", description="Masking fault-tolerance distance between two models.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="print the masking distance")
    _common(p)
    p.add_argument("--trace", action="store_true", help="also print the witness trace")
    _common(sub.add_parser("check", help="exit 0 iff the implementation is masking"))
    _common(sub.add_parser("trace", help="print a shortest error trace"))
    _common(sub.add_parser("stats", help="model and game sizes"))

    p = sub.add_parser("simulate", help="step through a model interactively")
    p.add_argument("--impl", required=True, help="model to simulate")
    p.add_argument("--state-cap", type=int, default=None, help=argparse.SUPPRESS)

    p = sub.add_parser("export", help="dump an LTS, game graph or masking relation")
    p.add_argument("what", choices=("lts", "game", "relation"))
    _common(p)

    p = sub.add_parser("bench", help="check the bundled corpus against expected values")
    p.add_argument("--corpus", help="directory holding the models (default: bundled corpus)")
    p.add_argument("--fixtures", help="fixture file, one `model;params;mode;num/den` per line")
    p.add_argument("--extended", action="store_true", help="include the large instances")
    p.add_argument("--jobs", type=int, default=1, help="rows analysed in parallel")
    p.add_argument("--plot-dir", help="write distance and runtime figures here")
    p.add_argument("--state-cap", type=int, default=None, help=argparse.SUPPRESS)
    return parser


def main(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=stderr)
    try:
        cfg = make_config(args)
        if args.command == "simulate":
            return cmd_simulate(args, cfg, stdin, stdout)
        handler = {"dist": cmd_dist, "check": cmd_check, "trace": cmd_trace,
                   "stats": cmd_stats, "export": cmd_export, "bench": cmd_bench}[args.command]
        return handler(args, cfg, stdout)
    except StateExplosion as exc:
        print(f"maskdist: {exc}", file=stderr)
        return EXIT_CAP
    except SourceError as exc:
        print(exc.format(), file=stderr)
        return EXIT_USAGE
    except (MaskDistError, UsageError, OSError) as exc:
        print(f"maskdist: {exc}", file=stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())
