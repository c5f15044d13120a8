"""Command-line entry point.

Subcommands: simulate, experiment, verify, enumerate, play.
Exit codes: 0 success or all claims hold, 1 runtime failure or a violated
claim, 2 usage error, 3 oracle search infeasible.

Every subcommand also accepts ``--config FILE`` with ``key = value`` lines
whose keys are the long flag names; flags given on the command line win.
Output files default to ``$GRIDPURSUIT_OUT_DIR`` (or the working directory).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from .cops import parse_cop_strategy
from .engine import (
    CaptureBoundExceeded,
    EngineConsistencyError,
    IllegalMoveError,
    run,
    step,
    write_trace,
)
from .experiments import (
    ExperimentSpec,
    random_initial_configuration,
    run_experiment,
    theorem4_frequency,
)
from .grid import (
    Configuration,
    GridError,
    GridShape,
    Jump,
    apply_jump,
    format_position,
    jump_between,
    parse_position,
)
from .robbers import (
    EvaderInapplicableError,
    InteractiveRobber,
    RobberQuit,
    ScriptExhaustedError,
    parse_robber_strategy,
)
from .seeding import derive_trial_seed
from .verification import (
    DEFAULT_NODE_BUDGET,
    ClaimReport,
    OracleInfeasibleError,
    check_lemma3_corpus,
    check_random_traces,
    check_theorem1,
    check_theorem2,
    check_theorem3_and_5,
    check_theorem4,
    enumerate_parity_fraction,
    theorem5_constant,
)

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
OUT_DIR_ENV = "GRIDPURSUIT_OUT_DIR"

CLAIMS = ("lemma1", "lemma3", "theorem1", "theorem2", "theorem3", "theorem4")
DEFAULT_SHAPES = {
    "lemma1": "3x3,10x10,4x4x4",
    "lemma3": "3x3,2x2x2,6x5",
    "theorem1": "3x3,2x2x2",
    "theorem2": "2x2,2x3,3x3,2x2x2",
    "theorem3": "4x4,5x5,6x6",
    "theorem4": "2x2,3x3,10x10",
}


class UsageError(Exception):
    pass


def _out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def _shape(text: str) -> GridShape:
    try:
        return GridShape.parse(text)
    except GridError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _shapes(text: str) -> list[GridShape]:
    return [_shape(part) for part in text.split(",") if part.strip()]


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _positions(values: Optional[Sequence[str]]) -> Optional[list]:
    if not values:
        return None
    out = []
    for value in values:
        out.extend(parse_position(part) for part in value.split(";") if part.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridpursuit", description="Cops and robber on n-dimensional grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value file mirroring the long flags")
        return p

    sim = common(sub.add_parser("simulate", help="run one game and write its trace"))
    sim.add_argument("--shape", type=_shape, required=True)
    sim.add_argument("--cops", default=None, help="comma-separated cop strategies, e.g. alg1:0,alg1:1")
    sim.add_argument("--robber", default="greedy3")
    sim.add_argument("--init-cops", action="append", help="cop start(s), e.g. 0,0 or '0,0;2,2'")
    sim.add_argument("--init-robber")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--cap", type=_positive)
    sim.add_argument("--trace", help="trace output path")

    exp = common(sub.add_parser("experiment", help="Monte Carlo run from uniform random starts"))
    exp.add_argument("--shape", type=_shape, required=True)
    exp.add_argument("--cops", default=None)
    exp.add_argument("--robber", default="greedy3")
    exp.add_argument("--trials", type=_positive, default=10_000)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--cap", type=_positive)
    exp.add_argument("--workers", type=_positive, default=1)
    exp.add_argument("--csv", help="per-trial CSV path")
    exp.add_argument("--summary", help="summary path")

    ver = common(sub.add_parser("verify", help="check the capture and evasion claims"))
    ver.add_argument("--claim", choices=CLAIMS + ("all",), default="all")
    ver.add_argument("--shapes", "--shape", dest="shapes", type=_shapes)
    ver.add_argument("--horizon", type=_positive, default=1000)
    ver.add_argument("--node-budget", type=_positive, default=DEFAULT_NODE_BUDGET)
    ver.add_argument("--random-traces", type=_positive, default=1000)
    ver.add_argument("--trials", type=_positive, default=10_000, help="Monte Carlo trials for theorem4")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--out-dir", help="directory for reports and witness traces")

    enum = common(sub.add_parser("enumerate", help="exact fraction of even-distance starts"))
    enum.add_argument("--shape", type=_shape, required=True)

    play = common(sub.add_parser("play", help="play the robber in the terminal"))
    play.add_argument("--shape", type=_shape, required=True)
    play.add_argument("--cops", default=None)
    play.add_argument("--init-cops", action="append")
    play.add_argument("--init-robber")
    play.add_argument("--seed", type=int, default=0)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    config = pre.parse_known_args(argv)[0].config
    subparsers = parser._subparsers._group_actions[0].choices
    if not config or not argv or argv[0] not in subparsers:
        return parser.parse_args(argv)
    command = argv[0]
    subparser = subparsers[command]
    by_flag = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                by_flag[opt[2:]] = action
    extra = []
    try:
        lines = Path(config).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in by_flag or key == "config":
            parser.error(f"{config}:{lineno}: unknown config key {key!r}")
        extra += [f"--{key}", value]
    # Config values go first so explicit flags override them.
    return parser.parse_args([command, *extra, *argv[1:]])


def _cop_names(text: Optional[str], shape: GridShape, m: Optional[int] = None) -> list[str]:
    """Cop strategy names; without ``--cops`` one algorithm-1 cop per start given, else a full team."""
    if text is None:
        return [f"alg1:{i % shape.n}" for i in range(shape.n if m is None else m)]
    return [part.strip() for part in text.split(",") if part.strip()]


def _initial(args, shape: GridShape, m: int) -> Configuration:
    cops = _positions(args.init_cops)
    robber = parse_position(args.init_robber) if args.init_robber else None
    if cops is None and robber is None:
        return random_initial_configuration(shape, m, derive_trial_seed(args.seed, 0))
    if cops is None or robber is None:
        raise UsageError("--init-cops and --init-robber must be given together")
    if len(cops) != m:
        raise UsageError(f"{len(cops)} cop positions for {m} cop strategies")
    try:
        return Configuration(tuple(cops), robber).validate(shape)
    except GridError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args, out: Callable[[str], None]) -> int:
    shape = args.shape
    starts = _positions(args.init_cops)
    names = _cop_names(args.cops, shape, None if starts is None else len(starts))
    cops = [parse_cop_strategy(name) for name in names]
    robber = parse_robber_strategy(args.robber)
    for strategy in [*cops, robber]:
        strategy.reseed(derive_trial_seed(args.seed, 0))
    initial = _initial(args, shape, len(cops))
    trace = run(initial, robber, cops, shape, args.cap, seed=args.seed)
    path = Path(args.trace) if args.trace else _out_dir() / "trace.jsonl"
    write_trace(trace, path)
    out(f"{trace.outcome.describe()}; trace written to {path}")
    return EXIT_OK


def cmd_experiment(args, out: Callable[[str], None]) -> int:
    csv_path = Path(args.csv) if args.csv else _out_dir() / "trials.csv"
    summary_path = Path(args.summary) if args.summary else _out_dir() / "summary.json"
    spec = ExperimentSpec(
        args.shape,
        tuple(_cop_names(args.cops, args.shape)),
        args.robber,
        args.trials,
        args.seed,
        args.cap,
        csv_path,
        summary_path,
    )
    summary = run_experiment(spec, workers=args.workers)
    mean = "n/a" if summary.mean is None else f"{summary.mean:.4f}"
    out(
        f"{spec.trials} trials on {spec.shape}: {summary.captures} captured, {summary.evasions} evaded, "
        f"mean robber jumps {mean}; summary in {summary_path}, trials in {csv_path}"
    )
    return EXIT_OK


def _verify_claim(claim: str, args) -> list[ClaimReport]:
    shapes = args.shapes or _shapes(DEFAULT_SHAPES[claim])
    if claim == "lemma1":
        return [check_random_traces(shapes, args.random_traces, args.seed)]
    if claim == "lemma3":
        return [check_lemma3_corpus(shapes, max(1, args.random_traces // len(shapes)), args.seed, args.node_budget)]
    if claim == "theorem1":
        return [check_theorem1(s, s.n - 1, args.horizon, seed=args.seed) for s in shapes]
    if claim == "theorem2":
        return [check_theorem2(s, args.node_budget) for s in shapes]
    if claim == "theorem3":
        c = theorem5_constant([shapes[0]], args.node_budget)
        reports = [check_theorem3_and_5(s, c, args.node_budget) for s in shapes]
        for r in reports:
            r.stats["c_from"] = str(shapes[0])
        return reports
    if claim == "theorem4":
        reports = [check_theorem4(s) for s in shapes]
        for s, r in zip(shapes, reports):
            if s.dims == (10, 10):
                freq = theorem4_frequency(s, args.trials, args.seed)
                r.stats.update(
                    capture_fraction=freq.capture_fraction,
                    standard_error=freq.standard_error,
                    z_from_half=freq.z_from_half,
                    trials=freq.trials,
                )
        return reports
    raise UsageError(f"unknown claim {claim!r}")


def cmd_verify(args, out: Callable[[str], None]) -> int:
    out_dir = Path(args.out_dir) if args.out_dir else _out_dir()
    claims = CLAIMS if args.claim == "all" else (args.claim,)
    failed = False
    lines = []
    for claim in claims:
        for k, report in enumerate(_verify_claim(claim, args)):
            witness_path = None
            if report.verdict == "violated":
                failed = True
                if report.witness is not None:
                    out_dir.mkdir(parents=True, exist_ok=True)
                    witness_path = str(out_dir / f"witness-{report.claim}-{k}.jsonl")
                    write_trace(report.witness, witness_path)
            line = report.to_text(witness_path)
            lines.append(line)
            out(line)
    if args.out_dir:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
        (Path(args.out_dir) / "verify-report.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_RUNTIME if failed else EXIT_OK


def cmd_enumerate(args, out: Callable[[str], None]) -> int:
    fraction = enumerate_parity_fraction(args.shape)
    note = "" if fraction == Fraction(1, 2) else " (differs from 1/2)"
    out(f"{args.shape}: even-distance start fraction = {fraction}{note}")
    return EXIT_OK


def render(config: Configuration, shape: GridShape) -> str:
    """Text board for 1-D and 2-D grids; coordinate listing otherwise."""
    if shape.n > 2:
        lines = [f"robber {format_position(config.robber)}"]
        lines += [f"cop {i} {format_position(c)}" for i, c in enumerate(config.cops)]
        return "\n".join(lines)
    rows, cols = (1, shape.dims[0]) if shape.n == 1 else shape.dims
    lines = []
    for r in range(rows):
        cells = []
        for c in range(cols):
            p = (c,) if shape.n == 1 else (r, c)
            here = [str(i) for i, cop in enumerate(config.cops) if cop == p]
            if p == config.robber:
                cells.append("X" if here else "R")
            elif here:
                cells.append(here[0] if len(here) == 1 else "*")
            else:
                cells.append(".")
        lines.append(" ".join(cells))
    return "\n".join(lines)


def play_game(
    shape: GridShape,
    cops,
    initial: Configuration,
    read_line: Callable[[str], str],
    out: Callable[[str], None],
) -> int:
    """Human robber against strategy cops. Moves: ``axis:+1``, ``axis:-1``, a node, or ``q``."""

    def ask(config, shape, tick):
        while True:
            try:
                text = read_line(f"tick {tick} move> ").strip()
            except EOFError:
                return None
            if text.lower() in ("q", "quit", "exit"):
                return None
            try:
                jump = Jump.parse(text) if ":" in text else None
                if jump is None:
                    target = parse_position(text)
                    jump = jump_between(config.robber, target)
                apply_jump(config.robber, jump, shape)
                return jump
            except GridError as exc:
                out(f"illegal move ({exc}); try e.g. 0:+1, 1:-1 or a neighboring node")

    robber = InteractiveRobber(ask)
    state = initial
    out(render(state, shape))
    if state.robber in state.cops:
        out("captured before the first move")
        return EXIT_OK
    tick = 0
    while True:
        try:
            record = step(state, robber, cops, tick, shape)
        except RobberQuit:
            out(f"robber quit after {tick} jumps")
            return EXIT_OK
        if record.captured:
            out(render(record.after_cops or record.after_robber, shape))
            how = "ran into" if record.capture_half == "robber" else "was caught by"
            out(f"captured: robber {how} cop {record.capture_cop} after {tick + 1} jumps")
            return EXIT_OK
        state = record.after_cops
        tick += 1
        out(render(state, shape))


def cmd_play(args, out: Callable[[str], None], read_line: Optional[Callable[[str], str]] = None) -> int:
    shape = args.shape
    starts = _positions(args.init_cops)
    cops = [parse_cop_strategy(name) for name in _cop_names(args.cops, shape, None if starts is None else len(starts))]
    initial = _initial(args, shape, len(cops))
    return play_game(shape, cops, initial, read_line or input, out)


# Checked before the usage errors: some of these subclass ValueError.
RUNTIME_ERRORS = (
    IllegalMoveError,
    CaptureBoundExceeded,
    EngineConsistencyError,
    EvaderInapplicableError,
    ScriptExhaustedError,
    OSError,
)

COMMANDS = {
    "simulate": cmd_simulate,
    "experiment": cmd_experiment,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
    "play": cmd_play,
}


def main(argv: Optional[Sequence[str]] = None, out: Callable[[str], None] = print) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except OracleInfeasibleError as exc:
        print(f"gridpursuit {args.command}: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except RUNTIME_ERRORS as exc:
        print(f"gridpursuit {args.command}: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (UsageError, ValueError) as exc:
        print(f"gridpursuit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

if __name__ == "__main__":
    sys.exit(main())
