"""The game loop: robber jumps, then every cop jumps at once, until capture.

Capture is checked after both half-steps. ``run`` keeps the full per-tick
history; ``play_out`` runs the same loop without it for bulk experiments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .cops import AlgorithmOneCop, CopStrategy
from .grid import (
    Configuration,
    GridError,
    GridShape,
    Jump,
    apply_jump,
    format_position,
    jump_between,
    parse_position,
    wrap_index,
)
from .robbers import RobberStrategy

ROBBER_HALF = "robber"
COP_HALF = "cops"

TRACE_FORMAT = "gridpursuit-trace"
TRACE_VERSION = 1


class IllegalMoveError(RuntimeError):
    def __init__(self, agent: str, message: str):
        super().__init__(f"{agent}: {message}")
        self.agent = agent


class AlreadyTerminatedError(ValueError):
    pass


class EngineConsistencyError(RuntimeError):
    pass


class CaptureBoundExceeded(RuntimeError):
    """A full team of algorithm-1 cops failed to capture within n * sum(d)."""


class TraceFormatError(ValueError):
    pass


def terminating(config: Configuration) -> bool:
    return config.robber in config.cops


def capturing_cop(config: Configuration) -> Optional[int]:
    for index, cop in enumerate(config.cops):
        if cop == config.robber:
            return index
    return None


def is_favorable(
    cop_index: int,
    config_before: Configuration,
    robber_jump: Jump,
    shape: GridShape,
    rotation: Optional[int] = None,
) -> bool:
    """Whether the robber's next jump is favorable to a cop.

    ``config_before`` is the configuration at equal jump counts. The cyclic
    axis scan starts at ``rotation`` (the cop's algorithm-1 index), which
    defaults to ``cop_index``; both are reduced mod n.
    """
    n = shape.n
    cop = config_before.cops[cop_index]
    robber = config_before.robber
    if cop == robber:
        raise AlreadyTerminatedError(f"cop {cop_index} already shares the robber's node {robber}")
    i = wrap_index(cop_index if rotation is None else rotation, 0, n)
    j1 = next(j for j in range(n) if cop[wrap_index(i, j, n)] != robber[wrap_index(i, j, n)])
    excluded = {wrap_index(i, j, n) for j in range(j1)}
    return robber_jump.axis not in excluded


@dataclass(frozen=True)
class TickRecord:
    t: int
    robber_jump: Jump
    cop_jumps: Optional[tuple[Jump, ...]]
    after_robber: Configuration
    after_cops: Optional[Configuration]
    capture_half: Optional[str] = None
    capture_cop: Optional[int] = None

    @property
    def captured(self) -> bool:
        return self.capture_half is not None


@dataclass(frozen=True)
class Outcome:
    captured: bool
    robber_jumps: int
    cop: Optional[int] = None
    half_step: Optional[str] = None

    def describe(self) -> str:
        if self.captured and self.robber_jumps == 0:
            return f"captured at the start: cop {self.cop} shares the robber's node"
        if self.captured:
            return f"captured after {self.robber_jumps} robber jumps by cop {self.cop} ({self.half_step} half-step)"
        return f"evaded: tick cap of {self.robber_jumps} robber jumps reached"


@dataclass(frozen=True)
class GameTrace:
    shape: GridShape
    initial: Configuration
    records: tuple[TickRecord, ...]
    outcome: Outcome
    cop_strategies: tuple[str, ...] = ()
    robber_strategy: str = ""
    seed: Optional[int] = None

    def configurations(self) -> list[Configuration]:
        """Equal-jump-count configurations, starting with the initial one."""
        configs = [self.initial]
        configs.extend(r.after_cops for r in self.records if r.after_cops is not None)
        return configs


def _as_jump(move, origin, shape: GridShape, agent: str) -> Jump:
    if isinstance(move, Jump):
        jump = move
    elif isinstance(move, tuple) and len(move) == shape.n:
        try:
            jump = jump_between(origin, move)
        except GridError as exc:
            raise IllegalMoveError(agent, str(exc)) from None
    else:
        raise IllegalMoveError(agent, f"strategy returned {move!r}, which is not a jump; every agent must move")
    return jump


def _move(origin, move, shape: GridShape, agent: str):
    jump = _as_jump(move, origin, shape, agent)
    try:
        return jump, apply_jump(origin, jump, shape)
    except GridError as exc:
        raise IllegalMoveError(agent, str(exc)) from None


def cop_batch(config: Configuration, cops: Sequence[CopStrategy], shape: GridShape, tick: int):
    """Query every cop against the same post-robber configuration, then move them all."""
    jumps = []
    new_cops = []
    for index, strategy in enumerate(cops):
        cop = config.cops[index]
        move = strategy.next_jump(index, config, shape, tick)
        if move is None:
            raise EngineConsistencyError(
                f"cop {index} ({strategy.name}) reports a capture the engine did not detect"
            )
        jump, moved = _move(cop, move, shape, f"cop {index} ({strategy.name})")
        jumps.append(jump)
        new_cops.append(moved)
    return tuple(jumps), Configuration(tuple(new_cops), config.robber)


def step(
    state: Configuration,
    robber: RobberStrategy,
    cops: Sequence[CopStrategy],
    tick: int,
    shape: GridShape,
) -> TickRecord:
    if terminating(state):
        raise AlreadyTerminatedError("cannot step from a terminating configuration")
    if len(cops) != len(state.cops):
        raise ValueError(f"{len(cops)} cop strategies for {len(state.cops)} cops")
    robber_jump, robber_pos = _move(state.robber, robber.next_jump(state, shape, tick), shape, f"robber ({robber.name})")
    after_robber = Configuration(state.cops, robber_pos)
    hit = capturing_cop(after_robber)
    if hit is not None:
        return TickRecord(tick, robber_jump, None, after_robber, None, ROBBER_HALF, hit)
    cop_jumps, after_cops = cop_batch(after_robber, cops, shape, tick)
    hit = capturing_cop(after_cops)
    return TickRecord(tick, robber_jump, cop_jumps, after_robber, after_cops, COP_HALF if hit is not None else None, hit)


def is_full_algorithm_one_team(cops: Sequence[CopStrategy], shape: GridShape) -> bool:
    indices = sorted(c.i for c in cops if isinstance(c, AlgorithmOneCop))
    return len(cops) == shape.n and indices == list(range(shape.n))


def default_tick_cap(shape: GridShape, cops: Sequence[CopStrategy]) -> int:
    if is_full_algorithm_one_team(cops, shape):
        return shape.n * shape.dim_sum + 8
    return 10 * shape.dim_sum


def _check_default_cap(outcome: Outcome, shape: GridShape, cops, cap_given: bool) -> None:
    if cap_given or outcome.captured or not is_full_algorithm_one_team(cops, shape):
        return
    raise CaptureBoundExceeded(
        f"{shape.n} algorithm-1 cops did not capture within {outcome.robber_jumps} robber jumps on {shape}"
    )


def run(
    initial: Configuration,
    robber: RobberStrategy,
    cops: Sequence[CopStrategy],
    shape: GridShape,
    tick_cap: Optional[int] = None,
    seed: Optional[int] = None,
) -> GameTrace:
    initial = initial.validate(shape)
    cap_given = tick_cap is not None
    cap = tick_cap if cap_given else default_tick_cap(shape, cops)
    if cap < 1:
        raise ValueError(f"tick cap must be positive, got {cap}")
    records: list[TickRecord] = []
    hit = capturing_cop(initial)
    if hit is not None:
        outcome = Outcome(True, 0, hit, None)
    else:
        state = initial
        outcome = Outcome(False, cap)
        for t in range(cap):
            record = step(state, robber, cops, t, shape)
            records.append(record)
            if record.captured:
                outcome = Outcome(True, t + 1, record.capture_cop, record.capture_half)
                break
            state = record.after_cops
    _check_default_cap(outcome, shape, cops, cap_given)
    return GameTrace(
        shape,
        initial,
        tuple(records),
        outcome,
        tuple(c.name for c in cops),
        robber.name,
        seed,
    )


def play_out(
    initial: Configuration,
    robber: RobberStrategy,
    cops: Sequence[CopStrategy],
    shape: GridShape,
    tick_cap: Optional[int] = None,
) -> Outcome:
    """Same game as ``run`` but keeps no history; the hot loop for experiments."""
    cap_given = tick_cap is not None
    cap = tick_cap if cap_given else default_tick_cap(shape, cops)
    state = initial
    hit = capturing_cop(state)
    if hit is not None:
        return Outcome(True, 0, hit, None)
    outcome = Outcome(False, cap)
    for t in range(cap):
        _, robber_pos = _move(state.robber, robber.next_jump(state, shape, t), shape, f"robber ({robber.name})")
        state = Configuration(state.cops, robber_pos)
        if robber_pos in state.cops:
            outcome = Outcome(True, t + 1, state.cops.index(robber_pos), ROBBER_HALF)
            break
        _, state = cop_batch(state, cops, shape, t)
        if robber_pos in state.cops:
            outcome = Outcome(True, t + 1, state.cops.index(robber_pos), COP_HALF)
            break
    _check_default_cap(outcome, shape, cops, cap_given)
    return outcome


# -- trace files ------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def trace_lines(trace: GameTrace) -> Iterable[str]:
    yield _dump(
        {
            "kind": "header",
            "format": TRACE_FORMAT,
            "version": TRACE_VERSION,
            "shape": str(trace.shape),
            "m": trace.initial.m,
            "cops": [format_position(c) for c in trace.initial.cops],
            "robber": format_position(trace.initial.robber),
            "cop_strategies": list(trace.cop_strategies),
            "robber_strategy": trace.robber_strategy,
            "seed": trace.seed,
        }
    )
    for r in trace.records:
        capture = None if r.capture_half is None else {"half": r.capture_half, "cop": r.capture_cop}
        yield _dump(
            {
                "kind": "tick",
                "t": r.t,
                "robber": str(r.robber_jump),
                "cops": None if r.cop_jumps is None else [str(j) for j in r.cop_jumps],
                "capture": capture,
            }
        )
    o = trace.outcome
    yield _dump(
        {
            "kind": "outcome",
            "result": "captured" if o.captured else "evaded",
            "robber_jumps": o.robber_jumps,
            "cop": o.cop,
            "half_step": o.half_step,
        }
    )


def dumps_trace(trace: GameTrace) -> str:
    return "\n".join(trace_lines(trace)) + "\n"


def write_trace(trace: GameTrace, path: str | Path) -> None:
    Path(path).write_text(dumps_trace(trace), encoding="utf-8")


def loads_trace(text: str) -> GameTrace:
    """Parse a trace file, rebuilding every configuration by replaying the jumps."""
    try:
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"trace line is not valid JSON: {exc}") from None
    if len(rows) < 2 or rows[0].get("kind") != "header" or rows[-1].get("kind") != "outcome":
        raise TraceFormatError("trace needs a header line, tick lines and an outcome line")
    header, ticks, footer = rows[0], rows[1:-1], rows[-1]
    if header.get("format") != TRACE_FORMAT or header.get("version") != TRACE_VERSION:
        raise TraceFormatError(f"unsupported trace format {header.get('format')!r} v{header.get('version')}")
    try:
        shape = GridShape.parse(header["shape"])
        initial = Configuration(
            tuple(parse_position(c) for c in header["cops"]), parse_position(header["robber"])
        ).validate(shape)
        records = []
        state = initial
        for expected_t, row in enumerate(ticks):
            if row.get("kind") != "tick" or row["t"] != expected_t:
                raise TraceFormatError(f"tick line {expected_t} is out of sequence")
            robber_jump = Jump.parse(row["robber"])
            after_robber = Configuration(state.cops, apply_jump(state.robber, robber_jump, shape))
            capture = row["capture"]
            half = capture["half"] if capture else None
            cop = capture["cop"] if capture else None
            if row["cops"] is None:
                records.append(TickRecord(row["t"], robber_jump, None, after_robber, None, half, cop))
                continue
            cop_jumps = tuple(Jump.parse(j) for j in row["cops"])
            after_cops = Configuration(
                tuple(apply_jump(c, j, shape) for c, j in zip(after_robber.cops, cop_jumps)), after_robber.robber
            )
            records.append(TickRecord(row["t"], robber_jump, cop_jumps, after_robber, after_cops, half, cop))
            state = after_cops
        outcome = Outcome(
            footer["result"] == "captured", footer["robber_jumps"], footer.get("cop"), footer.get("half_step")
        )
    except (KeyError, TypeError, GridError) as exc:
        raise TraceFormatError(f"malformed trace: {exc}") from None
    return GameTrace(
        shape,
        initial,
        tuple(records),
        outcome,
        tuple(header.get("cop_strategies", ())),
        header.get("robber_strategy", ""),
        header.get("seed"),
    )


def read_trace(path: str | Path) -> GameTrace:
    return loads_trace(Path(path).read_text(encoding="utf-8"))
