"""Robber strategies.

A robber strategy sees the full configuration at equal jump counts and
returns a ``Jump`` (or an adjacent node). Staying put is never an option.
"""

from __future__ import annotations

import math
import random
from pathlib import Path
from typing import Callable, Optional, Sequence

from .seeding import splitmix64_mix
from .grid import Configuration, GridShape, Jump, Position, manhattan, neighbor_jumps


class EvaderInapplicableError(ValueError):
    pass


class ScriptExhaustedError(RuntimeError):
    pass


class RobberQuit(Exception):
    """Raised by an interactive robber when the player quits."""


def sum_squared_euclidean(candidate: Position, cops: Sequence[Position]) -> int:
    total = 0
    for c in cops:
        for a, b in zip(candidate, c):
            total += (a - b) * (a - b)
    return total


def sum_manhattan(candidate: Position, cops: Sequence[Position]) -> int:
    total = 0
    for c in cops:
        for a, b in zip(candidate, c):
            total += a - b if a > b else b - a
    return total


def sum_euclidean(candidate: Position, cops: Sequence[Position]) -> float:
    return sum(math.dist(candidate, c) for c in cops)


METRICS: dict[str, Callable[[Position, Sequence[Position]], float]] = {
    "greedy1": sum_squared_euclidean,
    "greedy2": sum_manhattan,
    "greedy3": sum_euclidean,
}

# Relative tolerance under which two sum-of-root scores count as tied.
EUCLIDEAN_REL_TOL = 1e-12


def greedy_next(metric: str, config: Configuration, shape: GridShape) -> Jump:
    """Jump to the neighbor maximizing ``metric`` summed over all cops.

    Ties go to the first candidate in neighbor order.
    """
    score = METRICS[metric]
    inexact = metric == "greedy3"
    best_jump = None
    best = None
    for jump, q in neighbor_jumps(config.robber, shape):
        value = score(q, config.cops)
        if best is None:
            best_jump, best = jump, value
        elif value > best and not (inexact and math.isclose(value, best, rel_tol=EUCLIDEAN_REL_TOL)):
            best_jump, best = jump, value
    return best_jump


def parity_evader_next(config: Configuration, shape: GridShape, mode: str = "maxmin") -> Jump:
    """Step to a neighbor no cop occupies, keeping every cop at odd distance.

    With fewer cops than axes such a neighbor always exists. ``mode="first"``
    takes the first free neighbor; ``"maxmin"`` prefers the free neighbor
    farthest from its nearest cop.
    """
    n, m = shape.n, len(config.cops)
    if m >= n:
        raise EvaderInapplicableError(f"parity evader needs fewer cops than axes, got {m} cops for n = {n}")
    for index, cop in enumerate(config.cops):
        if manhattan(cop, config.robber) % 2 == 0:
            raise EvaderInapplicableError(f"cop {index} at {cop} is at even distance from the robber")
    occupied = set(config.cops)
    best_jump = None
    best = -1
    for jump, q in neighbor_jumps(config.robber, shape):
        if q in occupied:
            continue
        if mode == "first":
            return jump
        nearest = min(manhattan(q, c) for c in config.cops)
        if nearest > best:
            best_jump, best = jump, nearest
    if best_jump is None:
        raise EvaderInapplicableError(f"no free neighbor around {config.robber}")
    return best_jump


def scripted_next(script: Sequence[Jump], tick: int) -> Jump:
    if not 0 <= tick < len(script):
        raise ScriptExhaustedError(f"script has {len(script)} jumps, asked for jump {tick}")
    return script[tick]


class RobberStrategy:
    name: str = "robber"
    memoryless: bool = True

    def next_jump(self, config: Configuration, shape: GridShape, tick: int):
        raise NotImplementedError

    def reseed(self, trial_seed: int) -> None:
        pass

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class GreedyRobber(RobberStrategy):
    def __init__(self, metric: str):
        if metric not in METRICS:
            raise ValueError(f"unknown greedy metric {metric!r}")
        self.metric = metric
        self.name = metric

    def next_jump(self, config, shape, tick):
        return greedy_next(self.metric, config, shape)


class ParityEvader(RobberStrategy):
    def __init__(self, mode: str = "maxmin"):
        if mode not in ("maxmin", "first"):
            raise ValueError(f"unknown evader mode {mode!r}")
        self.mode = mode
        self.name = "evader" if mode == "maxmin" else "evader:first"

    def next_jump(self, config, shape, tick):
        return parity_evader_next(config, shape, self.mode)


class ScriptedRobber(RobberStrategy):
    memoryless = False

    def __init__(self, script: Sequence[Jump], name: str = "scripted"):
        self.script = list(script)
        self.name = name

    def next_jump(self, config, shape, tick):
        return scripted_next(self.script, tick)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedRobber":
        jumps = [Jump.parse(line) for line in Path(path).read_text().split() if line.strip()]
        return cls(jumps, name=f"scripted:{path}")


class RandomRobber(RobberStrategy):
    memoryless = False

    def __init__(self, seed: int):
        self.seed = seed
        self.name = f"random:{seed}"
        self._rng = random.Random(seed)

    def next_jump(self, config, shape, tick):
        options = neighbor_jumps(config.robber, shape)
        return options[self._rng.randrange(len(options))][0]

    def reseed(self, trial_seed):
        self._rng.seed(splitmix64_mix(trial_seed ^ self.seed))


class InteractiveRobber(RobberStrategy):
    """Delegates each move to a blocking callback (the terminal prompt in play mode).

    The callback returns a Jump, an adjacent node, or ``None`` to quit.
    """

    memoryless = False
    name = "interactive"

    def __init__(self, ask: Callable[[Configuration, GridShape, int], Optional[object]]):
        self.ask = ask

    def next_jump(self, config, shape, tick):
        move = self.ask(config, shape, tick)
        if move is None:
            raise RobberQuit()
        return move


def parse_robber_strategy(name: str, ask=None) -> RobberStrategy:
    """Build a robber from its CLI name: ``evader``, ``evader:first``, ``greedy1..3``,
    ``scripted:<file>``, ``random:<seed>``, ``interactive``."""
    name = name.strip()
    if name in METRICS:
        return GreedyRobber(name)
    if name == "evader":
        return ParityEvader()
    if name == "evader:first":
        return ParityEvader("first")
    if name.startswith("scripted:"):
        return ScriptedRobber.from_file(name.split(":", 1)[1])
    if name.startswith("random:"):
        try:
            return RandomRobber(int(name.split(":", 1)[1]))
        except ValueError:
            pass
    if name == "interactive":
        if ask is None:
            raise ValueError("interactive robber needs an input callback")
        return InteractiveRobber(ask)
    raise ValueError(f"unknown robber strategy {name!r}")
