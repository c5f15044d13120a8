"""Cop strategies.

A cop strategy is called once per tick, after the robber has jumped, with the
cop's own index and the configuration at that half-step (cops at their time-t
nodes, robber at its time-(t+1) node). It returns the cop's ``Jump`` or
``None`` when the cop already shares the robber's node.
"""

from __future__ import annotations

import random
from typing import Optional

from .seeding import splitmix64_mix
from .grid import Configuration, GridError, GridShape, Jump, Position, neighbor_jumps


class StrategyError(ValueError):
    pass


def algorithm_one_next(i: int, cop: Position, robber: Position, shape: GridShape) -> Optional[Jump]:
    """Cyclic-axis chase: fix the first mismatching axis starting at ``i``."""
    n = len(cop)
    for j in range(n):
        axis = (i + j) % n
        if robber[axis] != cop[axis]:
            return Jump(axis, -1 if robber[axis] < cop[axis] else 1)
    return None


def algorithm_two_next(
    cop: Position, robber: Position, shape: GridShape, tie_rng: Optional[random.Random] = None
) -> Optional[Jump]:
    """Single-cop chase on a 2-D grid along the axis with the larger gap.

    On an equal nonzero gap the move is free; without ``tie_rng`` the cop
    closes in on axis 0, otherwise it picks a uniformly random neighbor.
    """
    if shape.n != 2:
        raise GridError(f"algorithm 2 is defined on 2-D grids only, got {shape.n} axes")
    g0 = abs(cop[0] - robber[0])
    g1 = abs(cop[1] - robber[1])
    if g0 > g1:
        return Jump(0, -1 if cop[0] > robber[0] else 1)
    if g0 < g1:
        return Jump(1, -1 if cop[1] > robber[1] else 1)
    if g0 == 0:
        return None
    if tie_rng is None:
        return Jump(0, -1 if cop[0] > robber[0] else 1)
    options = neighbor_jumps(cop, shape)
    return options[tie_rng.randrange(len(options))][0]


class CopStrategy:
    name: str = "cop"
    # Memoryless strategies are pure functions of the configuration; the
    # adversarial search relies on this to memoize on configurations.
    memoryless: bool = True

    def next_jump(self, index: int, config: Configuration, shape: GridShape, tick: int) -> Optional[Jump]:
        raise NotImplementedError

    def reseed(self, trial_seed: int) -> None:
        """Re-key any private randomness for a new trial; no-op for deterministic cops."""

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class AlgorithmOneCop(CopStrategy):
    def __init__(self, i: int):
        if i < 0:
            raise StrategyError(f"algorithm 1 index must be non-negative, got {i}")
        self.i = i
        self.name = f"alg1:{i}"

    def next_jump(self, index, config, shape, tick):
        if self.i >= shape.n:
            raise StrategyError(f"{self.name} needs index < n = {shape.n}")
        return algorithm_one_next(self.i, config.cops[index], config.robber, shape)


class AlgorithmTwoCop(CopStrategy):
    def __init__(self, tie_seed: Optional[int] = None):
        self.tie_seed = tie_seed
        if tie_seed is None:
            self.name = "alg2s"
            self._rng = None
        else:
            self.name = f"alg2s:random-tie:{tie_seed}"
            self._rng = random.Random(tie_seed)
            self.memoryless = False

    def next_jump(self, index, config, shape, tick):
        return algorithm_two_next(config.cops[index], config.robber, shape, self._rng)

    def reseed(self, trial_seed):
        if self._rng is not None:
            self._rng.seed(splitmix64_mix(trial_seed ^ self.tie_seed))


class RandomCop(CopStrategy):
    """Uniformly random legal jump; used as a stress opponent."""

    memoryless = False

    def __init__(self, seed: int):
        self.seed = seed
        self.name = f"random:{seed}"
        self._rng = random.Random(seed)

    def next_jump(self, index, config, shape, tick):
        cop = config.cops[index]
        if cop == config.robber:
            return None
        options = neighbor_jumps(cop, shape)
        return options[self._rng.randrange(len(options))][0]

    def reseed(self, trial_seed):
        self._rng.seed(splitmix64_mix(trial_seed ^ self.seed))


def parse_cop_strategy(name: str) -> CopStrategy:
    """Build a cop strategy from its CLI name: ``alg1:<i>``, ``alg2s[:random-tie:<seed>]``, ``random:<seed>``."""
    parts = name.strip().split(":")
    try:
        if parts[0] == "alg1" and len(parts) == 2:
            return AlgorithmOneCop(int(parts[1]))
        if parts[0] == "alg2s" and len(parts) == 1:
            return AlgorithmTwoCop()
        if parts[0] == "alg2s" and len(parts) == 3 and parts[1] == "random-tie":
            return AlgorithmTwoCop(int(parts[2]))
        if parts[0] == "random" and len(parts) == 2:
            return RandomCop(int(parts[1]))
    except ValueError:
        pass
    raise StrategyError(f"unknown cop strategy {name!r}")


def algorithm_one_team(n: int) -> list[CopStrategy]:
    return [AlgorithmOneCop(i) for i in range(n)]
