"""Grid geometry: shapes, positions, jumps, configurations and distances.

Positions are plain tuples of ints so they hash cheaply and can be used as
memo keys by the search code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

Position = tuple[int, ...]


class GridError(ValueError):
    """Base class for malformed grid objects."""


class InvalidDimensionError(GridError):
    pass


class InvalidPositionError(GridError):
    pass


@dataclass(frozen=True)
class GridShape:
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) < 1:
            raise InvalidDimensionError("a grid needs at least one axis")
        for axis, d in enumerate(dims):
            if d < 2:
                raise InvalidDimensionError(f"axis {axis} has size {d}; every axis needs at least 2 nodes")

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def node_count(self) -> int:
        count = 1
        for d in self.dims:
            count *= d
        return count

    @property
    def dim_sum(self) -> int:
        return sum(self.dims)

    def contains(self, p: Sequence[int]) -> bool:
        return len(p) == len(self.dims) and all(0 <= u < d for u, d in zip(p, self.dims))

    def validate(self, p: Sequence[int]) -> Position:
        p = tuple(p)
        if len(p) != len(self.dims):
            raise InvalidPositionError(f"position {p} has {len(p)} coordinates, grid has {len(self.dims)} axes")
        if not self.contains(p):
            raise InvalidPositionError(f"position {p} lies outside grid {self}")
        return p

    def nodes(self):
        """Yield every node in lexicographic order."""
        return itertools.product(*(range(d) for d in self.dims))

    @classmethod
    def parse(cls, text: str) -> "GridShape":
        try:
            dims = tuple(int(part) for part in text.strip().lower().split("x"))
        except ValueError:
            raise InvalidDimensionError(f"cannot parse grid shape {text!r}") from None
        return cls(dims)

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)


class Jump(NamedTuple):
    axis: int
    direction: int

    def __str__(self) -> str:
        return f"{self.axis}:{'+' if self.direction > 0 else '-'}1"

    @classmethod
    def parse(cls, text: str) -> "Jump":
        axis, _, step = text.strip().partition(":")
        try:
            jump = cls(int(axis), int(step))
        except ValueError:
            raise GridError(f"cannot parse jump {text!r}; expected 'axis:+1' or 'axis:-1'") from None
        if jump.direction not in (1, -1):
            raise GridError(f"jump direction must be +1 or -1, got {jump.direction}")
        return jump


def apply_jump(p: Position, jump: Jump, shape: GridShape) -> Position:
    axis, direction = jump
    dims = shape.dims
    if not 0 <= axis < len(dims) or (direction != 1 and direction != -1):
        raise InvalidPositionError(f"jump {jump!r} is not a unit move on a {shape.n}-axis grid")
    value = p[axis] + direction
    if not 0 <= value < dims[axis]:
        raise InvalidPositionError(f"jump {jump} from {p} leaves grid {shape}")
    return p[:axis] + (value,) + p[axis + 1 :]


def jump_between(p: Position, q: Position) -> Jump:
    """The unit jump taking ``p`` to ``q``; raises if they are not adjacent."""
    if len(p) != len(q):
        raise InvalidPositionError(f"dimension mismatch: {p} vs {q}")
    found = None
    for axis, (a, b) in enumerate(zip(p, q)):
        if a != b:
            if found is not None or abs(a - b) != 1:
                raise InvalidPositionError(f"{p} and {q} are not adjacent")
            found = Jump(axis, b - a)
    if found is None:
        raise InvalidPositionError(f"{p} and {q} are the same node")
    return found


class Configuration(NamedTuple):
    cops: tuple[Position, ...]
    robber: Position

    @property
    def m(self) -> int:
        return len(self.cops)

    def validate(self, shape: GridShape) -> "Configuration":
        if not self.cops:
            raise InvalidPositionError("a configuration needs at least one cop")
        return Configuration(tuple(shape.validate(c) for c in self.cops), shape.validate(self.robber))


def make_configuration(cops: Sequence[Sequence[int]], robber: Sequence[int], shape: GridShape) -> Configuration:
    return Configuration(tuple(tuple(c) for c in cops), tuple(robber)).validate(shape)


def wrap_index(a: int, b: int, n: int) -> int:
    if n <= 0:
        raise InvalidDimensionError(f"dimension count must be positive, got {n}")
    return (a + b) % n


def is_adjacent(p: Position, q: Position, shape: GridShape) -> bool:
    shape.validate(p)
    shape.validate(q)
    diff = 0
    for a, b in zip(p, q):
        if a != b:
            if abs(a - b) != 1:
                return False
            diff += 1
    return diff == 1


def neighbors(p: Position, shape: GridShape) -> list[Position]:
    """In-bounds neighbors of ``p``, ascending axis, -1 before +1."""
    shape.validate(p)
    return [q for _, q in neighbor_jumps(p, shape)]


def neighbor_jumps(p: Position, shape: GridShape) -> list[tuple[Jump, Position]]:
    # No validation: this sits on the hot path of every strategy.
    out = []
    for axis, d in enumerate(shape.dims):
        u = p[axis]
        if u > 0:
            out.append((Jump(axis, -1), p[:axis] + (u - 1,) + p[axis + 1 :]))
        if u < d - 1:
            out.append((Jump(axis, 1), p[:axis] + (u + 1,) + p[axis + 1 :]))
    return out


def manhattan(p: Sequence[int], q: Sequence[int]) -> int:
    if len(p) != len(q):
        raise InvalidPositionError(f"dimension mismatch: {tuple(p)} vs {tuple(q)}")
    return sum(abs(a - b) for a, b in zip(p, q))


@dataclass(frozen=True)
class DistanceReport:
    gaps: tuple[tuple[int, ...], ...]
    totals: tuple[int, ...]
    parities: tuple[int, ...]


def distance_report(config: Configuration) -> DistanceReport:
    """Per-cop, per-axis gaps to the robber plus Manhattan totals and their parity.

    Whether this is the equal-jump-count distance or the one taken after the
    robber's extra jump depends only on which half-step ``config`` describes.
    """
    r = config.robber
    gaps = tuple(tuple(abs(a - b) for a, b in zip(c, r)) for c in config.cops)
    totals = tuple(sum(g) for g in gaps)
    return DistanceReport(gaps, totals, tuple(t % 2 for t in totals))


def format_position(p: Sequence[int]) -> str:
    return ",".join(str(u) for u in p)


def parse_position(text: str) -> Position:
    try:
        return tuple(int(part) for part in text.strip().split(","))
    except ValueError:
        raise InvalidPositionError(f"cannot parse position {text!r}") from None
