import random

import pytest
from hypothesis import given, settings, strategies as st

from gridpursuit.cops import (
    AlgorithmOneCop,
    AlgorithmTwoCop,
    StrategyError,
    algorithm_one_next,
    algorithm_two_next,
    parse_cop_strategy,
)
from gridpursuit.engine import run
from gridpursuit.grid import Configuration, GridError, GridShape, Jump, apply_jump, manhattan
from gridpursuit.robbers import GreedyRobber, RandomRobber


def test_algorithm_one_examples():
    shape2 = GridShape((10, 10))
    jump = algorithm_one_next(0, (5, 5), (5, 2), shape2)
    assert jump == Jump(1, -1)
    assert apply_jump((5, 5), jump, shape2) == (5, 4)
    # scan order from index 1 in 3-D is axes 1, 2, 0
    assert algorithm_one_next(1, (0, 4, 0), (0, 4, 2), GridShape((5, 5, 5))) == Jump(2, 1)
    assert algorithm_one_next(1, (3, 3), (3, 3), shape2) is None


def test_algorithm_two_examples():
    shape = GridShape((6, 6))
    assert algorithm_two_next((0, 0), (3, 2), shape) == Jump(0, 1)
    assert algorithm_two_next((5, 1), (5, 4), shape) == Jump(1, 1)
    assert algorithm_two_next((2, 2), (2, 2), shape) is None
    # equal gaps: deterministic rule closes in on axis 0
    assert algorithm_two_next((3, 3), (1, 1), shape) == Jump(0, -1)
    with pytest.raises(GridError):
        algorithm_two_next((0, 0, 0), (1, 1, 1), GridShape((3, 3, 3)))


def test_algorithm_two_random_tie_is_seeded():
    shape = GridShape((6, 6))
    a = [algorithm_two_next((3, 3), (1, 1), shape, random.Random(4)) for _ in range(5)]
    b = [algorithm_two_next((3, 3), (1, 1), shape, random.Random(4)) for _ in range(5)]
    assert a == b
    options = {algorithm_two_next((3, 3), (1, 1), shape, random.Random(s)) for s in range(50)}
    assert options == {Jump(0, -1), Jump(0, 1), Jump(1, -1), Jump(1, 1)}


@st.composite
def cop_robber(draw):
    n = draw(st.integers(1, 4))
    dims = tuple(draw(st.integers(2, 7)) for _ in range(n))
    cop = tuple(draw(st.integers(0, d - 1)) for d in dims)
    robber = tuple(draw(st.integers(0, d - 1)) for d in dims)
    i = draw(st.integers(0, n - 1))
    return GridShape(dims), i, cop, robber


@given(cop_robber())
def test_algorithm_one_closes_gap_on_its_axis(data):
    shape, i, cop, robber = data
    jump = algorithm_one_next(i, cop, robber, shape)
    if cop == robber:
        assert jump is None
        return
    a = jump.axis
    moved = apply_jump(cop, jump, shape)  # never leaves the grid
    assert abs(moved[a] - robber[a]) == abs(cop[a] - robber[a]) - 1
    # every axis scanned before it already matched
    n = shape.n
    j = next(j for j in range(n) if (i + j) % n == a)
    assert all(cop[(i + k) % n] == robber[(i + k) % n] for k in range(j))


@given(cop_robber(), st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_algorithm_one_ignores_other_cops(data, noise):
    shape, i, cop, robber = data
    other = tuple(min(x, d - 1) for x, d in zip(noise, shape.dims))
    c1 = Configuration((cop, other), robber)
    c2 = Configuration((cop, robber), robber)
    s = AlgorithmOneCop(i)
    if cop != robber:
        assert s.next_jump(0, c1, shape, 0) == s.next_jump(0, c2, shape, 7)


def _sign(x):
    return (x > 0) - (x < 0)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([(4, 4), (5, 7), (8, 8), (3, 9)]))
def test_lemma4_sign_never_flips(seed, dims):
    shape = GridShape(dims)
    rng = random.Random(seed)
    while True:
        cop = tuple(rng.randrange(d) for d in dims)
        robber = tuple(rng.randrange(d) for d in dims)
        if manhattan(cop, robber) % 2 == 0 and cop != robber:
            break
    robber_strategy = RandomRobber(seed) if seed % 2 else GreedyRobber(["greedy1", "greedy2", "greedy3"][seed % 3])
    trace = run(Configuration((cop,), robber), robber_strategy, [AlgorithmTwoCop()], shape, tick_cap=400)
    assert trace.outcome.captured
    locked = {}
    for rec in trace.records:
        if rec.after_cops is None:
            continue
        c, r = rec.after_cops.cops[0], rec.after_cops.robber
        for axis, s in locked.items():
            assert _sign(c[axis] - r[axis]) != -s
        jump = rec.cop_jumps[0]
        if jump.axis not in locked:
            before = rec.after_robber
            locked[jump.axis] = _sign(before.cops[0][jump.axis] - before.robber[jump.axis])


def test_parse_cop_strategy():
    assert parse_cop_strategy("alg1:1").i == 1
    assert parse_cop_strategy("alg2s").memoryless
    tie = parse_cop_strategy("alg2s:random-tie:9")
    assert tie.tie_seed == 9 and not tie.memoryless
    for bad in ["alg1", "alg1:x", "alg3", "alg2s:random-tie", ""]:
        with pytest.raises(StrategyError):
            parse_cop_strategy(bad)
    with pytest.raises(StrategyError):
        AlgorithmOneCop(2).next_jump(0, Configuration(((0, 0),), (1, 1)), GridShape((3, 3)), 0)
