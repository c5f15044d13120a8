import random

import pytest
from hypothesis import given, settings, strategies as st

from gridpursuit.cops import AlgorithmOneCop, CopStrategy, RandomCop, algorithm_one_team
from gridpursuit.engine import (
    COP_HALF,
    ROBBER_HALF,
    AlreadyTerminatedError,
    CaptureBoundExceeded,
    IllegalMoveError,
    TraceFormatError,
    default_tick_cap,
    dumps_trace,
    is_favorable,
    loads_trace,
    play_out,
    run,
    step,
    terminating,
)
from gridpursuit.grid import Configuration, GridShape, Jump, manhattan, wrap_index
from gridpursuit.robbers import GreedyRobber, ParityEvader, RandomRobber, RobberStrategy, ScriptedRobber


def test_terminating_examples():
    assert terminating(Configuration(((1, 1),), (1, 1)))
    assert not terminating(Configuration(((0, 0), (2, 2)), (1, 1)))
    assert terminating(Configuration(((0, 0), (1, 1)), (1, 1)))


def test_is_favorable_examples():
    shape = GridShape((10, 10))
    before = Configuration(((2, 3),), (2, 7))
    # axis 0 already matches, so j1 = 1 and only axis 0 is excluded
    assert is_favorable(0, before, Jump(1, 1), shape)
    assert not is_favorable(0, before, Jump(0, 1), shape)
    with pytest.raises(AlreadyTerminatedError):
        is_favorable(0, Configuration(((2, 7),), (2, 7)), Jump(0, 1), shape)


def test_mismatch_on_first_axis_is_always_favorable():
    shape = GridShape((5, 5, 5))
    before = Configuration(((0, 0, 0), (1, 2, 3), (4, 4, 0)), (1, 2, 4))
    for axis in range(3):
        assert is_favorable(2, before, Jump(axis, -1), shape)


@given(
    st.integers(2, 4).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.integers(0, 3), min_size=n, max_size=n),
            st.lists(st.integers(0, 3), min_size=n, max_size=n),
            st.integers(0, n - 1),
        )
    )
)
def test_lemma2_every_jump_favorable_to_next_cop(data):
    n, cop, robber, p = data
    cop, robber = tuple(cop), tuple(robber)
    if cop == robber:
        return
    shape = GridShape((4,) * n)
    target = wrap_index(p, 1, n)
    cops = [robber] * n
    cops[target] = cop
    # the other cops are irrelevant to favorability; park them away from the check
    config = Configuration(tuple(cops), robber)
    assert is_favorable(target, config, Jump(p, 1), shape)


def test_step_algorithm_one_example(g3x3):
    cop = AlgorithmOneCop(0)
    robber = ScriptedRobber([Jump(1, -1)])
    rec = step(Configuration(((0, 0),), (2, 2)), robber, [cop], 0, g3x3)
    assert rec.after_robber.robber == (2, 1)
    assert rec.cop_jumps == (Jump(0, 1),)
    assert rec.after_cops.cops == ((1, 0),)
    assert not rec.captured


def test_step_robber_runs_into_cop(g3x3):
    rec = step(Configuration(((0, 0), (2, 2)), (1, 0)), ScriptedRobber([Jump(0, -1)]), algorithm_one_team(2), 0, g3x3)
    assert rec.capture_half == ROBBER_HALF
    assert rec.capture_cop == 0
    assert rec.cop_jumps is None and rec.after_cops is None


def test_step_cop_captures(g3x3):
    rec = step(Configuration(((0, 1),), (2, 1)), ScriptedRobber([Jump(0, -1)]), [AlgorithmOneCop(0)], 0, g3x3)
    assert rec.capture_half == COP_HALF
    assert rec.after_cops.cops == ((1, 1),)


class StayRobber(RobberStrategy):
    name = "stay"

    def next_jump(self, config, shape, tick):
        return config.robber


class TeleportCop(CopStrategy):
    name = "teleport"

    def next_jump(self, index, config, shape, tick):
        return (2, 2)


def test_illegal_moves_are_rejected(g3x3):
    start = Configuration(((0, 0),), (1, 1))
    with pytest.raises(IllegalMoveError, match="robber"):
        step(start, StayRobber(), [AlgorithmOneCop(0)], 0, g3x3)
    with pytest.raises(IllegalMoveError, match="robber"):
        step(Configuration(((0, 0),), (2, 2)), ScriptedRobber([Jump(0, 1)]), [AlgorithmOneCop(0)], 0, g3x3)
    with pytest.raises(IllegalMoveError, match="cop 0"):
        step(start, ScriptedRobber([Jump(0, 1)]), [TeleportCop()], 0, g3x3)


def test_cops_see_pre_batch_positions(g3x3):
    seen = []

    class Spy(CopStrategy):
        name = "spy"

        def next_jump(self, index, config, shape, tick):
            seen.append(config.cops)
            return AlgorithmOneCop(0).next_jump(index, config, shape, tick)

    step(Configuration(((0, 0), (0, 2)), (2, 1)), ScriptedRobber([Jump(0, -1)]), [Spy(), Spy()], 0, g3x3)
    assert seen[0] == seen[1] == ((0, 0), (0, 2))


def test_run_initial_capture():
    trace = run(Configuration(((0, 0),), (0, 0)), GreedyRobber("greedy1"), [AlgorithmOneCop(0)], GridShape((2, 2)))
    assert trace.outcome.captured and trace.outcome.robber_jumps == 0
    assert trace.records == ()


@pytest.mark.parametrize("robber", ["greedy1", "greedy2", "greedy3"])
def test_run_full_team_within_bound(g3x3, robber):
    for r in g3x3.nodes():
        trace = run(Configuration(((0, 0), (2, 2)), r), GreedyRobber(robber), algorithm_one_team(2), g3x3)
        assert trace.outcome.captured
        assert trace.outcome.robber_jumps <= 12


def test_run_single_cop_odd_parity_evades(g3x3):
    trace = run(Configuration(((0, 0),), (1, 0)), ParityEvader(), [AlgorithmOneCop(0)], g3x3, tick_cap=10000)
    assert not trace.outcome.captured
    assert trace.outcome.robber_jumps == 10000


def test_default_tick_caps():
    shape = GridShape((10, 10))
    assert default_tick_cap(shape, algorithm_one_team(2)) == 2 * 20 + 8
    assert default_tick_cap(shape, [AlgorithmOneCop(0)]) == 200
    assert default_tick_cap(shape, [AlgorithmOneCop(0), AlgorithmOneCop(0)]) == 200


def test_full_team_exceeding_default_cap_is_hard_failure(g3x3):
    # A cop set that looks like a full team but never chases.
    class Idle(AlgorithmOneCop):
        def next_jump(self, index, config, shape, tick):
            cop = config.cops[index]
            return Jump(0, 1) if cop[0] == 0 else Jump(0, -1)

    with pytest.raises(CaptureBoundExceeded):
        run(Configuration(((0, 0), (0, 0)), (2, 2)), GreedyRobber("greedy1"), [Idle(0), Idle(1)], g3x3)


def _random_game(rng, shape):
    m = rng.randint(1, shape.n + 1)
    config = Configuration(
        tuple(tuple(rng.randrange(d) for d in shape.dims) for _ in range(m)),
        tuple(rng.randrange(d) for d in shape.dims),
    )
    cops = [RandomCop(rng.getrandbits(16)) if rng.random() < 0.5 else AlgorithmOneCop(rng.randrange(shape.n)) for _ in range(m)]
    robber = RandomRobber(rng.getrandbits(16)) if rng.random() < 0.5 else GreedyRobber(rng.choice(["greedy1", "greedy2", "greedy3"]))
    return config, cops, robber


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([(3, 3), (5, 4), (3, 3, 3), (6,)]))
def test_parity_and_alternation_on_random_games(seed, dims):
    shape = GridShape(dims)
    config, cops, robber = _random_game(random.Random(seed), shape)
    trace = run(config, robber, cops, shape, tick_cap=60)
    parity = [manhattan(c, config.robber) % 2 for c in config.cops]
    prev = config
    for rec in trace.records:
        for i in range(config.m):
            assert abs(manhattan(rec.after_robber.cops[i], rec.after_robber.robber) - manhattan(prev.cops[i], prev.robber)) == 1
        if rec.after_cops is None:
            break
        for i in range(config.m):
            d = manhattan(rec.after_cops.cops[i], rec.after_cops.robber)
            assert d % 2 == parity[i]
            assert abs(d - manhattan(rec.after_robber.cops[i], rec.after_robber.robber)) == 1
        prev = rec.after_cops


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_replay_determinism_and_trace_roundtrip(seed):
    shape = GridShape((4, 5))
    traces = []
    for _ in range(2):
        config, cops, robber = _random_game(random.Random(seed), shape)
        traces.append(run(config, robber, cops, shape, tick_cap=40, seed=seed))
    assert dumps_trace(traces[0]) == dumps_trace(traces[1])
    assert loads_trace(dumps_trace(traces[0])) == traces[0]


def test_play_out_matches_run():
    rng = random.Random(11)
    shape = GridShape((6, 6))
    for _ in range(200):
        seed = rng.getrandbits(32)
        config, cops, robber = _random_game(random.Random(seed), shape)
        full = run(config, robber, cops, shape, tick_cap=50).outcome
        config, cops, robber = _random_game(random.Random(seed), shape)
        assert play_out(config, robber, cops, shape, tick_cap=50) == full


def test_trace_format_errors():
    with pytest.raises(TraceFormatError):
        loads_trace("not json\n")
    with pytest.raises(TraceFormatError):
        loads_trace('{"kind":"outcome"}\n')
    trace = run(Configuration(((0, 0),), (2, 2)), GreedyRobber("greedy1"), [AlgorithmOneCop(0)], GridShape((3, 3)), tick_cap=3)
    text = dumps_trace(trace).replace('"version":1', '"version":99')
    with pytest.raises(TraceFormatError):
        loads_trace(text)
