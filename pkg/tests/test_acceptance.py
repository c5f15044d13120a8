"""Acceptance criteria, one test each, each reporting a PASS/FAIL line."""

import time
from fractions import Fraction

import pytest

from gridpursuit.cli import main
from gridpursuit.cops import algorithm_one_team
from gridpursuit.engine import play_out
from gridpursuit.experiments import ExperimentSpec, random_initial_configuration, run_experiment, theorem4_frequency
from gridpursuit.grid import GridShape
from gridpursuit.robbers import GreedyRobber
from gridpursuit.seeding import derive_trial_seed
from gridpursuit.verification import (
    HOLDS,
    check_random_traces,
    check_theorem1,
    check_theorem2,
    check_theorem3_and_5,
    check_theorem4,
    enumerate_parity_fraction,
)

TABLE1 = {
    10: {"greedy1": 8, "greedy2": 11, "greedy3": 13},
    20: {"greedy1": 19, "greedy2": 24, "greedy3": 32},
    30: {"greedy1": 30, "greedy2": 37, "greedy3": 50},
}


@pytest.fixture
def report(acceptance_line):
    def emit(number, ok, detail):
        acceptance_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        return ok

    return emit


def test_1_parity_invariance(report):
    shapes = [GridShape((3, 3)), GridShape((10, 10)), GridShape((4, 4, 4))]
    start = time.perf_counter()
    r = check_random_traces(shapes, 1000, seed=0)
    elapsed = time.perf_counter() - start
    ok = r.verdict == HOLDS and elapsed < 10
    assert report(1, ok, f"1000 random games, {r.stats.get('ticks_checked')} ticks, verdict {r.verdict}, {elapsed:.1f}s"), r.stats


def test_2_capture_with_n_cops(report):
    expected_bounds = {(2, 2): 8, (2, 3): 10, (3, 3): 12, (2, 2, 2): 18}
    start = time.perf_counter()
    details = []
    ok = True
    for dims, bound in expected_bounds.items():
        shape = GridShape(dims)
        r = check_theorem2(shape)
        assert shape.n * shape.dim_sum == bound
        ok &= r.verdict == HOLDS and r.stats["max_capture_time"] <= bound
        details.append(f"{shape}: max {r.stats.get('max_capture_time')}/{bound}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300
    assert report(2, ok, f"{'; '.join(details)}; {elapsed:.1f}s")


def test_3_evasion_with_fewer_cops(report):
    start = time.perf_counter()
    reports = [check_theorem1(GridShape((3, 3)), 1, horizon=1000), check_theorem1(GridShape((2, 2, 2)), 2, horizon=1000)]
    elapsed = time.perf_counter() - start
    ok = all(r.verdict == HOLDS for r in reports) and elapsed < 60
    detail = "; ".join(f"{r.scope['shape']} m={r.scope['m']}: {r.verdict}, {r.stats.get('configs_checked')} starts" for r in reports)
    assert report(3, ok, f"{detail}; {elapsed:.1f}s")


def test_4_single_cop_even_parity(report):
    start = time.perf_counter()
    base = check_theorem3_and_5(GridShape((4, 4)))
    assert base.verdict == HOLDS
    c = -(-base.stats["t_max"] // GridShape((4, 4)).dim_sum)
    reports = [check_theorem3_and_5(GridShape((k, k)), c) for k in (4, 5, 6)]
    elapsed = time.perf_counter() - start
    ok = all(r.verdict == HOLDS for r in reports) and elapsed < 300
    detail = ", ".join(f"{r.scope['shape']} T_max={r.stats.get('t_max')}" for r in reports)
    assert report(4, ok, f"c={c} from 4x4; {detail}; {elapsed:.1f}s")


def test_5_even_start_fraction(report):
    exact_ok = all(
        enumerate_parity_fraction(GridShape((a, b))) == Fraction(1, 2)
        for a in range(2, 13)
        for b in range(2, 13)
        if a % 2 == 0 or b % 2 == 0
    )
    freq = theorem4_frequency(GridShape((10, 10)), 10_000, 0)
    mc_ok = abs(freq.capture_fraction - 0.5) <= 3 * freq.standard_error
    odd = check_theorem4(GridShape((3, 3)))
    flag_ok = bool(odd.flags) and odd.stats["even_fraction"] > Fraction(1, 2)
    ok = exact_ok and mc_ok and flag_ok
    assert report(
        5,
        ok,
        f"exact 1/2 up to 12x12: {exact_ok}; 10x10 capture fraction {freq.capture_fraction:.4f} "
        f"(SE {freq.standard_error:.4f}); 3x3 flagged at {odd.stats['even_fraction']}",
    )


def test_6_table1(report):
    means = {}
    lines = []
    ok = True
    for side, row in TABLE1.items():
        for robber, published in row.items():
            spec = ExperimentSpec(GridShape((side, side)), ("alg1:0", "alg1:1"), robber, 10_000, 7)
            start = time.perf_counter()
            summary = run_experiment(spec)
            elapsed = time.perf_counter() - start
            mean = summary.mean
            means[side, robber] = mean
            cell_ok = abs(mean - published) <= 0.25 * published and elapsed < 120 and summary.evasions == 0
            ok &= cell_ok
            lines.append(f"{side}x{side} {robber} {mean:.2f} vs {published} ({elapsed:.1f}s)")
    for side in TABLE1:
        ok &= means[side, "greedy1"] <= means[side, "greedy2"] <= means[side, "greedy3"]
    for robber in ("greedy1", "greedy2", "greedy3"):
        ok &= means[10, robber] < means[20, robber] < means[30, robber]
    assert report(6, ok, "; ".join(lines))


def test_7_determinism(report, tmp_path):
    blobs = []
    for k, workers in enumerate(("1", "1", "2", "2")):
        d = tmp_path / str(k)
        d.mkdir()
        codes = [
            main(["simulate", "--shape", "7x5", "--robber", "greedy3", "--seed", "13", "--trace", str(d / "trace.jsonl")], out=lambda s: None),
            main(["experiment", "--shape", "7x5", "--robber", "random:5", "--cops", "alg1:0,random:2", "--trials", "3000",
                  "--seed", "13", "--workers", workers, "--csv", str(d / "t.csv"), "--summary", str(d / "s.json")], out=lambda s: None),
        ]
        assert codes == [0, 0]
        blobs.append(tuple((d / f).read_bytes() for f in ("trace.jsonl", "t.csv", "s.json")))
    ok = len(set(blobs)) == 1
    assert report(7, ok, "simulate and experiment outputs byte-identical across reruns at 1 and 2 workers")


def test_8_performance(report):
    shape = GridShape((50, 50))
    worst = 0
    for k in range(20):
        initial = random_initial_configuration(shape, 2, derive_trial_seed(8, k))
        robber = GreedyRobber(("greedy1", "greedy2", "greedy3")[k % 3])
        outcome = play_out(initial, robber, algorithm_one_team(2), shape)
        assert outcome.captured
        worst = max(worst, outcome.robber_jumps)
    spec = ExperimentSpec(GridShape((10, 10)), ("alg1:0", "alg1:1"), "greedy1", 10_000, 0)
    start = time.perf_counter()
    run_experiment(spec)
    elapsed = time.perf_counter() - start
    ok = worst <= 200 and elapsed < 5
    assert report(8, ok, f"50x50 worst of 20 games {worst} jumps (bound 200); 10^4 trials on 10x10 in {elapsed:.2f}s")
