"""Mechanical checks of the capture and evasion results.

Two kinds of checks live here:

* trace validators, which look at a finished game and test per-tick
  invariants (distance parity, +-1 alternation, favorable jumps, replay);
* the adversarial oracle, an exhaustive search over every robber move
  sequence against fixed memoryless cops, used for the capture theorems.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cops import AlgorithmOneCop, AlgorithmTwoCop, CopStrategy, RandomCop, algorithm_one_team
from .engine import (
    COP_HALF,
    ROBBER_HALF,
    GameTrace,
    TraceFormatError,
    capturing_cop,
    cop_batch,
    is_favorable,
    play_out,
    run,
    terminating,
)
from .grid import Configuration, GridError, GridShape, apply_jump, manhattan, neighbor_jumps
from .robbers import EvaderInapplicableError, GreedyRobber, ParityEvader, RandomRobber, ScriptedRobber

HOLDS = "holds"
VIOLATED = "violated"
INAPPLICABLE = "inapplicable"

DEFAULT_NODE_BUDGET = 10**8


class OracleInfeasibleError(RuntimeError):
    pass


@dataclass
class ClaimReport:
    claim: str
    scope: dict
    verdict: str
    stats: dict = field(default_factory=dict)
    witness: Optional[GameTrace] = None
    flags: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def as_dict(self, witness_path: Optional[str] = None) -> dict:
        out = {
            "claim": self.claim,
            "scope": self.scope,
            "verdict": self.verdict,
            "stats": self.stats,
            "flags": self.flags,
        }
        if witness_path is not None:
            out["witness"] = witness_path
        return out

    def to_text(self, witness_path: Optional[str] = None) -> str:
        return json.dumps(self.as_dict(witness_path), sort_keys=True, default=str)


def merge_reports(claim: str, scope: dict, reports: Sequence[ClaimReport]) -> ClaimReport:
    """Combine reports of one claim over several scopes; the first violation wins."""
    for r in reports:
        if r.verdict == VIOLATED:
            return ClaimReport(claim, scope, VIOLATED, {"parts": [p.as_dict() for p in reports]}, r.witness)
    applicable = [r for r in reports if r.verdict == HOLDS]
    verdict = HOLDS if applicable else INAPPLICABLE
    flags = [f for r in reports for f in r.flags]
    return ClaimReport(claim, scope, verdict, {"parts": [p.as_dict() for p in reports]}, flags=flags)


# -- trace validators -------------------------------------------------------

def _trace_violation(trace: GameTrace) -> Optional[tuple[int, str]]:
    shape = trace.shape
    n = shape.n
    state = trace.initial
    m = state.m
    parity = [manhattan(c, state.robber) % 2 for c in state.cops]
    if trace.records and terminating(state):
        return 0, "replay: ticks recorded after a terminating initial configuration"
    for k, rec in enumerate(trace.records):
        if rec.t != k:
            return k, f"replay: tick index {rec.t} at position {k}"
        if k > 0 and trace.records[k - 1].captured:
            return k, "replay: tick recorded after capture"
        try:
            robber = apply_jump(state.robber, rec.robber_jump, shape)
        except GridError as exc:
            return k, f"replay: robber jump illegal ({exc})"
        if rec.after_robber != Configuration(state.cops, robber):
            return k, "replay: robber half-step configuration does not follow from the recorded jump"
        p = rec.robber_jump.axis
        target = (p + 1) % n
        if target < m and not is_favorable(target, state, rec.robber_jump, shape):
            return k, f"lemma2: robber jump on axis {p} not favorable to cop {target}"
        for i in range(m):
            if abs(manhattan(state.cops[i], robber) - manhattan(state.cops[i], state.robber)) != 1:
                return k, f"prop1: cop {i} distance did not change by 1 at the robber half-step"
        hit = capturing_cop(rec.after_robber)
        if hit is not None:
            if rec.capture_half != ROBBER_HALF or rec.capture_cop != hit or rec.cop_jumps is not None:
                return k, "replay: robber half-step capture not recorded"
            continue
        if rec.cop_jumps is None or rec.after_cops is None or len(rec.cop_jumps) != m:
            return k, "replay: cop jumps missing"
        try:
            cops = tuple(apply_jump(c, j, shape) for c, j in zip(state.cops, rec.cop_jumps))
        except GridError as exc:
            return k, f"replay: cop jump illegal ({exc})"
        if rec.after_cops != Configuration(cops, robber):
            return k, "replay: cop half-step configuration does not follow from the recorded jumps"
        for i in range(m):
            d_half = manhattan(rec.after_robber.cops[i], robber)
            d_full = manhattan(rec.after_cops.cops[i], robber)
            if abs(d_full - d_half) != 1:
                return k, f"prop1: cop {i} distance did not change by 1 at the cop half-step"
            if d_full % 2 != parity[i]:
                return k, f"lemma1: cop {i} full-tick distance changed parity"
        hit = capturing_cop(rec.after_cops)
        if (hit is None) != (rec.capture_half is None) or (hit is not None and (rec.capture_half, rec.capture_cop) != (COP_HALF, hit)):
            return k, "replay: cop half-step capture flag inconsistent"
        state = rec.after_cops
    o = trace.outcome
    last_captured = bool(trace.records) and trace.records[-1].captured
    if o.captured:
        if not (last_captured or (not trace.records and terminating(trace.initial))):
            return len(trace.records), "replay: outcome says captured but no capture recorded"
        if o.robber_jumps != len(trace.records):
            return len(trace.records), "replay: outcome jump count disagrees with the ticks"
    elif last_captured:
        return len(trace.records), "replay: last tick captured but outcome says evaded"
    return None


def check_trace_invariants(trace: GameTrace) -> ClaimReport:
    """Parity constancy, +-1 alternation, favorable jumps and replay, tick by tick."""
    if not isinstance(trace, GameTrace):
        raise TraceFormatError(f"expected a GameTrace, got {type(trace).__name__}")
    scope = {"shape": str(trace.shape), "m": trace.initial.m, "ticks": len(trace.records)}
    found = _trace_violation(trace)
    if found is None:
        return ClaimReport("trace-invariants", scope, HOLDS, {"ticks_checked": len(trace.records)})
    tick, reason = found
    return ClaimReport("trace-invariants", scope, VIOLATED, {"tick": tick, "reason": reason}, witness=trace)


def _algorithm_one_index(trace: GameTrace, cop_index: int) -> int:
    name = trace.cop_strategies[cop_index] if cop_index < len(trace.cop_strategies) else ""
    if not name.startswith("alg1:"):
        raise ValueError(f"cop {cop_index} does not run algorithm 1 in this trace (strategy {name!r})")
    return int(name.split(":")[1])


def check_lemma3(trace: GameTrace, cop_index: int, shape: Optional[GridShape] = None) -> ClaimReport:
    """Capture must come no later than the robber's sum(d)-th jump favorable to this cop."""
    shape = shape or trace.shape
    rotation = _algorithm_one_index(trace, cop_index)
    limit = shape.dim_sum
    scope = {"shape": str(shape), "cop": cop_index, "rotation": rotation, "limit": limit}
    configs = trace.configurations()
    favorable = 0
    for k, rec in enumerate(trace.records):
        favorable += is_favorable(cop_index, configs[k], rec.robber_jump, shape, rotation)
        if favorable >= limit and not rec.captured:
            return ClaimReport(
                "lemma3", scope, VIOLATED, {"tick": k, "favorable": favorable}, witness=trace
            )
    return ClaimReport("lemma3", scope, HOLDS, {"favorable_at_end": favorable, "captured": trace.outcome.captured})


# -- adversarial oracle -----------------------------------------------------

class AdversarialOracle:
    """Longest robber survival against fixed memoryless cops, by exhaustive search.

    States are equal-jump-count configurations. From each, the robber picks a
    neighbor and the cops' reply is forced, so the value of a state is the
    longest path to a capture in a finite graph, or infinity when the robber
    can reach a cycle. The memo is shared across calls on one oracle.
    """

    def __init__(self, shape: GridShape, cops: Sequence[CopStrategy], node_budget: int = DEFAULT_NODE_BUDGET):
        for c in cops:
            if not c.memoryless:
                raise ValueError(f"oracle needs memoryless deterministic cops, {c.name} is not")
        self.shape = shape
        self.cops = list(cops)
        self.node_budget = node_budget
        self.expanded = 0
        self.memo: dict[Configuration, float] = {}

    def successors(self, state: Configuration) -> list[Optional[Configuration]]:
        """One entry per robber move in neighbor order; ``None`` means that move ends in capture."""
        out = []
        for _, r in neighbor_jumps(state.robber, self.shape):
            if r in state.cops:
                out.append(None)
                continue
            _, nxt = cop_batch(Configuration(state.cops, r), self.cops, self.shape, 0)
            out.append(None if r in nxt.cops else nxt)
        return out

    def value(self, root: Configuration) -> float:
        """Exact longest survival in robber jumps from ``root`` (``math.inf`` if unbounded)."""
        memo = self.memo
        if terminating(root):
            return 0
        if root in memo:
            return memo[root]
        self._expand()
        frames = [[root, self.successors(root), 0, 0]]
        gray = {root}
        while frames:
            frame = frames[-1]
            state, succ, k, best = frame
            if k < len(succ) and best != math.inf:
                frame[2] = k + 1
                nxt = succ[k]
                if nxt is None:
                    frame[3] = max(best, 1)
                elif nxt in memo:
                    frame[3] = max(best, 1 + memo[nxt])
                elif nxt in gray:
                    # Back edge: the robber can loop forever.
                    frame[3] = math.inf
                else:
                    self._expand()
                    gray.add(nxt)
                    frames.append([nxt, self.successors(nxt), 0, 0])
                continue
            memo[state] = best
            gray.discard(state)
            frames.pop()
            if frames:
                frames[-1][3] = max(frames[-1][3], 1 + best)
        return memo[root]

    def _expand(self) -> None:
        self.expanded += 1
        if self.expanded > self.node_budget:
            raise OracleInfeasibleError(f"search exceeded node budget {self.node_budget} on {self.shape}")

    def survival(self, initial: Configuration, horizon: int) -> int:
        v = self.value(initial)
        return horizon if v >= horizon else int(v)

    def best_line(self, initial: Configuration, length: int) -> list:
        """Robber jumps realizing the optimal survival, at most ``length`` of them."""
        jumps = []
        state = initial
        while len(jumps) < length and not terminating(state):
            target = self.value(state)
            moves = neighbor_jumps(state.robber, self.shape)
            for (jump, _), nxt in zip(moves, self.successors(state)):
                v = 1 if nxt is None else 1 + self.value(nxt)
                if v == target:
                    break
            jumps.append(jump)
            if nxt is None:
                break
            state = nxt
        return jumps

    def witness(self, initial: Configuration, length: int, seed: Optional[int] = None) -> GameTrace:
        line = self.best_line(initial, length)
        return run(initial, ScriptedRobber(line, "oracle-line"), self.cops, self.shape, tick_cap=max(1, len(line)), seed=seed)


def adversarial_survival(
    shape: GridShape,
    cop_strategies: Sequence[CopStrategy],
    initial: Configuration,
    horizon: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """Most robber jumps achievable before capture, capped at ``horizon``."""
    initial = initial.validate(shape)
    return AdversarialOracle(shape, cop_strategies, node_budget).survival(initial, horizon)


def all_configurations(shape: GridShape, m: int):
    nodes = list(shape.nodes())
    for cops in itertools.product(nodes, repeat=m):
        for robber in nodes:
            yield Configuration(cops, robber)


def check_theorem2(shape: GridShape, node_budget: int = DEFAULT_NODE_BUDGET) -> ClaimReport:
    """n algorithm-1 cops capture from every start within n * sum(d) robber jumps."""
    n = shape.n
    bound = n * shape.dim_sum
    oracle = AdversarialOracle(shape, algorithm_one_team(n), node_budget)
    checked = 0
    worst = -1
    worst_config = None
    for config in all_configurations(shape, n):
        checked += 1
        survived = oracle.survival(config, bound + 1)
        if survived > worst:
            worst, worst_config = survived, config
        if survived > bound:
            trace = oracle.witness(config, bound + 1)
            return ClaimReport(
                "theorem2",
                {"shape": str(shape), "cops": n, "bound": bound},
                VIOLATED,
                {"configs_checked": checked, "survival": survived, "initial": worst_config},
                witness=trace,
            )
    return ClaimReport(
        "theorem2",
        {"shape": str(shape), "cops": n, "bound": bound},
        HOLDS,
        {
            "configs_checked": checked,
            "max_capture_time": worst,
            "worst_initial": worst_config,
            "states_explored": len(oracle.memo),
        },
    )


def check_theorem1(
    shape: GridShape,
    m: int,
    horizon: int = 1000,
    random_cops: int = 2,
    seed: int = 0,
    initial: Optional[Configuration] = None,
) -> ClaimReport:
    """The parity evader survives ``horizon`` ticks against fewer than n cops from odd-distance starts.

    Opponents: every assignment of algorithm-1 indices to the cops, plus
    ``random_cops`` teams of random walkers.
    """
    n = shape.n
    scope = {"shape": str(shape), "m": m, "horizon": horizon, "random_teams": random_cops}
    if m >= n:
        return ClaimReport("theorem1", scope, INAPPLICABLE, {"reason": f"needs m < n, got m = {m}"})
    configs = [initial.validate(shape)] if initial is not None else all_configurations(shape, m)
    teams = [[AlgorithmOneCop(i) for i in idx] for idx in itertools.product(range(n), repeat=m)]
    team_rng = random.Random(seed)
    applicable = skipped = games = 0
    for config in configs:
        if any(manhattan(c, config.robber) % 2 == 0 for c in config.cops):
            skipped += 1
            continue
        applicable += 1
        opponents = teams + [
            [RandomCop(team_rng.getrandbits(32)) for _ in range(m)] for _ in range(random_cops)
        ]
        for team in opponents:
            games += 1
            names = [c.name for c in team]
            try:
                outcome = play_out(config, ParityEvader(), team, shape, horizon)
                ok = not outcome.captured
            except EvaderInapplicableError:
                ok = False
            if not ok:
                fresh = [c if c.memoryless else RandomCop(c.seed) for c in team]
                try:
                    witness = run(config, ParityEvader(), fresh, shape, horizon)
                except EvaderInapplicableError:
                    witness = None
                return ClaimReport(
                    "theorem1", scope, VIOLATED, {"initial": config, "cops": names}, witness=witness
                )
    if applicable == 0:
        return ClaimReport("theorem1", scope, INAPPLICABLE, {"reason": "no start has every cop at odd distance", "skipped": skipped})
    return ClaimReport(
        "theorem1", scope, HOLDS, {"configs_checked": applicable, "even_parity_skipped": skipped, "games": games}
    )


def check_theorem3_and_5(
    shape: GridShape,
    c: Optional[int] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    initial: Optional[Configuration] = None,
) -> ClaimReport:
    """One algorithm-2 cop forces capture from every even-distance start; records T_max.

    With ``c`` given, also requires ``T_max <= c * (d0 + d1)``.
    """
    if shape.n != 2:
        raise GridError("the single-cop capture check is 2-D only")
    side = shape.dim_sum
    scope = {"shape": str(shape), "c": c}
    oracle = AdversarialOracle(shape, [AlgorithmTwoCop()], node_budget)
    # Longest finite path visits each state at most once.
    horizon = shape.node_count**2 + 1
    configs = [initial.validate(shape)] if initial is not None else all_configurations(shape, 1)
    checked = odd = 0
    t_max = 0
    worst = None
    for config in configs:
        if manhattan(config.cops[0], config.robber) % 2:
            odd += 1
            continue
        checked += 1
        survived = oracle.survival(config, horizon)
        if survived >= horizon:
            return ClaimReport(
                "theorem3", scope, VIOLATED, {"initial": config, "survival": "unbounded"},
                witness=oracle.witness(config, 4 * shape.node_count),
            )
        if survived > t_max:
            t_max, worst = survived, config
    if checked == 0:
        return ClaimReport("theorem3", scope, INAPPLICABLE, {"reason": "odd-distance start", "odd_skipped": odd})
    stats = {
        "configs_checked": checked,
        "odd_skipped": odd,
        "t_max": t_max,
        "worst_initial": worst,
        "t_max_per_side": Fraction(t_max, side),
    }
    if c is not None and t_max > c * side:
        return ClaimReport("theorem5", scope, VIOLATED, stats, witness=oracle.witness(worst, t_max))
    return ClaimReport("theorem3", scope, HOLDS, stats)


def theorem5_constant(shapes: Sequence[GridShape], node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Smallest integer c with T_max <= c * (d0 + d1) over the given exhaustive sweeps."""
    c = 0
    for shape in shapes:
        report = check_theorem3_and_5(shape, node_budget=node_budget)
        if report.verdict != HOLDS:
            raise RuntimeError(f"capture sweep failed on {shape}: {report.stats}")
        c = max(c, math.ceil(Fraction(report.stats["t_max"], shape.dim_sum)))
    return c


def enumerate_parity_fraction(shape: GridShape) -> Fraction:
    """Exact share of (cop, robber) node pairs at even Manhattan distance."""
    if shape.n != 2:
        raise GridError("parity fraction is defined for 2-D grids")
    nodes = list(shape.nodes())
    even = sum(1 for p in nodes for q in nodes if manhattan(p, q) % 2 == 0)
    return Fraction(even, len(nodes) ** 2)


def check_theorem4(shape: GridShape) -> ClaimReport:
    """Report the exact even-start fraction; flag grids where it is not one half."""
    fraction = enumerate_parity_fraction(shape)
    flags = []
    if fraction != Fraction(1, 2):
        flags.append(f"even-start fraction on {shape} is {fraction}, not 1/2 (odd side lengths skew parity)")
    return ClaimReport(
        "theorem4",
        {"shape": str(shape)},
        HOLDS,
        {"even_fraction": fraction, "exceeds_half": fraction > Fraction(1, 2)},
        flags=flags,
    )


# -- random trace corpus ----------------------------------------------------

def random_game(shape: GridShape, rng: random.Random, tick_cap: Optional[int] = None) -> GameTrace:
    """One game with a random start and a random mix of strategies."""
    n = shape.n
    kind = rng.choice(["team", "subset", "random", "alg2"] if n == 2 else ["team", "subset", "random"])
    if kind == "team":
        cops = algorithm_one_team(n)
    elif kind == "subset":
        cops = [AlgorithmOneCop(rng.randrange(n)) for _ in range(rng.randint(1, max(1, n - 1)))]
    elif kind == "random":
        cops = [RandomCop(rng.getrandbits(32)) for _ in range(rng.randint(1, n + 1))]
    else:
        cops = [AlgorithmTwoCop()]
    config = Configuration(
        tuple(tuple(rng.randrange(d) for d in shape.dims) for _ in cops),
        tuple(rng.randrange(d) for d in shape.dims),
    )
    evader_ok = len(cops) < n and all(manhattan(c, config.robber) % 2 for c in config.cops)
    choices = ["greedy1", "greedy2", "greedy3", "random"] + (["evader"] * 2 if evader_ok else [])
    pick = rng.choice(choices)
    if pick == "evader":
        robber = ParityEvader()
    elif pick == "random":
        robber = RandomRobber(rng.getrandbits(32))
    else:
        robber = GreedyRobber(pick)
    cap = tick_cap if tick_cap is not None else 2 * n * shape.dim_sum
    return run(config, robber, cops, shape, tick_cap=cap)


def check_random_traces(
    shapes: Sequence[GridShape], count: int, seed: int = 0, tick_cap: Optional[int] = None
) -> ClaimReport:
    """Trace invariants (parity, alternation, favorable jumps) over ``count`` random games."""
    rng = random.Random(seed)
    scope = {"shapes": [str(s) for s in shapes], "games": count, "seed": seed}
    ticks = 0
    for k in range(count):
        shape = shapes[k % len(shapes)]
        trace = random_game(shape, rng, tick_cap)
        report = check_trace_invariants(trace)
        if not report.holds:
            report.claim = "lemma1"
            report.scope = {**scope, "game": k}
            return report
        ticks += len(trace.records)
    return ClaimReport("lemma1", scope, HOLDS, {"games": count, "ticks_checked": ticks})


def check_lemma3_corpus(
    shapes: Sequence[GridShape], count: int, seed: int = 0, node_budget: int = DEFAULT_NODE_BUDGET
) -> ClaimReport:
    """Favorable-jump capture bound on every cop of full algorithm-1 teams.

    Each shape contributes ``count`` games against random and greedy robbers,
    plus, on grids with at most 64 nodes, the oracle's longest-survival line
    from every start.
    """
    rng = random.Random(seed)
    scope = {"shapes": [str(s) for s in shapes], "games_per_shape": count, "seed": seed}
    games = 0
    worst = Fraction(0)
    for shape in shapes:
        team = algorithm_one_team(shape.n)
        traces = []
        for _ in range(count):
            config = Configuration(
                tuple(tuple(rng.randrange(d) for d in shape.dims) for _ in team),
                tuple(rng.randrange(d) for d in shape.dims),
            )
            pick = rng.choice(["greedy1", "greedy2", "greedy3", "random"])
            robber = RandomRobber(rng.getrandbits(32)) if pick == "random" else GreedyRobber(pick)
            traces.append(run(config, robber, team, shape))
        if shape.node_count <= 64 and shape.node_count ** (shape.n + 1) <= 10**5:
            oracle = AdversarialOracle(shape, team, node_budget)
            bound = shape.n * shape.dim_sum
            for config in all_configurations(shape, shape.n):
                traces.append(oracle.witness(config, bound + 1))
        for trace in traces:
            games += 1
            for i in range(shape.n):
                report = check_lemma3(trace, i)
                if not report.holds:
                    report.scope = {**scope, **report.scope}
                    return report
                if trace.outcome.captured and trace.outcome.cop == i:
                    worst = max(worst, Fraction(report.stats["favorable_at_end"], shape.dim_sum))
    return ClaimReport("lemma3", scope, HOLDS, {"games": games, "max_favorable_share_at_capture": worst})
