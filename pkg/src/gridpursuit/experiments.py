"""Monte Carlo harness: repeated games from uniform random starts.

Per-trial seeds come from SplitMix64 over ``(master_seed, trial_index)`` so
every trial can be replayed on its own and results do not depend on how
trials are split across worker processes.
"""

from __future__ import annotations

import csv
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional

from .cops import parse_cop_strategy
from .engine import Outcome, default_tick_cap, play_out, run
from .grid import Configuration, GridShape, format_position
from .robbers import parse_robber_strategy
from .seeding import derive_trial_seed

SUMMARY_FORMAT = "gridpursuit-summary"
CSV_COLUMNS = (
    "trial_index",
    "seed",
    "cop_positions",
    "robber_position",
    "outcome",
    "robber_jumps",
    "capture_half_step",
    "capturing_cop",
)
TIE_RULES = {
    "greedy": "first maximal candidate in neighbor order (ascending axis, -1 before +1); greedy3 ties at rel. tol 1e-12",
    "alg2s": "equal gaps: step toward the robber on axis 0",
    "evader": "free neighbor maximizing min distance to a cop, first in neighbor order",
}


def random_initial_configuration(shape: GridShape, m: int, seed: int) -> Configuration:
    """Cops then robber, each uniform over the grid via independent per-axis draws."""
    rng = random.Random(seed)
    cops = tuple(tuple(rng.randrange(d) for d in shape.dims) for _ in range(m))
    robber = tuple(rng.randrange(d) for d in shape.dims)
    return Configuration(cops, robber)


@dataclass(frozen=True)
class ExperimentSpec:
    shape: GridShape
    cops: tuple[str, ...]
    robber: str
    trials: int = 10_000
    master_seed: int = 0
    tick_cap: Optional[int] = None
    csv_path: Optional[Path] = None
    summary_path: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if not self.cops:
            raise ValueError("an experiment needs at least one cop")
        # Fail early on unknown names.
        for name in self.cops:
            parse_cop_strategy(name)
        if self.robber in ("interactive",):
            raise ValueError("interactive robbers cannot run in batch experiments")
        parse_robber_strategy(self.robber)

    def effective_tick_cap(self) -> int:
        if self.tick_cap is not None:
            return self.tick_cap
        return default_tick_cap(self.shape, [parse_cop_strategy(c) for c in self.cops])

    def echo(self) -> dict:
        return {
            "shape": str(self.shape),
            "cops": list(self.cops),
            "robber": self.robber,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "tick_cap": self.effective_tick_cap(),
        }


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    seed: int
    initial: Configuration
    outcome: Outcome

    def csv_row(self) -> list:
        o = self.outcome
        return [
            self.trial_index,
            self.seed,
            ";".join(format_position(c) for c in self.initial.cops),
            format_position(self.initial.robber),
            "captured" if o.captured else "evaded",
            o.robber_jumps,
            o.half_step or "",
            "" if o.cop is None else o.cop,
        ]


@dataclass
class StatsSummary:
    trials: int = 0
    captures: int = 0
    evasions: int = 0
    initial_captures: int = 0
    jump_sum: int = 0
    jump_sq_sum: int = 0
    min_jumps: Optional[int] = None
    max_jumps: Optional[int] = None

    def add(self, outcome: Outcome) -> None:
        self.trials += 1
        if not outcome.captured:
            self.evasions += 1
            return
        k = outcome.robber_jumps
        self.captures += 1
        self.initial_captures += k == 0
        self.jump_sum += k
        self.jump_sq_sum += k * k
        self.min_jumps = k if self.min_jumps is None else min(self.min_jumps, k)
        self.max_jumps = k if self.max_jumps is None else max(self.max_jumps, k)

    @property
    def mean(self) -> Optional[float]:
        return float(Fraction(self.jump_sum, self.captures)) if self.captures else None

    @property
    def variance(self) -> Optional[float]:
        """Unbiased sample variance of robber jumps over captured trials."""
        c = self.captures
        if c < 2:
            return None
        return float(Fraction(c * self.jump_sq_sum - self.jump_sum**2, c * (c - 1)))

    @property
    def standard_error(self) -> Optional[float]:
        v = self.variance
        return None if v is None else math.sqrt(v / self.captures)

    @property
    def capture_rate(self) -> float:
        return self.captures / self.trials if self.trials else 0.0

    def as_dict(self) -> dict:
        out = asdict(self)
        out.update(
            mean=self.mean,
            variance=self.variance,
            standard_error=self.standard_error,
            capture_rate=self.capture_rate,
        )
        return out


def run_trial(spec: ExperimentSpec, trial_index: int) -> TrialRecord:
    seed = derive_trial_seed(spec.master_seed, trial_index)
    initial = random_initial_configuration(spec.shape, len(spec.cops), seed)
    cops, robber = _strategies(spec, seed)
    outcome = play_out(initial, robber, cops, spec.shape, spec.tick_cap)
    return TrialRecord(trial_index, seed, initial, outcome)


def replay_trial(spec: ExperimentSpec, trial_index: int):
    """Full trace of one trial, for inspecting a single row of an experiment."""
    seed = derive_trial_seed(spec.master_seed, trial_index)
    initial = random_initial_configuration(spec.shape, len(spec.cops), seed)
    cops, robber = _strategies(spec, seed)
    return run(initial, robber, cops, spec.shape, spec.tick_cap, seed=seed)


def _strategies(spec: ExperimentSpec, seed: int):
    # Fresh instances per trial so stateful strategies never leak across trials.
    cops = [parse_cop_strategy(name) for name in spec.cops]
    robber = parse_robber_strategy(spec.robber)
    for strategy in [*cops, robber]:
        strategy.reseed(seed)
    return cops, robber


def _run_chunk(args) -> list[TrialRecord]:
    spec, start, stop = args
    return [run_trial(spec, k) for k in range(start, stop)]


def iter_trials(spec: ExperimentSpec, workers: int = 1, chunk: int = 1000) -> Iterator[TrialRecord]:
    """Trial records in index order, whatever the worker count."""
    if workers <= 1:
        for k in range(spec.trials):
            yield run_trial(spec, k)
        return
    bounds = [(spec, a, min(a + chunk, spec.trials)) for a in range(0, spec.trials, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for records in pool.map(_run_chunk, bounds):
            yield from records


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> StatsSummary:
    """Run every trial, streaming per-trial CSV rows and writing the summary if paths are set."""
    summary = StatsSummary()
    handle = None
    writer = None
    if spec.csv_path is not None:
        handle = open(spec.csv_path, "w", newline="", encoding="utf-8")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
    try:
        for record in iter_trials(spec, workers):
            summary.add(record.outcome)
            if writer is not None:
                writer.writerow(record.csv_row())
    finally:
        if handle is not None:
            handle.close()
    if spec.summary_path is not None:
        Path(spec.summary_path).write_text(format_summary(spec, summary), encoding="utf-8")
    return summary


def format_summary(spec: ExperimentSpec, summary: StatsSummary) -> str:
    doc = {
        "format": SUMMARY_FORMAT,
        "version": 1,
        "spec": spec.echo(),
        "tie_rules": TIE_RULES,
        "seed_derivation": "splitmix64(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15)",
        "caveats": [
            "initial configurations that are already terminating count as captures after 0 robber jumps",
        ],
        "stats": summary.as_dict(),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class FrequencyResult:
    trials: int
    captures: int
    capture_fraction: float
    standard_error: float
    exact_even_fraction: Fraction

    @property
    def z_from_half(self) -> float:
        return (self.capture_fraction - 0.5) / self.standard_error


def theorem4_frequency(
    shape: GridShape,
    trials: int,
    master_seed: int,
    robber: str = "greedy3",
    tick_cap: Optional[int] = None,
    workers: int = 1,
) -> FrequencyResult:
    """Capture fraction of one algorithm-2 cop from uniform random starts.

    The standard error is that of a fair coin over ``trials`` draws, which is
    the yardstick for comparing against one half. The default cap of
    ``4 * (d0 + d1)`` ticks is several times the worst adversarial capture
    time of an even start, so only odd starts run into it.
    """
    from .verification import enumerate_parity_fraction

    if shape.n != 2:
        raise ValueError("the single-cop frequency experiment is 2-D only")
    if tick_cap is None:
        tick_cap = 4 * shape.dim_sum
    spec = ExperimentSpec(shape, ("alg2s",), robber, trials, master_seed, tick_cap)
    summary = StatsSummary()
    for record in iter_trials(spec, workers):
        summary.add(record.outcome)
    return FrequencyResult(
        trials,
        summary.captures,
        summary.capture_rate,
        math.sqrt(0.25 / trials),
        enumerate_parity_fraction(shape),
    )
