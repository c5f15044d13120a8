"""Mean robber jumps for the three greedy robbers against two algorithm-1 cops.

Prints one row per grid and optionally writes per-cell CSV and summary files.

    python3 scripts/reproduce_table1.py --trials 10000 --seed 7 --out results/table1
"""

import argparse
import time
from pathlib import Path

from gridpursuit.experiments import ExperimentSpec, run_experiment
from gridpursuit.grid import GridShape

REFERENCE = {
    10: (8, 11, 13),
    20: (19, 24, 32),
    30: (30, 37, 50),
}
ROBBERS = ("greedy1", "greedy2", "greedy3")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sides", type=int, nargs="+", default=sorted(REFERENCE))
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", type=Path, help="directory for per-cell CSV and summary files")
    args = parser.parse_args()
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)

    print(f"{'grid':>7} " + " ".join(f"{r:>16}" for r in ROBBERS))
    for side in args.sides:
        cells = []
        for k, robber in enumerate(ROBBERS):
            name = f"{side}x{side}-{robber}"
            spec = ExperimentSpec(
                GridShape((side, side)),
                ("alg1:0", "alg1:1"),
                robber,
                args.trials,
                args.seed,
                csv_path=args.out / f"{name}.csv" if args.out else None,
                summary_path=args.out / f"{name}.json" if args.out else None,
            )
            start = time.perf_counter()
            summary = run_experiment(spec, workers=args.workers)
            ref = REFERENCE.get(side)
            ref_text = f" ({ref[k]})" if ref else ""
            cells.append(f"{summary.mean:8.2f}{ref_text:>5} {time.perf_counter() - start:4.1f}s")
        print(f"{side}x{side:<4} " + " ".join(f"{c:>16}" for c in cells))


if __name__ == "__main__":
    main()
