"""Exhaustive capture sweeps on small grids, one line per grid.

For each grid: worst adversarial capture time of a full algorithm-1 team
against its n * sum(d) bound, and for 2-D grids the worst capture time of a
single algorithm-2 cop over even-distance starts.

    python3 scripts/sweep_claims.py --max-nodes 36
"""

import argparse
import itertools
import time

from gridpursuit.grid import GridShape
from gridpursuit.verification import HOLDS, check_theorem2, check_theorem3_and_5


def shapes(max_nodes: int, max_axes: int):
    for n in range(1, max_axes + 1):
        for dims in itertools.combinations_with_replacement(range(2, max_nodes + 1), n):
            shape = GridShape(dims)
            # team sweeps visit node_count ** (n + 1) states
            if shape.node_count <= max_nodes and shape.node_count ** (n + 1) <= 4 * 10**5:
                yield shape


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-nodes", type=int, default=36)
    parser.add_argument("--max-axes", type=int, default=3)
    args = parser.parse_args()

    print(f"{'grid':>8} {'team worst':>10} {'bound':>6} {'single T_max':>12} {'secs':>6}")
    for shape in shapes(args.max_nodes, args.max_axes):
        start = time.perf_counter()
        team = check_theorem2(shape)
        worst = team.stats.get("max_capture_time", "VIOLATED") if team.verdict == HOLDS else "VIOLATED"
        single = ""
        if shape.n == 2:
            r = check_theorem3_and_5(shape)
            single = r.stats.get("t_max", r.verdict)
        print(f"{str(shape):>8} {worst!s:>10} {shape.n * shape.dim_sum:>6} {single!s:>12} {time.perf_counter() - start:6.1f}")


if __name__ == "__main__":
    main()
