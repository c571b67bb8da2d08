"""Compare the compiled chromatic kernel against the pure-Python twin.

Builds line graphs of seeded random bounded-codegree hypergraphs, solves
each with both kernels, checks they agree, and prints per-instance and
median timings.  Run as:

    python3 benchmarks/bench_kernels.py [--count 12] [--min-edges 14]
                                        [--max-edges 20] [--repeats 3]
"""

import argparse
import random
import statistics
import time

from hyperchrom import GeneratorParams, line_graph, random_bounded_codegree
from hyperchrom import _kernel_py

try:
    from hyperchrom import _kernel
except ImportError:
    _kernel = None


def make_instances(count: int, min_edges: int, max_edges: int, base_seed: int):
    out = []
    seed = base_seed
    while len(out) < count and seed < base_seed + 10_000:
        seed += 1
        rng = random.Random(seed)
        n = rng.randint(10, 16)
        h = random_bounded_codegree(
            GeneratorParams(
                seed=seed,
                n=n,
                t=rng.randint(2, 3),
                size_range=(2, 4),
                density=rng.randint(max_edges, 2 * max_edges),
            )
        )
        if min_edges <= h.m <= max_edges:
            out.append((seed, list(line_graph(h).adj)))
    return out


def bench_one(solver, adj, repeats, time_cap_ms):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = solver(adj, time_cap_ms)
        best = min(best, time.perf_counter() - t0)
    return result, best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=12)
    parser.add_argument("--min-edges", type=int, default=14)
    parser.add_argument("--max-edges", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=2_000)
    parser.add_argument("--time-cap-ms", type=int, default=60_000)
    args = parser.parse_args()

    if _kernel is None:
        print("compiled kernel not built; nothing to compare "
              "(pip install -e . --no-build-isolation builds it)")
        return 1

    instances = make_instances(args.count, args.min_edges, args.max_edges, args.seed)
    print(f"{len(instances)} line graphs, {args.repeats} repeats each, best-of timing\n")
    print(f"{'seed':>6} {'verts':>5} {'chi':>4} {'cython':>10} {'python':>10} {'speedup':>8}")

    speedups = []
    for seed, adj in instances:
        (chi_c, _, proved_c), t_c = bench_one(_kernel.solve_chromatic, adj, args.repeats, args.time_cap_ms)
        (chi_p, _, proved_p), t_p = bench_one(_kernel_py.solve_chromatic, adj, args.repeats, args.time_cap_ms)
        if (chi_c, proved_c) != (chi_p, proved_p):
            print(f"{seed:>6}  MISMATCH: cython {chi_c}/{proved_c} python {chi_p}/{proved_p}")
            return 1
        speedups.append(t_p / t_c if t_c > 0 else float("inf"))
        print(
            f"{seed:>6} {len(adj):>5} {chi_c:>4} {t_c * 1e3:>8.2f}ms {t_p * 1e3:>8.2f}ms "
            f"{speedups[-1]:>7.1f}x"
        )

    print(f"\nmedian speedup: {statistics.median(speedups):.1f}x "
          f"(min {min(speedups):.1f}x, max {max(speedups):.1f}x)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
