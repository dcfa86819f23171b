"""Compare the compiled enumeration kernel with the numpy fallback.

    python benchmarks/bench_kernel.py [--vars 12 16 20] [--repeat 3] [--seed 0]

Each instance is a random 3-CNF at clause ratio 2 over ``n`` variables with
real weights, counted by plain enumeration (``method="brute"``) so that the
kernel does all of the work.
"""

from __future__ import annotations

import argparse
import random
import time

from diracwmc import kernel, wmc_count
from diracwmc.logic import CnfFormula, WeightFunction


def random_instance(n: int, seed: int):
    rng = random.Random(seed)
    clauses = []
    for _ in range(2 * n):
        vs = rng.sample(range(1, n + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    W = WeightFunction({v: (rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5)) for v in range(1, n + 1)})
    return CnfFormula(n, tuple(clauses)), W


def best_time(fn, repeat: int) -> tuple[float, complex]:
    best, value = float("inf"), 0j
    for _ in range(repeat):
        t = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t)
    return best, value


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, nargs="+", default=[12, 16, 20])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = sorted(kernel.BACKENDS)
    print(f"backends: {', '.join(backends)} (default {kernel.BACKEND})")
    print(f"{'n':>4} " + " ".join(f"{b:>12}" for b in backends) + f" {'speedup':>9}")
    for n in args.vars:
        cnf, W = random_instance(n, args.seed + n)
        times, values = {}, {}
        for b in backends:
            times[b], values[b] = best_time(lambda: wmc_count(cnf, W, method="brute", cap=64, backend=b), args.repeat)
        row = f"{n:>4} " + " ".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if "compiled" in times:
            row += f" {times['python'] / times['compiled']:>8.1f}x"
            assert abs(values["python"] - values["compiled"]) <= 1e-9 * max(1.0, abs(values["python"]))
        print(row)


if __name__ == "__main__":
    main()
