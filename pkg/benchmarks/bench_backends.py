"""Time tree induction with the compiled and the pure-Python kernels.

    python benchmarks/bench_backends.py [--repeat N] [--datasets wine glass ...]

Both kernels must produce identical trees; the script checks that before
reporting timings.
"""

import argparse
import time

from tsallis_tree._backend import get_kernel
from tsallis_tree.criterion import SplitCriterion
from tsallis_tree.dataset import UCI_BUNDLED, load_bundled
from tsallis_tree.tree import TreeParams, build_tree

CRITERIA = [SplitCriterion.gini(), SplitCriterion.tsallis(2.6), SplitCriterion.tsallis_gain_ratio(0.5)]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--datasets", nargs="+", default=list(UCI_BUNDLED))
    args = parser.parse_args()

    compiled = get_kernel("cython")
    python = get_kernel("python")
    print(f"{'dataset':<12}{'n':>6}{'criterion':>26}{'cython ms':>12}{'python ms':>12}{'speedup':>9}")
    for name in args.datasets:
        data = load_bundled(name)
        for criterion in CRITERIA:
            params = TreeParams(criterion)
            a = build_tree(data, params, kernel=compiled)
            b = build_tree(data, params, kernel=python)
            if a != b:
                raise SystemExit(f"{name} {criterion}: kernels disagree")
            t_c = best_time(lambda: build_tree(data, params, kernel=compiled), args.repeat)
            t_p = best_time(lambda: build_tree(data, params, kernel=python), args.repeat)
            print(f"{name:<12}{data.n_instances:>6}{str(criterion):>26}{1e3 * t_c:>12.2f}{1e3 * t_p:>12.1f}{t_p / t_c:>8.0f}x")


if __name__ == "__main__":
    main()
