"""Compare the compiled and pure-Python normal-form kernels.

    python3 bench/benchmark_kernels.py [--sizes 4 6 8 12] [--repeat 5]

Two workloads: boundary matrices of full 2-skeleta (sparse, entries +-1,
the shape the package produces) and dense random matrices with entries in
[-9, 9]. The compiled Smith kernel runs on int64 and raises OverflowError
when transform entries outgrow it; like ``reltrace.kernels`` the benchmark
then reruns the call in Python, and it reports how often that happened.
Results of both backends are checked for equality.
"""
import argparse
import random
import statistics
import time

from reltrace import _pykernels
from reltrace.complexes import chain_complex, full_skeleton

try:
    from reltrace import _ckernels
except ImportError:
    _ckernels = None


def boundary_workload(n):
    data = chain_complex(full_skeleton(n, 2))
    return [data.boundaries[1], data.boundaries[2]]


def dense_workload(n, rng, count=10):
    return [[[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)] for _ in range(count)]


class Fallback:
    """Calls the compiled kernel, rerunning in Python on overflow."""

    def __init__(self):
        self.count = 0

    def __call__(self, mod_fn, py_fn, *args):
        try:
            return mod_fn(*args)
        except OverflowError:
            self.count += 1
            return py_fn(*args)


def timed(fn, items, repeat):
    samples, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [fn(x) for x in items]
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), out


def cases(mats):
    """(kernel name, inputs, python callable, compiled callable or None)."""
    smith_in = [(M, len(M), len(M[0])) for M in mats]
    herm_in = [(M, len(M[0])) for M in mats]
    red_in = []
    for M in mats:
        H = _pykernels.hermite_rows(M, len(M[0]))
        if H:
            red_in.append(([7 * x + 3 for x in M[0]], H))
    c = _ckernels
    return [
        ("smith", smith_in, _pykernels.smith, c and c.smith),
        ("hermite", herm_in, _pykernels.hermite_rows, c and c.hermite_rows),
        ("reduce", red_in, _pykernels.reduce_vector, c and c.reduce_vector),
    ]


def run_workload(label, mats, repeat):
    for name, inputs, py_fn, c_fn in cases(mats):
        tp, outp = timed(lambda a: py_fn(*a), inputs, repeat)
        if c_fn is None:
            print(f"{label:<14} {name:<8} {tp * 1e3:>10.2f} {'-':>10} {'-':>8} {'-':>9}")
            continue
        guard = Fallback()
        tc, outc = timed(lambda a: guard(c_fn, py_fn, *a), inputs, repeat)
        if outp != outc:
            raise SystemExit(f"backends disagree on {name} for {label}")
        fallbacks = f"{guard.count // repeat}/{len(inputs)}"
        print(f"{label:<14} {name:<8} {tp * 1e3:>10.2f} {tc * 1e3:>10.2f} "
              f"{tp / tc:>7.1f}x {fallbacks:>9}")


def main(argv=None):
    ap = argparse.ArgumentParser(description="Compare compiled and pure-Python kernels.")
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 6, 8, 12])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; timing the Python backend only")
    rng = random.Random(args.seed)
    print(f"{'workload':<14} {'kernel':<8} {'python ms':>10} {'cython ms':>10} "
          f"{'speedup':>8} {'fallback':>9}")
    for n in args.sizes:
        run_workload(f"boundary K{n}", boundary_workload(n), args.repeat)
    for n in args.sizes:
        run_workload(f"dense {n}x{n}", dense_workload(n, rng), args.repeat)


if __name__ == "__main__":
    main()
