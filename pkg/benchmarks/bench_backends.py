"""Time the numba kernels against the pure numpy fallback.

Workloads mirror the hot paths of the analysis pipeline: full-enumeration
row reduction, membership scans, and the two kernel scans, all on the
reference 3125-word code.  The numba column includes a warm-up call so
compilation time is not billed to the measurement.

Run from the repository root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --repeat 3
"""

import argparse
import time

import numpy as np

from zpzp2 import _kernels_numpy as knp
from zpzp2.code import CodeType
from zpzp2.construct import assemble_Sr, realize
from zpzp2.gray import GrayMap

try:
    from zpzp2 import _kernels_numba as knb
except ImportError:
    knb = None


def build_workloads():
    ty = CodeType(5, 2, 20, 1, 2, 1)
    code = realize(ty, assemble_Sr(ty, 13))
    space = code.space
    words = code.codeword_matrix()
    images = GrayMap(5).image_rows(space, words)
    red = code._reduction
    rng = np.random.default_rng(0)
    probes = space.lift(rng.integers(0, space.moduli, size=(20000, space.length)))
    y0 = np.ascontiguousarray(space.y_part(words) % 5)
    g = np.ascontiguousarray(images % 5)

    return [
        (
            "rref 3125x102 mod 5",
            lambda mod: mod.rref_mod(images, 5),
        ),
        (
            "membership, 20000 probes",
            lambda mod: mod.membership_mask(probes, red.rows, red.cols, red.is_unit, 5),
        ),
        (
            "carry kernel scan, 3125 words",
            lambda mod: mod.carry_kernel_mask(
                y0, space.alpha, space.length, red.rows, red.cols, red.is_unit, 5
            ),
        ),
        (
            "translate kernel scan, 3125 words",
            lambda mod: mod.translate_kernel_mask(g, 5),
        ),
    ]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=1, help="best-of repetitions")
    args = parser.parse_args()

    workloads = build_workloads()
    print(f"{'workload':<36} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, run in workloads:
        t_np = best_of(lambda: run(knp), args.repeat)
        if knb is None:
            print(f"{name:<36} {t_np:>9.3f}s {'n/a':>10} {'':>9}")
            continue
        run(knb)  # warm-up: trigger jit compilation
        t_nb = best_of(lambda: run(knb), args.repeat)
        print(f"{name:<36} {t_np:>9.3f}s {t_nb:>9.3f}s {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
