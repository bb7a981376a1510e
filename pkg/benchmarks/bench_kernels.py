"""Time the hot kernels and a full OMP solve under each available backend.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from complex_omp import _backend
from complex_omp.core import argmax_abs_correlation, lstsq, min_eigen_hermitian
from complex_omp.gtd import build_gtd_dictionary, paper_preset, synthesize_measurement
from complex_omp.omp import StoppingRule, omp_solve


def cases(rng):
    A = rng.standard_normal((30, 5)) + 1j * rng.standard_normal((30, 5))
    y = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    X = rng.standard_normal((40, 32)) + 1j * rng.standard_normal((40, 32))
    G = X.conj().T @ X
    D = build_gtd_dictionary(paper_preset())
    scene = paper_preset(scatterers=[(0.3, 1.0), (2.25, 1j), (4.75, -1.0)])
    yg = synthesize_measurement(scene)
    return {
        "argmax |D^H r| (30x101)": lambda: argmax_abs_correlation(D.matrix, yg),
        "lstsq (30x5)": lambda: lstsq(A, y),
        "min eigenvalue (32x32)": lambda: min_eigen_hermitian(G),
        "omp_solve, GTD preset, 5 iters": lambda: omp_solve(D, yg, StoppingRule.iterations(5)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _backend.available()
    results = {}
    for name in backends:
        _backend.set_backend(name)
        for label, fn in cases(np.random.default_rng(0)).items():
            timer = timeit.Timer(fn)
            number, _ = timer.autorange()
            best = min(timer.repeat(args.repeat, number)) / number
            results.setdefault(label, {})[name] = best
    _backend.set_backend("auto")

    head = f"{'kernel':34s}" + "".join(f"{b:>14s}" for b in backends)
    if len(backends) > 1:
        head += f"{'speedup':>10s}"
    print(head)
    for label, row in results.items():
        line = f"{label:34s}" + "".join(f"{row[b] * 1e6:11.1f} us" for b in backends)
        if "cython" in row:
            line += f"{row['python'] / row['cython']:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
