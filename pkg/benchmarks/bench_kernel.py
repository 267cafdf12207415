"""Benchmark the compiled Jacobi kernel against the pure-Python fallback.

Times the raw eigensolver on batches of random Hermitian matrices and one
end-to-end pipeline (operator approximation across a context poset) with
each backend patched in.  Run directly:

    python benchmarks/bench_kernel.py
"""

import time

import numpy as np

import toposq.hermitian as hermitian
from toposq import build_poset, daseinise_operator, generate_context
from toposq._kernel import available_backends


def random_hermitian(rng, dim):
    m = rng.randn(dim, dim) + 1j * rng.randn(dim, dim)
    return (m + m.conj().T) / 2.0


def bench_raw(backends, dims=(2, 3, 4, 6, 8), batch=400):
    print("raw eigensolver, %d matrices per dim" % batch)
    header = "dim " + "".join("%14s" % name for name in backends)
    print(header)
    for dim in dims:
        rng = np.random.RandomState(7)
        mats = [random_hermitian(rng, dim) for _ in range(batch)]
        row = "%3d " % dim
        times = {}
        for name, solver in backends.items():
            start = time.perf_counter()
            for a in mats:
                solver(a)
            times[name] = time.perf_counter() - start
            row += "%12.1fms" % (times[name] * 1e3)
        if len(times) == 2:
            row += "   %5.1fx" % (times["python"] / times["cython"])
        print(row)


def bench_pipeline(backends, repeats=40):
    print("\noperator approximation across a 3-context dim-4 poset, "
          "%d operators" % repeats)
    rng = np.random.RandomState(11)
    ops = [random_hermitian(rng, 4) for _ in range(3)]
    # commuting pool: diagonalize one operator's eigenbasis family
    poset = build_poset([generate_context([op]) for op in ops])
    targets = [random_hermitian(rng, 4) for _ in range(repeats)]
    original = hermitian.jacobi_eigh
    try:
        for name, solver in backends.items():
            hermitian.jacobi_eigh = solver
            start = time.perf_counter()
            for a in targets:
                for key in poset.keys():
                    daseinise_operator(a, poset[key], "outer")
                    daseinise_operator(a, poset[key], "inner")
            elapsed = time.perf_counter() - start
            print("%10s %10.1fms" % (name, elapsed * 1e3))
    finally:
        hermitian.jacobi_eigh = original


def check_agreement(backends):
    if len(backends) < 2:
        return
    rng = np.random.RandomState(3)
    worst = 0.0
    for dim in (2, 4, 6):
        for _ in range(50):
            a = random_hermitian(rng, dim)
            w1, _ = backends["python"](a)
            w2, _ = backends["cython"](a)
            worst = max(worst, float(np.max(np.abs(w1 - w2))))
    print("\nmax eigenvalue deviation between backends: %.2e" % worst)


def main():
    backends = available_backends()
    print("backends available:", ", ".join(sorted(backends)))
    if len(backends) == 1:
        print("compiled kernel missing; timing the fallback only")
    bench_raw(backends)
    bench_pipeline(backends)
    check_agreement(backends)


if __name__ == "__main__":
    main()
