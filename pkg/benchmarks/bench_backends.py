"""Time the compiled kernels against their plain-numpy twins.

Run from the repo root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --repeat 5 --m 500

Each row reports the best of --repeat wall-clock timings per backend;
the first numba call of each kernel is discarded as JIT compilation.
"""

import argparse
import time

import numpy as np

import specreg
from specreg._backend import HAS_NUMBA, kernels, use


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def build_cases(m):
    rng = np.random.default_rng(0)
    P = rng.standard_normal((m, m // 3))
    M = rng.standard_normal((m // 2, m // 2))
    z = rng.standard_normal(1 << 14) + 0j
    cb = specreg.craig_brown()
    ds = specreg.make_dataset(cb, m=m, noise=specreg.NoiseSpec(sigma=0.05))

    thr = 1e-14 * float(np.sum(M * M))
    return [
        (f"qr {m}x{m // 3}", lambda: kernels().mgs_qr(P)),
        (f"jacobi svd {m // 2}x{m // 2}",
         lambda: kernels().jacobi_svd_sweeps(M.copy(), 60, thr)),
        ("fft 16384", lambda: kernels().fft_pow2(z.copy())),
        ("legendre table 60", lambda: kernels().legendre_table(
            60, np.linspace(-1.0, 1.0, m))),
        ("quadrature nodes 200", lambda: kernels().gauss_legendre_nodes(200)),
        (f"projection pipeline m={m}",
         lambda: specreg.run_pipeline(ds, cb.family)),
        (f"discrete pipeline m={m}",
         lambda: specreg.discrete_pipeline(ds)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--m", type=int, default=250, help="sample count")
    args = parser.parse_args()

    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    if not HAS_NUMBA:
        print("numba is not importable; timing the numpy backend only\n")

    cases = build_cases(args.m)
    results = {}
    for backend in backends:
        use(backend)
        for label, fn in cases:
            fn()  # warm caches and, for numba, compile
            results[backend, label] = best_of(args.repeat, fn)

    width = max(len(label) for label, _ in cases)
    header = f"{'kernel':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, _ in cases:
        row = f"{label:<{width}}  "
        for backend in backends:
            row += f"{results[backend, label] * 1e3:>10.2f}ms"
        if len(backends) == 2:
            ratio = results["numpy", label] / results["numba", label]
            row += f"{ratio:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
