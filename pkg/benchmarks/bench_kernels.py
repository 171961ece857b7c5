"""Compare the compiled and numpy kernel backends.

Run with ``python benchmarks/bench_kernels.py``. Prints the best-of-N wall
time per call for each backend and the speed-up of the compiled one, plus
the largest difference between the two outputs relative to the
largest output magnitude.
"""

import argparse
import timeit

import numpy as np

from ftrfading import kernels
from ftrfading.model import FtrParams, mixture_coeffs, poly_coeffs


def workloads(n_points):
    p = FtrParams(15.0, 0.9, 5, 1.0)
    c = mixture_coeffs(p)
    beta = (1 + p.K) / p.gamma_bar
    kappas = np.array([p.K * (1 + d) for d in c.delta])
    weights = np.array(c.alpha)
    x = np.linspace(0.01, 5.0, n_points)

    pc = poly_coeffs(p)
    d = np.sqrt((p.m + p.K) ** 2 - (p.K * p.Delta) ** 2)
    lead, ucoef = (1 + p.K) * (p.m / d) ** p.m, (p.m + p.K) / d
    s = 0.5 + 1j * np.linspace(-200.0, 200.0, n_points)

    # Large-m phase average: 64 equally weighted components at m = 200.
    big_k = 15.0 * (1 + 0.9 * np.cos(np.linspace(0, np.pi, 64)))
    big_w = np.full(64, 1 / 64)
    short = x[:: max(1, n_points // 50)]

    return {
        "mixture_pdf m=5": lambda impl: kernels.mixture_pdf(x, beta, p.m, kappas, weights, impl=impl),
        "mixture_sf m=5": lambda impl: kernels.mixture_sf(x, beta, p.m, kappas, weights, impl=impl),
        "mixture_pdf m=200": lambda impl: kernels.mixture_pdf(x, beta, 200, big_k, big_w, impl=impl),
        "mixture_sf m=200": lambda impl: kernels.mixture_sf(x, beta, 200, big_k, big_w, impl=impl),
        "mixture_pdf 50 pts": lambda impl: kernels.mixture_pdf(short, beta, p.m, kappas, weights, impl=impl),
        "ftr_transform m=5": lambda impl: kernels.ftr_transform(s, pc.a1, pc.a2, pc.a3, pc.a4, p.m, lead, ucoef, impl=impl),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    impls = kernels.implementations()
    print(f"active backend: {kernels.BACKEND}; available: {', '.join(sorted(impls))}")
    print(f"{'kernel':<22}{'backend':<9}{'ms/call':>10}{'speed-up':>10}{'sup rel diff':>14}")
    for name, fn in workloads(args.points).items():
        ref = fn(impls["python"])
        base = None
        for backend in ("python", "cython"):
            if backend not in impls:
                continue
            impl = impls[backend]
            number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(impl), number=1), 1e-6)))
            t = min(timeit.repeat(lambda: fn(impl), number=number, repeat=args.repeat)) / number
            base = base or t
            diff = np.max(np.abs(fn(impl) - ref)) / np.max(np.abs(ref))
            print(f"{name:<22}{backend:<9}{1e3 * t:>10.3f}{base / t:>10.1f}{diff:>14.2e}")


if __name__ == "__main__":
    main()
