"""Benchmark the numba kernels against their pure-numpy fallbacks.

Run with numba enabled (the default):

    python3 benchmarks/kernel_benchmark.py

The script times both variants of each kernel in-process and verifies
that they produce identical results, so it doubles as an equivalence
smoke test.  To benchmark a fully numba-free import, set
PERCLAP_NUMBA=0 — the numba columns then report "disabled".
"""

import argparse
import time

import numpy as np

from perclap import LatticeBox, kernels
from perclap.jitshim import NUMBA_ENABLED
from perclap.kernels import derive_seed


def bench(fn, *args, repeat=5):
    fn(*args)  # warm up (jit compilation, caches)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def row(name, numpy_t, numba_t):
    if numba_t is None:
        print(f"{name:28s} numpy {numpy_t * 1e3:9.2f} ms   numba  disabled")
    else:
        speedup = numpy_t / numba_t
        print(f"{name:28s} numpy {numpy_t * 1e3:9.2f} ms   "
              f"numba {numba_t * 1e3:9.2f} ms   x{speedup:.2f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--edges", type=int, default=5_000_000,
                        help="uniforms / open-mask sample size")
    parser.add_argument("--vertices", type=int, default=1_000_000,
                        help="union-find problem size (d=1 box)")
    parser.add_argument("--cut-vertices", type=int, default=18,
                        help="cluster size for the exhaustive cut search")
    args = parser.parse_args()

    seed = derive_seed(2024, 0)

    t_np, u_np = bench(kernels.uniforms_numpy, seed, args.edges)
    if NUMBA_ENABLED:
        t_nb, u_nb = bench(kernels.uniforms_numba, seed, args.edges)
        assert np.array_equal(u_np, u_nb), "uniforms variants disagree"
    else:
        t_nb = None
    row(f"uniforms (n={args.edges:.0e})", t_np, t_nb)

    box = LatticeBox(1, args.vertices)
    eu, ev = box.candidate_edges()
    mask = kernels.edge_open_mask(seed, box.n_edges, 0.5)
    oeu, oev = eu[mask], ev[mask]
    t_np, r_np = bench(kernels.component_roots_numpy, box.n_vertices, oeu, oev)
    if NUMBA_ENABLED:
        t_nb, r_nb = bench(kernels.component_roots_numba, box.n_vertices, oeu, oev)
        assert np.array_equal(r_np, r_nb), "component-root variants disagree"
    else:
        t_nb = None
    row(f"component_roots (n={args.vertices:.0e})", t_np, t_nb)

    n = args.cut_vertices
    path_eu = np.arange(n - 1, dtype=np.int64)
    path_ev = np.arange(1, n, dtype=np.int64)
    t_np, c_np = bench(kernels.best_cheeger_cut_numpy, n, path_eu, path_ev, repeat=3)
    if NUMBA_ENABLED:
        t_nb, c_nb = bench(kernels.best_cheeger_cut_numba, n, path_eu, path_ev, repeat=3)
        assert c_np[0] * c_nb[1] == c_nb[0] * c_np[1], "cut variants disagree"
    else:
        t_nb = None
    row(f"best_cheeger_cut (n={n})", t_np, t_nb)


if __name__ == "__main__":
    main()
