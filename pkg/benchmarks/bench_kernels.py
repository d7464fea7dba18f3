"""Timing comparison of the numba and pure-numpy kernel paths.

Runs each hot kernel on representative workloads (per-polygon coordinate
batches, full-mesh load moments, a complete solve) and prints a speedup
table.  Usage::

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from stokes_sdg import _kernels
from stokes_sdg.assembly import RTTable, assemble_system, load_moments
from stokes_sdg.cases import get_case
from stokes_sdg.hdivrec import build_basis
from stokes_sdg.mesh import build_staggered, generate_polygonal, generate_triangular
from stokes_sdg.solver import solve


def timeit(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_coords(repeat):
    ang = 2.0 * np.pi * np.arange(6) / 6
    verts = 0.5 + 0.3 * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    basis = build_basis(verts)
    rng = np.random.default_rng(0)
    wts = rng.dirichlet(np.ones(6), size=20000)
    pts = 0.5 + 0.9 * (wts @ verts - 0.5)
    args = (basis.poly.verts, basis.poly.normals, pts)
    rows = []
    t_np = timeit(lambda: _kernels.coords_grads_np(*args), repeat)
    rows.append(("coords_grads (hexagon, 20k pts)", t_np, None))
    if _kernels.coords_grads_nb is not None:
        _kernels.coords_grads_nb(*args)  # compile
        t_nb = timeit(lambda: _kernels.coords_grads_nb(*args), repeat)
        rows[-1] = (rows[-1][0], t_np, t_nb)
    return rows


def bench_moments(repeat):
    rows = []
    case = get_case("taylor")

    def f(x):
        return case.f(x, 1.0)

    for label, mesh in (
        ("load moments (tri n=32)", generate_triangular(32)),
        ("load moments (poly n=16)", generate_polygonal(16)),
    ):
        stag = build_staggered(mesh)
        rt = RTTable(stag)
        saved = _kernels.cell_moments
        try:
            _kernels.cell_moments = _kernels.cell_moments_np
            t_np = timeit(lambda: load_moments(stag, f, rt), repeat)
            t_nb = None
            if _kernels.cell_moments_nb is not None:
                _kernels.cell_moments = _kernels.cell_moments_nb
                load_moments(stag, f, rt)  # compile
                t_nb = timeit(lambda: load_moments(stag, f, rt), repeat)
        finally:
            _kernels.cell_moments = saved
        rows.append((label, t_np, t_nb))
    return rows


def bench_solve(repeat):
    stag = build_staggered(generate_triangular(16))
    case = get_case("taylor")
    rows = []
    saved = _kernels.cell_moments
    try:
        _kernels.cell_moments = _kernels.cell_moments_np
        t_np = timeit(lambda: solve(assemble_system(stag, case, "sdg1", 1.0)), repeat)
        t_nb = None
        if _kernels.cell_moments_nb is not None:
            _kernels.cell_moments = _kernels.cell_moments_nb
            solve(assemble_system(stag, case, "sdg1", 1.0))
            t_nb = timeit(lambda: solve(assemble_system(stag, case, "sdg1", 1.0)),
                          repeat)
    finally:
        _kernels.cell_moments = saved
    rows.append(("assemble + solve (tri n=16)", t_np, t_nb))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rows = bench_coords(args.repeat) + bench_moments(args.repeat) \
        + bench_solve(args.repeat)
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for label, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {'n/a':>10}  {'':>8}")
        else:
            print(f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms"
                  f"  {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
