"""Compare the numba and pure-numpy compute backends.

The backend is fixed at import time by REFLECTSIM_BACKEND, so each
backend runs in a child process; the parent collects and tabulates.

Usage:
    python benchmarks/bench_kernels.py [--grid 72] [--raster 512] [--repeats 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def child(args):
    import numpy as np

    import reflectsim as rs
    from reflectsim._kernels import active_backend

    f0 = rs.frequency_point_ghz(150.0)
    spacing = f0.wavelength / 4
    grid = rs.make_grid(args.grid * spacing, args.grid * spacing, spacing)
    incidence = rs.Direction.from_degrees(-60.0, 0.0)
    broadside = rs.Direction(0.0, 0.0)
    profile = rs.plane_wave_profile(grid, incidence, broadside, f0)
    illum = rs.plane_wave_illumination(grid, incidence, f0)
    raster = rs.UVRaster.square(args.raster)
    small = rs.UVRaster.square(args.raster // 4)
    cut = rs.PlaneCut.from_step(0.0, 0.25)

    cases = {
        f"fft raster {args.raster}^2": lambda: rs.pattern_fft(grid, profile, illum, f0, raster),
        f"direct raster {args.raster // 4}^2": lambda: rs.pattern_direct(grid, profile, illum, f0, small),
        f"direct cut {cut.n_samples}": lambda: rs.pattern_direct(grid, profile, illum, f0, cut),
    }
    out = {"backend": active_backend(), "grid": grid.n_elements, "timings": {}}
    for name, fn in cases.items():
        fn()  # warm up: first call pays any JIT cost
        best = float("inf")
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        out["timings"][name] = best
    checksum = float(np.abs(rs.pattern_fft(grid, profile, illum, f0, raster).values).sum())
    out["checksum"] = checksum
    print(json.dumps(out))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=72, help="elements per side")
    parser.add_argument("--raster", type=int, default=512, help="raster samples per side")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--_child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args._child:
        child(args)
        return

    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, REFLECTSIM_BACKEND=backend)
        cmd = [
            sys.executable, os.path.abspath(__file__), "--_child",
            "--grid", str(args.grid), "--raster", str(args.raster),
            "--repeats", str(args.repeats),
        ]
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        results[backend] = json.loads(proc.stdout.splitlines()[-1])

    if results["numba"]["backend"] != "numba":
        print("note: numba unavailable, both runs used the numpy backend")
    drift = abs(results["numba"]["checksum"] - results["numpy"]["checksum"])
    scale = max(1.0, abs(results["numpy"]["checksum"]))
    agree = drift / scale
    n = results["numpy"]["grid"]

    print(f"\n{args.grid}x{args.grid} grid ({n} elements), best of {args.repeats}")
    print(f"{'case':<24} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    for name, t_numpy in results["numpy"]["timings"].items():
        t_numba = results["numba"]["timings"][name]
        print(f"{name:<24} {t_numba:>9.4f}s {t_numpy:>9.4f}s {t_numpy / t_numba:>8.1f}x")
    print(f"cross-backend checksum agreement: {agree:.2e} relative")


if __name__ == "__main__":
    main()
