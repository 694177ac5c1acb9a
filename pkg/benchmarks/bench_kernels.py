"""Time the numba kernels against the numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel is run once to warm up (numba compiles on first call), then
timed ``--repeat`` times; the best time is reported along with whether the
two backends agree.
"""
import argparse
import time

import numpy as np

from renormlab import kernels


def cases():
    rng = np.random.default_rng(0)
    xs = rng.uniform(0, 1, 200_000)
    traj = np.stack([kernels.NUMPY["quad_iterate"](4.0, np.linspace(0, 1, 2001), k) for k in range(8)], axis=1)
    seeds = np.stack(np.meshgrid(np.linspace(-2, 2, 32), np.linspace(-2, 2, 32)), -1).reshape(-1, 2)
    ts = np.linspace(0, 1, 4097)
    # nested interval of the 8th renormalization near the cascade limit
    u, v = 0.4990, 0.5010
    return {
        "quad_iterate": (4.0, xs, 50),
        "quad_orbit": (3.9, 0.3, 1_000_000),
        "separation": (traj, 0.1),
        "henon_fate": (1.4, 0.3, 0.35, 0.35, 200_000, 100.0, 64, 1e-9, 100),
        "henon_keep": (1.4, 0.3, 0.35, 0.35, 1000, 200_000, 100.0),
        "henon_newton": (1.4, 0.3, seeds, 6, 60, 1e-11),
        "bifurcation": (np.linspace(2.9, 4.0, 400), 300, 500, 200, 0.5),
        "rescaled_quad": (3.5699456, u, v, -1, ts, 16),
    }


def same(r1, r2):
    if isinstance(r1, tuple):
        return all(same(a, b) for a, b in zip(r1, r2))
    return np.allclose(np.asarray(r1, dtype=float), np.asarray(r2, dtype=float), rtol=1e-9, atol=1e-12, equal_nan=True)


def best_time(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.NUMBA is None:
        print("numba not available (or RENORMLAB_NO_NUMBA set); only numpy timings shown")
    print(f"{'kernel':<15}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}  agree")
    for name, cargs in cases().items():
        t_np = best_time(kernels.NUMPY[name], cargs, args.repeat)
        if kernels.NUMBA is None:
            print(f"{name:<15}{t_np:12.4f}{'-':>12}{'-':>10}  -")
            continue
        t_nb = best_time(kernels.NUMBA[name], cargs, args.repeat)
        ok = same(kernels.NUMPY[name](*cargs), kernels.NUMBA[name](*cargs))
        print(f"{name:<15}{t_np:12.4f}{t_nb:12.4f}{t_np / t_nb:10.1f}  {ok}")


if __name__ == "__main__":
    main()
