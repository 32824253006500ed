"""Timing comparison of the jitted kernels against the pure-numpy fallbacks.

Run as a script:  python benchmarks/bench_kernels.py
The numba path includes a warm-up call so compilation time is excluded.
"""

import timeit

import numpy as np

from qptsweep._kernels import (
    filon_integral,
    filon_integral_numpy,
    rk4_mode,
    rk4_mode_numpy,
    using_numba,
)


def bench(label, fn, *args, repeat=5, number=3):
    fn(*args)  # warm-up (jit compilation / cache priming)
    best = min(timeit.repeat(lambda: fn(*args), repeat=repeat, number=number)) / number
    print(f"{label:<28s} {best * 1e3:9.3f} ms")
    return best


def main():
    print(f"numba active: {using_numba()}")
    rng = np.random.default_rng(7)

    n = 200_001
    t = np.linspace(0.0, 400.0, n)
    env = np.sin(0.01 * t) + 1.5
    phase = 3.7 * t + 10.0 * np.sin(0.005 * t)
    dt = t[1] - t[0]
    a = bench("filon (active path)", filon_integral, env, phase, dt)
    b = bench("filon (numpy fallback)", filon_integral_numpy, env, phase, dt)
    print(f"filon speedup: {b / a:.1f}x")

    steps = 100_000
    g2 = np.linspace(0.0, 1.0, 2 * steps + 1) + 0.0 * rng.random(2 * steps + 1)
    ka = np.pi / 64
    dt = 400.0 / steps
    a = bench("rk4 mode (active path)", rk4_mode, g2, ka, dt)
    b = bench("rk4 mode (numpy fallback)", rk4_mode_numpy, g2, ka, dt)
    print(f"rk4 speedup: {b / a:.1f}x")


if __name__ == "__main__":
    main()
