"""Compare the compiled and pure-Python kernel backends.

Run with ``python benchmarks/bench_kernels.py``. Each kernel is timed on
identical inputs for every available backend; results must agree before
timings are reported. An end-to-end ``advise`` sweep is timed in a child
process per backend, since selection happens at import.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from headvisor import _accel
from headvisor.coefficients import K_DEC


def _centroid_inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    bp = K_DEC._bp
    b, p, e = (np.ascontiguousarray(bp[:, i]) for i in range(3))
    acts = [rng.random(5) * (rng.random(5) < 0.8) + 1e-3 for _ in range(n)]
    return b, p, e, acts


def _tableau(rng, m=30, n=60):
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = rng.integers(-3, 6, size=(m, n))
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = rng.integers(1, 20, size=m)
    T[m, :n] = rng.integers(-6, 3, size=n)
    return T, np.arange(n, n + m, dtype=np.intp)


def bench_centroid(impl, inputs):
    b, p, e, acts = inputs
    lo, hi = K_DEC.domain
    return [impl.clipped_centroid(b, p, e, a, lo, hi) for a in acts]


def bench_simplex(impl, tableaux):
    out = []
    for T0, basis0 in tableaux:
        T, basis = T0.copy(), basis0.copy()
        out.append(impl.simplex_iterate(T, basis, T.shape[1] - 1, 1e-9, 10_000))
    return out


_SWEEP = """
import itertools, time
from importlib import resources
from headvisor import _accel
from headvisor.advisor import advise
from headvisor.circuit import load_circuit, to_profile
from headvisor.coefficients import Priorities
prof = {n: to_profile(load_circuit(resources.files("headvisor").joinpath("circuits", n + ".json").read_text()))
        for n in ("t1", "t3", "t5", "t6", "t7")}
t0 = time.perf_counter()
for name, pr in itertools.product(prof, itertools.product((0, 5, 10), repeat=3)):
    advise(Priorities(*pr), prof[name])
print(_accel.BACKEND, time.perf_counter() - t0)
"""


def bench_advise(pure: bool) -> str:
    env = dict(os.environ, HEADVISOR_PURE="1" if pure else "0")
    res = subprocess.run([sys.executable, "-c", _SWEEP], env=env, capture_output=True, text=True, check=True)
    backend, secs = res.stdout.split()
    return f"{backend:<9} {float(secs):8.3f} s"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-advise", action="store_true")
    args = ap.parse_args()

    backends = _accel.backends()
    if len(backends) < 2:
        print("compiled extension not built; only the Python backend is available")

    cinp = _centroid_inputs(2000)
    rng = np.random.default_rng(1)
    tabs = [_tableau(rng) for _ in range(20)]

    ref_c = bench_centroid(backends["python"], cinp)
    ref_s = bench_simplex(backends["python"], tabs)
    for name, impl in backends.items():
        assert np.allclose(bench_centroid(impl, cinp), ref_c, rtol=1e-12, atol=1e-12), name
        assert [s for s in bench_simplex(impl, tabs)] == ref_s, name

    print(f"{'kernel':<18}{'backend':<10}{'best of ' + str(args.repeat):>14}")
    for kernel, fn, data in (("clipped_centroid", bench_centroid, cinp), ("simplex_iterate", bench_simplex, tabs)):
        times = {}
        for name, impl in backends.items():
            times[name] = min(timeit.repeat(lambda: fn(impl, data), number=1, repeat=args.repeat))
            print(f"{kernel:<18}{name:<10}{times[name] * 1e3:11.2f} ms")
        if "compiled" in times:
            print(f"{'':<18}speedup   {times['python'] / times['compiled']:11.1f}x")

    if not args.skip_advise:
        print("advise, 5 circuits x 27 priorities:")
        for pure in (True, False):
            print("  " + bench_advise(pure))


if __name__ == "__main__":
    main()
