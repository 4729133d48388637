#!/usr/bin/env python3
"""Compare the compiled counting kernels against the NumPy fallback.

Three views: raw counts3 calls, the pairwise conditional-MI sweep that
dominates the selection loop, and a full selection run on a synthetic
spectrum. Swapping the kernel bindings inside the measure module keeps
the benchmarked code path identical for both backends.
"""

import argparse
import time

import numpy as np

import faultchain.infotheory as infotheory
from faultchain._kernels import BACKEND, available_backends
from faultchain.minilang.pdg import StaticPDG
from faultchain.selection import run_selection
from faultchain.spectrum import FAIL, PASS, SliceSpectrum


def synthetic_spectrum(rng, n_tests, n_statements):
    fault = rng.integers(0, 2, n_tests)
    matrix = rng.integers(0, 2, (n_tests, n_statements))
    matrix[:, 0] = fault  # one genuinely failure-linked column
    verdicts = [FAIL if fault[i] and rng.random() < 0.8 else PASS
                for i in range(n_tests)]
    if FAIL not in verdicts:
        verdicts[0] = FAIL
    statements = [f"S{i+1}" for i in range(n_statements)]
    tests = [f"t{i+1}" for i in range(n_tests)]
    return SliceSpectrum(statements, tests, matrix, verdicts)


def bind_backend(impl):
    infotheory.counts1 = impl.counts1
    infotheory.counts2 = impl.counts2
    infotheory.counts3 = impl.counts3
    infotheory.h_bits = impl.h_bits
    infotheory.mi_bits = impl.mi_bits
    infotheory.cmi_bits = impl.cmi_bits


def best_of(fn, repeat, inner=1):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn()
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def bench_counts3(impl, n, repeat):
    rng = np.random.default_rng(1)
    x, y, z = (np.ascontiguousarray(rng.integers(0, 2, n, dtype=np.uint8))
               for _ in range(3))
    return best_of(lambda: impl.counts3(x, y, z), repeat, inner=2000)


def bench_cmi_sweep(spectrum, repeat):
    out = spectrum.outcome_column()
    cols = [spectrum.column(s) for s in spectrum.statements]

    def sweep():
        for xi in cols:
            for zj in cols:
                infotheory.conditional_mutual_information(xi, out, zj)

    return best_of(sweep, repeat)


def bench_selection(spectrum, repeat):
    pdg = StaticPDG(spectrum.statements, [])
    return best_of(lambda: run_selection(spectrum, pdg), repeat)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tests", type=int, default=200)
    parser.add_argument("--statements", type=int, default=60)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("note: compiled backend unavailable, timing the fallback only")
    rng = np.random.default_rng(42)
    spectrum = synthetic_spectrum(rng, args.tests, args.statements)

    print(f"workload: {args.tests} tests x {args.statements} statements, "
          f"best of {args.repeat}")
    header = f"{'benchmark':<34}" + "".join(f"{name:>14}" for name in backends)
    print(header)
    print("-" * len(header))

    rows = []
    for n in (12, 50, 200, 1000):
        timings = {name: bench_counts3(impl, n, args.repeat) * 1e9
                   for name, impl in backends.items()}
        rows.append((f"counts3, n={n} (ns/call)", timings))
    for n in (12, 200):
        timings = {}
        for name, impl in backends.items():
            rng_local = np.random.default_rng(2)
            cols = [np.ascontiguousarray(rng_local.integers(0, 2, n,
                                                            dtype=np.uint8))
                    for _ in range(3)]
            timings[name] = best_of(
                lambda: impl.cmi_bits(*cols), args.repeat, inner=2000) * 1e9
        rows.append((f"fused Shannon CMI, n={n} (ns/call)", timings))
    for label, fn in (("pairwise CMI sweep (ms)", bench_cmi_sweep),
                      ("full selection run (ms)", bench_selection)):
        timings = {}
        for name, impl in backends.items():
            bind_backend(impl)
            timings[name] = fn(spectrum, args.repeat) * 1e3
        rows.append((label, timings))
    bind_backend(backends[BACKEND])  # restore the import-time selection

    for label, timings in rows:
        cells = "".join(f"{timings[name]:>14.2f}" for name in backends)
        line = f"{label:<34}{cells}"
        if len(timings) == 2:
            speedup = timings["python"] / timings["compiled"]
            line += f"   x{speedup:.1f}"
        print(line)


if __name__ == "__main__":
    main()
