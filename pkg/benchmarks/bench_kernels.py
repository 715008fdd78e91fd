#!/usr/bin/env python3
"""Benchmark the compiled gate kernel against the numpy fallback.

Applies layered random circuits (single-qubit rotations plus CNOT ladders) to
state vectors of growing width using both backends and reports the per-gate
timing ratio.  Run after ``pip install -e .``:

    python3 benchmarks/bench_kernels.py [--max-qubits 14] [--layers 8]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from shorsim._kernels import py_backend

try:
    from shorsim._kernels import cy_backend
except ImportError:
    cy_backend = None


def random_unitary(k: int, rng) -> np.ndarray:
    a = rng.normal(size=(2**k, 2**k)) + 1j * rng.normal(size=(2**k, 2**k))
    q, _ = np.linalg.qr(a)
    return q.astype(np.complex128)


def build_workload(n: int, layers: int, rng):
    """(gate matrix, targets) pairs: a 1q layer and a CNOT ladder per round."""
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                    dtype=np.complex128)
    work = []
    for _ in range(layers):
        for q in range(n):
            work.append((random_unitary(1, rng), (q,)))
        for q in range(0, n - 1, 2):
            work.append((cnot.copy(), (q, q + 1)))
    return work


def run(backend, n: int, work) -> float:
    state = np.zeros(2**n, dtype=np.complex128)
    state[0] = 1.0
    start = time.perf_counter()
    for u, targets in work:
        state = backend.apply_gate(state, n, u, targets)
    elapsed = time.perf_counter() - start
    assert abs(np.linalg.norm(state) - 1) < 1e-9
    return elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-qubits", type=int, default=14)
    parser.add_argument("--min-qubits", type=int, default=8)
    parser.add_argument("--layers", type=int, default=8)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if cy_backend is None:
        print("compiled kernel not available; showing numpy backend only")
    rng = np.random.default_rng(0)
    header = f"{'qubits':>6} {'gates':>6} {'numpy [ms]':>12}"
    if cy_backend is not None:
        header += f" {'compiled [ms]':>14} {'speedup':>8}"
    print(header)
    for n in range(args.min_qubits, args.max_qubits + 1):
        work = build_workload(n, args.layers, rng)
        py_time = min(run(py_backend, n, work) for _ in range(args.repeats))
        line = f"{n:>6} {len(work):>6} {py_time * 1e3:>12.2f}"
        if cy_backend is not None:
            cy_time = min(run(cy_backend, n, work) for _ in range(args.repeats))
            line += f" {cy_time * 1e3:>14.2f} {py_time / cy_time:>8.2f}x"
        print(line)


if __name__ == "__main__":
    main()
