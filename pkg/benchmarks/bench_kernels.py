"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each case runs once untimed (so numba compiles) and then reports the best of
``--repeat`` timings per backend.
"""

import argparse
import time

import numpy as np

from permlcu.birkhoff import birkhoff_decompose, random_doubly_stochastic
from permlcu.circuit import flatten
from permlcu.kernels import available_backends, sinkhorn_sweeps
from permlcu.permutation import Permutation
from permlcu.simulator import unitary_of
from permlcu.synth import lcu_block_encoding, permutation_to_circuit


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    p = Permutation(tuple(rng.permutation(1 << 9)))
    perm_circuit = permutation_to_circuit(p)
    yield "unitary_of, 9-qubit permutation", lambda b: unitary_of(perm_circuit, backend=b)

    S = random_doubly_stochastic(16, 6, rng)
    lcu = flatten(lcu_block_encoding(birkhoff_decompose(S), 4).circuit)
    yield f"unitary_of, {lcu.n_qubits}-qubit LCU circuit", lambda b: unitary_of(lcu, backend=b)

    A = rng.uniform(0.01, 1.0, (256, 256)) ** 4

    def sink(b):
        M = A.copy()
        sinkhorn_sweeps(M, np.ones(256), np.ones(256), 1e-12, 10_000, backend=b)

    yield "sinkhorn, 256x256", sink

    D = random_doubly_stochastic(24, 60, rng)
    yield "birkhoff_decompose, 24x24", lambda b: birkhoff_decompose(D, backend=b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    backends = available_backends()
    rng = np.random.default_rng(args.seed)
    print(f"{'case':40s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases(rng):
        t = {b: best_of(lambda: fn(b), args.repeat) for b in backends}
        row = f"{name:40s}" + "".join(f"{t[b] * 1e3:10.2f}ms" for b in backends)
        if "numba" in t:
            row += f"{t['numpy'] / t['numba']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
