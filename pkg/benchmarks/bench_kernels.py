"""Time the numba kernels against their numpy twins, plus one end-to-end simulation.

    python3 benchmarks/bench_kernels.py [--qubits 12] [--repeats 20]

The end-to-end row runs the noisy density-matrix simulation of the two-qubit
measurement circuit in a subprocess per backend, so the env flag is honored.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from predictability import _kernels as K

END_TO_END = """
import time
from predictability.circuits import NoiseModel, build_nrvnm_circuit_nq, simulate_density
from predictability.states import b2_basis, haar_random_vector
c = build_nrvnm_circuit_nq(b2_basis().vectors)
psi = haar_random_vector(4, 1)
simulate_density(c, psi, NoiseModel())
t = time.perf_counter()
for _ in range({n}):
    simulate_density(c, psi, NoiseModel())
print((time.perf_counter() - t) / {n})
"""


def best_of(fn, repeats):
    return min(timeit.repeat(fn, number=1, repeat=repeats))


def kernel_rows(nq, repeats):
    rng = np.random.default_rng(0)
    psi = rng.standard_normal(2**nq) + 1j * rng.standard_normal(2**nq)
    u, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    shots = 1 << 16
    outcomes = rng.integers(0, 2**5, size=shots).astype(np.int64)
    uniforms = rng.random((shots, 5))
    cases = {
        f"apply_1q ({nq} qubits, all targets)": (
            lambda: [K.apply_1q_numba(psi, u, q) for q in range(nq)],
            lambda: [K.apply_1q_numpy(psi, u, q) for q in range(nq)],
        ),
        f"apply_cnot ({nq} qubits, chain)": (
            lambda: [K.apply_cnot_numba(psi, q, q + 1) for q in range(nq - 1)],
            lambda: [K.apply_cnot_numpy(psi, q, q + 1) for q in range(nq - 1)],
        ),
        f"flip_bits ({shots} shots, 5 bits)": (
            lambda: K.flip_bits_numba(outcomes.copy(), uniforms, 0.02),
            lambda: K.flip_bits_numpy(outcomes.copy(), uniforms, 0.02),
        ),
    }
    for name, (jit, ref) in cases.items():
        jit()  # compile outside the timing
        yield name, best_of(jit, repeats), best_of(ref, repeats)


def end_to_end(n):
    times = []
    for flag in ("0", "1"):
        env = dict(os.environ, PREDICTABILITY_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END.format(n=n)], env=env,
                             capture_output=True, text=True, check=True)
        times.append(float(out.stdout))
    return times


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, default=12)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--circuits", type=int, default=20)
    args = parser.parse_args()

    print(f"{'case':<44}{'numba (ms)':>12}{'numpy (ms)':>12}{'speedup':>10}")
    rows = list(kernel_rows(args.qubits, args.repeats))
    rows.append(("noisy 2-qubit measurement circuit, density", *end_to_end(args.circuits)))
    for name, t_jit, t_ref in rows:
        print(f"{name:<44}{1e3 * t_jit:>12.3f}{1e3 * t_ref:>12.3f}{t_ref / t_jit:>9.1f}x")


if __name__ == "__main__":
    main()
