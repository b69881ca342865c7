"""Compare the numba and numpy state-vector kernel backends.

Times one kicked-ring period (all Ising phases + all kicks) and its pieces
at several register sizes.  Run as

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from qdeco import _kernels
from qdeco import kicked_ising as ki
from qdeco import qstate


def one_period(backend, model, psi):
    kick, ising_z, ising_x = _kernels.BACKENDS[backend]
    op = ising_z if model.axis == "z" else ising_x
    for j, k, strength in model.pairs:
        if model.axis == "z":
            op(psi, j, k, np.exp(-1j * strength), np.exp(1j * strength))
        else:
            op(psi, j, k, complex(np.cos(strength)), -1j * np.sin(strength))
    for j in range(model.num_spins):
        u = ki.kick_matrix(model.fields[j])
        kick(psi, j, u[0, 0], u[0, 1], u[1, 0], u[1, 1])


def bench(repeats):
    print(f"{'spins':>6} {'backend':>8} {'ms/period':>10} {'speedup':>8}")
    for spins in (12, 14, 16):
        model, _ = ki.build_env_config(
            "d", spins - 2, 0.001, ki.FIELD_PRESETS["chaotic"],
            ki.FIELD_PRESETS["chaotic"])
        base = qstate.random_state(1 << spins, qstate.rng(1))
        times = {}
        for backend in sorted(_kernels.BACKENDS):
            psi = base.copy()
            one_period(backend, model, psi)  # warm-up / jit compile
            t0 = time.perf_counter()
            for _ in range(repeats):
                one_period(backend, model, psi)
            times[backend] = (time.perf_counter() - t0) / repeats * 1e3
        ref = times.get("numpy")
        for backend, ms in sorted(times.items()):
            speed = f"{ref / ms:7.2f}x" if ref else "   n/a"
            print(f"{spins:>6} {backend:>8} {ms:>10.3f} {speed:>8}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=50)
    bench(parser.parse_args().repeats)
