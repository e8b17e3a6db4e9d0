"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints per-call timings for each kernel and end-to-end timings for a noisy
scan and a training run, with the speedup of the compiled backend.
"""

import argparse
import contextlib
import timeit

import numpy as np

from znelab import _kernels, _pykernels
from znelab.ansatz import make_theta_grid
from znelab.extrapolator import TrainingDataset, init_mlp, train
from znelab.noise import depolarizing_1q, depolarizing_2q
from znelab.observables import z_string
from znelab.qcore import gate_cnot, gate_ry
from znelab.vqe import scan_noisy

try:
    from znelab import _ckernels
except ImportError:
    _ckernels = None

NAMES = ("apply_1q", "apply_2q", "conjugate_1q", "conjugate_2q", "channel_1q", "channel_2q", "adam_update")


@contextlib.contextmanager
def backend(module):
    saved = {k: getattr(_kernels, k) for k in NAMES}
    for k in NAMES:
        setattr(_kernels, k, getattr(module, k))
    try:
        yield
    finally:
        for k, v in saved.items():
            setattr(_kernels, k, v)


def kernel_cases(n=4):
    rng = np.random.default_rng(0)
    psi = rng.normal(size=2**n) + 0j
    rho = rng.normal(size=4**n) + 0j
    u1, u2 = gate_ry(0.3), gate_cnot()
    k1, k2 = depolarizing_1q(0.03).operators, depolarizing_2q(0.03).operators
    size = 512 * 1024
    a, g, m, v = (rng.normal(size=size) for _ in range(4))
    v = np.abs(v)
    return {
        f"apply_1q (n={n})": lambda mod: mod.apply_1q(psi, n, 1, u1),
        f"apply_2q (n={n})": lambda mod: mod.apply_2q(psi, n, 1, 2, u2),
        f"conjugate_1q (n={n})": lambda mod: mod.conjugate_1q(rho, n, 1, u1),
        f"conjugate_2q (n={n})": lambda mod: mod.conjugate_2q(rho, n, 1, 2, u2),
        f"channel_1q (n={n})": lambda mod: mod.channel_1q(rho, n, 1, k1),
        f"channel_2q (n={n})": lambda mod: mod.channel_2q(rho, n, 1, 2, k2),
        f"adam_update ({size} params)": lambda mod: mod.adam_update(
            a, g, m, v, 1e-3, 0.9, 0.999, 1e-8, False, 1.0, 1.0
        ),
    }


def workload_cases():
    grid = make_theta_grid(2, 6)
    ds = TrainingDataset((0.01, 0.02, 0.03, 0.04, 0.05), (-0.95, -0.9, -0.85, -0.8, -0.76))
    params = init_mlp(seed=0)
    return {
        f"scan_noisy ({len(grid)} points)": lambda: scan_noisy(grid, 2, z_string(2), 0.03),
        "train (50 epochs, 1-512-1024-1)": lambda: train(ds, params, epochs=50),
    }


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the numpy fallback is available")
        return
    rows = []
    for name, call in kernel_cases().items():
        tc = best_of(lambda: call(_ckernels), args.repeat, 20)
        tp = best_of(lambda: call(_pykernels), args.repeat, 20)
        rows.append((name, tc, tp))
    for name, call in workload_cases().items():
        with backend(_ckernels):
            tc = best_of(call, max(1, args.repeat // 2), 1)
        with backend(_pykernels):
            tp = best_of(call, max(1, args.repeat // 2), 1)
        rows.append((name, tc, tp))
    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'cython':>11}  {'numpy':>11}  speedup")
    for name, tc, tp in rows:
        print(f"{name:<{width}}  {tc * 1e3:9.3f}ms  {tp * 1e3:9.3f}ms  {tp / tc:6.1f}x")


if __name__ == "__main__":
    main()
