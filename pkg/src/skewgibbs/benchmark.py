"""Backend benchmark: compiled kernels vs the pure-Python mirror.

Times the latent scan and bulk truncated-normal draws on both backends and
verifies that a short chain produces bit-identical draws on each, then
prints a comparison table. Run as ``python -m skewgibbs.benchmark``.
"""

import argparse
import time

import numpy as np

from . import kernels
from .distributions import RngStream
from .gibbs import ChainConfig, run_chain
from .model import LT_HSGHS, LT_NOWI, SKEW_NORMAL, PriorConfig
from .simstudy import make_delta_design, simulate_data


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _bench_scan(backend, t, n, sweeps):
    kernels.select_backend(backend)
    rng = RngStream(1).generator()
    z = np.abs(np.random.default_rng(0).standard_normal((t, n)))
    mean = np.zeros((t, n))
    prec = np.eye(n) + 0.2
    scale = np.ones(t)

    def run():
        for _ in range(sweeps):
            kernels.z_gibbs_scan(rng, z, mean, prec, scale)

    return _time(run, 3) / sweeps


def _bench_trunc(backend, draws):
    kernels.select_backend(backend)
    rng = RngStream(2).generator()
    out = np.empty(draws)

    def run():
        kernels.trunc_normal_fill(rng, 0.0, 1.0, 1.5, np.inf, out)

    return _time(run, 3) / draws


def _chain_draws(backend, variant, data, prior, config):
    kernels.select_backend(backend)
    summary = run_chain(data, prior, config, RngStream(3, 1))
    return summary.draws


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t", type=int, default=600)
    parser.add_argument("--n", type=int, default=6)
    parser.add_argument("--sweeps", type=int, default=20)
    parser.add_argument("--draws", type=int, default=200000)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    print(f"available backends: {backends}")
    if "c" not in backends:
        print("compiled backend not built; nothing to compare")
        return 0

    scan = {b: _bench_scan(b, args.t, args.n, args.sweeps if b == "c" else 2)
            for b in ("c", "python")}
    trunc = {b: _bench_trunc(b, args.draws if b == "c" else args.draws // 50)
             for b in ("c", "python")}

    print(f"\nlatent scan, T={args.t} N={args.n} (per sweep):")
    print(f"  c:      {scan['c'] * 1e3:9.3f} ms")
    print(f"  python: {scan['python'] * 1e3:9.3f} ms   "
          f"(speedup {scan['python'] / scan['c']:.0f}x)")
    print("truncated normal draws (per draw):")
    print(f"  c:      {trunc['c'] * 1e9:9.1f} ns")
    print(f"  python: {trunc['python'] * 1e9:9.1f} ns   "
          f"(speedup {trunc['python'] / trunc['c']:.0f}x)")

    # Equality: short chains on both backends must match bit-for-bit.
    data = simulate_data(np.zeros(3), make_delta_design("diag", 3), np.eye(3),
                         40, RngStream(9))
    config = ChainConfig(burn_in=5, draws=20)
    all_equal = True
    for variant in (LT_NOWI, LT_HSGHS):
        prior = PriorConfig.default(variant, SKEW_NORMAL, 3)
        ref = _chain_draws("c", variant, data, prior, config)
        alt = _chain_draws("python", variant, data, prior, config)
        same = all(np.array_equal(ref[k], alt[k]) for k in ref)
        all_equal &= same
        print(f"chain equality [{variant}]: {'bit-identical' if same else 'MISMATCH'}")
    kernels.select_backend("c")
    return 0 if all_equal else 1


if __name__ == "__main__":
    raise SystemExit(main())
