"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

The numba variants are warmed up once before timing so JIT compilation is
excluded.  Both variants are checked for agreement on every workload.
"""

import argparse
import timeit

import numpy as np

from qechannels import SynthesisConfig, _kernels, synthesize_detailed
from qechannels.statecore import StaticState


def workloads():
    rng = np.random.default_rng(0)

    # 4 qubits, full support: 16 tones per coefficient list
    amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    target = StaticState(4, amps / np.linalg.norm(amps))
    composite, _ = synthesize_detailed(target, SynthesisConfig(seed=0))
    c_amps, c_ks, c_offsets = composite._packed
    times = np.linspace(0, composite.period, 4096, endpoint=False)
    yield "tone_sums (8 lists x 16 tones, 4096 t)", "tone_sums", (
        c_amps, c_ks, c_offsets, times, composite.base_frequency)

    l_amps, l_ks, l_offsets = composite.level_lists("0110")
    yield "product_expand (16^4 terms)", "product_expand", (l_amps, l_ks, l_offsets)

    coefs = rng.normal(size=5 * 16) + 1j * rng.normal(size=5 * 16)
    ks = rng.integers(-500, 501, size=5 * 16)
    offsets = np.arange(0, 81, 16)
    yield "product_expand (16^5 terms)", "product_expand", (coefs, ks, offsets)

    # exhaustive collision scan at N=5 with 24 support labels
    ks = rng.integers(-2000, 2001, size=5 * 24)
    offsets = np.arange(0, 121, 24)
    yield "zero_sum_tuples (24^5 tuples)", "zero_sum_tuples", (ks, offsets)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':42s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for title, name, inputs in workloads():
        fn_np = getattr(_kernels, f"{name}_numpy")
        fn_nb = getattr(_kernels, f"{name}_numba")
        a, b = fn_np(*inputs), fn_nb(*inputs)
        for x, y in zip(a if isinstance(a, tuple) else (a,), b if isinstance(b, tuple) else (b,)):
            np.testing.assert_allclose(x, y, atol=1e-12)
        t_np = min(timeit.repeat(lambda: fn_np(*inputs), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: fn_nb(*inputs), number=1, repeat=args.repeat)) * 1e3
        print(f"{title:42s} {t_np:10.2f} {t_nb:10.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
