"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Tone lists are passed in "ragged" form: one flat array of values plus an
``offsets`` array of length ``L + 1`` so that list ``i`` occupies
``values[offsets[i]:offsets[i + 1]]``.

Set ``QECHANNELS_DISABLE_NUMBA=1`` to force the numpy implementations.  Both
implementations stay importable (``*_numpy`` / ``*_numba``) so that tests and
the benchmark can compare them directly.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("QECHANNELS_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED


# ---------------------------------------------------------------------------
# tone_sums: value of every tone list at every time sample
# ---------------------------------------------------------------------------


def tone_sums_numpy(amps, ks, offsets, times, omega):
    n_lists = len(offsets) - 1
    times = np.asarray(times, dtype=np.float64)
    if len(ks) == 0:
        return np.zeros((len(times), n_lists), dtype=np.complex128)
    owner = np.repeat(np.arange(n_lists), np.diff(offsets))
    onehot = np.zeros((len(ks), n_lists), dtype=np.complex128)
    onehot[np.arange(len(ks)), owner] = 1.0
    phases = np.exp(1j * omega * np.outer(times, ks.astype(np.float64)))
    return (phases * amps) @ onehot


@njit(cache=True)
def _tone_sums_jit(amps, ks, offsets, times, omega):
    n_lists = len(offsets) - 1
    out = np.zeros((len(times), n_lists), dtype=np.complex128)
    for j in range(len(times)):
        wt = omega * times[j]
        for i in range(n_lists):
            acc = 0j
            for p in range(offsets[i], offsets[i + 1]):
                ang = ks[p] * wt
                acc += amps[p] * complex(np.cos(ang), np.sin(ang))
            out[j, i] = acc
    return out


def tone_sums_numba(amps, ks, offsets, times, omega):
    return _tone_sums_jit(
        np.ascontiguousarray(amps, dtype=np.complex128),
        np.ascontiguousarray(ks, dtype=np.int64),
        np.ascontiguousarray(offsets, dtype=np.int64),
        np.ascontiguousarray(times, dtype=np.float64),
        float(omega),
    )


# ---------------------------------------------------------------------------
# product_expand: every term of prod_i (sum_p c_ip e^{i k_ip t})
# ---------------------------------------------------------------------------


def product_expand_numpy(coefs, ks, offsets):
    """Return (total_k, coefficient) of every term, first list varying slowest."""
    tot_k = np.zeros(1, dtype=np.int64)
    tot_c = np.ones(1, dtype=np.complex128)
    for i in range(len(offsets) - 1):
        lo, hi = offsets[i], offsets[i + 1]
        tot_k = np.add.outer(tot_k, ks[lo:hi]).ravel()
        tot_c = np.multiply.outer(tot_c, coefs[lo:hi]).ravel()
    return tot_k, tot_c


@njit(cache=True)
def _product_expand_jit(coefs, ks, offsets):
    n_lists = len(offsets) - 1
    total = 1
    for i in range(n_lists):
        total *= offsets[i + 1] - offsets[i]
    out_k = np.zeros(total, dtype=np.int64)
    out_c = np.zeros(total, dtype=np.complex128)
    if total == 0:
        return out_k, out_c
    if n_lists == 0:
        out_c[0] = 1.0
        return out_k, out_c
    idx = np.zeros(n_lists, dtype=np.int64)
    # running prefix sums/products; entry i covers lists 0..i-1
    pk = np.zeros(n_lists, dtype=np.int64)
    pc = np.ones(n_lists, dtype=np.complex128)
    last = n_lists - 1
    last_lo = offsets[last]
    last_len = offsets[last + 1] - last_lo
    dirty = 0
    t = 0
    while t < total:
        for i in range(dirty, last):
            p = offsets[i] + idx[i]
            pk[i + 1] = pk[i] + ks[p]
            pc[i + 1] = pc[i] * coefs[p]
        base_k = pk[last]
        base_c = pc[last]
        for j in range(last_len):
            out_k[t + j] = base_k + ks[last_lo + j]
            out_c[t + j] = base_c * coefs[last_lo + j]
        t += last_len
        # mixed-radix increment over all but the last list
        i = last - 1
        while i >= 0:
            idx[i] += 1
            if idx[i] < offsets[i + 1] - offsets[i]:
                break
            idx[i] = 0
            i -= 1
        dirty = max(i, 0)
    return out_k, out_c


def product_expand_numba(coefs, ks, offsets):
    return _product_expand_jit(
        np.ascontiguousarray(coefs, dtype=np.complex128),
        np.ascontiguousarray(ks, dtype=np.int64),
        np.ascontiguousarray(offsets, dtype=np.int64),
    )


# ---------------------------------------------------------------------------
# zero_sum_tuples: flat indices of index tuples whose frequencies sum to zero
# ---------------------------------------------------------------------------


def zero_sum_tuples_numpy(ks, offsets):
    tot = np.zeros(1, dtype=np.int64)
    for i in range(len(offsets) - 1):
        tot = np.add.outer(tot, ks[offsets[i]:offsets[i + 1]]).ravel()
    return np.flatnonzero(tot == 0).astype(np.int64)


@njit(cache=True)
def _zero_sum_sweep(ks, offsets, out):
    """Count zero-sum tuples; also record their flat indices if ``out`` is non-empty."""
    n_lists = len(offsets) - 1
    idx = np.zeros(n_lists, dtype=np.int64)
    pk = np.zeros(n_lists, dtype=np.int64)
    last = n_lists - 1
    last_lo = offsets[last]
    last_len = offsets[last + 1] - last_lo
    total = 1
    for i in range(n_lists):
        total *= offsets[i + 1] - offsets[i]
    fill = len(out) > 0
    n_hits = 0
    dirty = 0
    t = 0
    while t < total:
        for i in range(dirty, last):
            pk[i + 1] = pk[i] + ks[offsets[i] + idx[i]]
        base = pk[last]
        for j in range(last_len):
            if base + ks[last_lo + j] == 0:
                if fill:
                    out[n_hits] = t + j
                n_hits += 1
        t += last_len
        i = last - 1
        while i >= 0:
            idx[i] += 1
            if idx[i] < offsets[i + 1] - offsets[i]:
                break
            idx[i] = 0
            i -= 1
        dirty = max(i, 0)
    return n_hits


def zero_sum_tuples_numba(ks, offsets):
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    if len(offsets) == 1:
        return np.zeros(1, dtype=np.int64)
    # two passes (count, then fill) avoid growing a buffer inside the jit loop
    n_hits = _zero_sum_sweep(ks, offsets, np.empty(0, dtype=np.int64))
    out = np.empty(n_hits, dtype=np.int64)
    if n_hits:
        _zero_sum_sweep(ks, offsets, out)
    return out


if USE_NUMBA:
    tone_sums = tone_sums_numba
    product_expand = product_expand_numba
    zero_sum_tuples = zero_sum_tuples_numba
else:
    tone_sums = tone_sums_numpy
    product_expand = product_expand_numpy
    zero_sum_tuples = zero_sum_tuples_numpy


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
