"""Time averages of dynamic composites.

Two independent routes produce a :class:`StaticState` from a composite:

* :func:`symbolic_average` keeps exactly the expanded product terms whose
  total frequency index is zero;
* :func:`numeric_average` samples the composite uniformly over a window.

With integer frequency indices, a full-period window and more than twice the
largest total index in samples, the two agree to rounding error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AliasingWarning, BudgetError
from .statecore import DynamicComposite, StaticState, all_labels, evaluate_many

TERM_BUDGET = 10**7


@dataclass(frozen=True)
class ResonanceTerm:
    target_label: str
    tuple_labels: tuple
    coefficient: complex
    total_freq_index: int


@dataclass(frozen=True)
class QuadratureGrid:
    samples: int
    window: float | None = None  # seconds; None means one full period

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.window is not None and not self.window > 0:
            raise ValueError("window must be positive")

    def resolve_window(self, composite: DynamicComposite) -> float:
        return composite.period if self.window is None else float(self.window)

    def aliasing_possible(self, composite: DynamicComposite) -> bool:
        cycles = self.resolve_window(composite) / composite.period
        return self.samples <= 2 * composite.max_total_frequency() * cycles


# -- expansion ---------------------------------------------------------------


def _term_count(offsets: np.ndarray) -> int:
    return math.prod(int(s) for s in np.diff(offsets))


def expand_arrays(composite: DynamicComposite, label: str, budget: int = TERM_BUDGET):
    """Total frequency index and coefficient of every expanded term for ``label``.

    Terms are ordered with the first qubit's tone varying slowest.
    """
    amps, ks, offsets = composite.level_lists(label)
    count = _term_count(offsets)
    if count > budget:
        raise BudgetError(f"expansion of {label} has {count} terms, budget is {budget}")
    return _kernels.product_expand(amps, ks, offsets)


def expand_terms(
    composite: DynamicComposite, b: str, budget: int = TERM_BUDGET
) -> list[ResonanceTerm]:
    tot_k, tot_c = expand_arrays(composite, b, budget)
    tone_labels = [
        [t.label for t in composite.qubits[n].tones(int(bit))] for n, bit in enumerate(b)
    ]
    sizes = [len(x) for x in tone_labels]
    terms = []
    for flat, (k, c) in enumerate(zip(tot_k.tolist(), tot_c.tolist())):
        idx = np.unravel_index(flat, sizes)
        tup = tuple(tone_labels[n][i] for n, i in enumerate(idx))
        terms.append(ResonanceTerm(b, tup, complex(c), int(k)))
    return terms


# -- symbolic average --------------------------------------------------------


def _aggregate(amps, ks, offsets, lo, hi):
    """Expand lists ``lo..hi-1`` and merge coefficients sharing a frequency."""
    sub_off = offsets[lo:hi + 1] - offsets[lo]
    tot_k, tot_c = _kernels.product_expand(
        amps[offsets[lo]:offsets[hi]], ks[offsets[lo]:offsets[hi]], sub_off
    )
    freqs, inverse = np.unique(tot_k, return_inverse=True)
    merged = np.zeros(len(freqs), dtype=np.complex128)
    np.add.at(merged, inverse, tot_c)
    return freqs, merged


def _zero_frequency_sum(amps, ks, offsets) -> complex:
    # split the qubits in two halves and join the half-spectra on k_left = -k_right,
    # keeping memory at O(distinct partial sums) rather than O(all terms)
    n_lists = len(offsets) - 1
    if np.any(np.diff(offsets) == 0):
        return 0j
    half = n_lists // 2
    left_k, left_c = _aggregate(amps, ks, offsets, 0, half)
    right_k, right_c = _aggregate(amps, ks, offsets, half, n_lists)
    pos = np.searchsorted(left_k, -right_k)
    pos = np.minimum(pos, len(left_k) - 1)
    match = left_k[pos] == -right_k
    return complex(np.sum(left_c[pos[match]] * right_c[match]))


def symbolic_average(composite: DynamicComposite) -> StaticState:
    """Exact infinite-time (equivalently full-period) average."""
    amps = [
        _zero_frequency_sum(*composite.level_lists(b)) for b in all_labels(composite.n_qubits)
    ]
    return StaticState(composite.n_qubits, np.array(amps, dtype=np.complex128))


def frequency_spectrum(composite: DynamicComposite, label: str, budget: int = TERM_BUDGET):
    """Distinct total frequency indices of ``alpha_label(t)`` with merged coefficients."""
    amps, ks, offsets = composite.level_lists(label)
    if _term_count(offsets) > budget:
        raise BudgetError(f"expansion of {label} exceeds budget {budget}")
    return _aggregate(amps, ks, offsets, 0, len(offsets) - 1)


# -- numeric average ---------------------------------------------------------


def sample_times(composite: DynamicComposite, grid: QuadratureGrid) -> np.ndarray:
    window = grid.resolve_window(composite)
    return np.arange(grid.samples, dtype=np.float64) * (window / grid.samples)


def numeric_average(
    composite: DynamicComposite, grid: QuadratureGrid, chunk: int = 4096
) -> StaticState:
    """Uniform left Riemann sum of the composite over ``grid``.

    Emits :class:`AliasingWarning` when the grid is too coarse to resolve
    the largest total frequency present.
    """
    if grid.aliasing_possible(composite):
        warnings.warn("aliasing possible", AliasingWarning, stacklevel=2)
    times = sample_times(composite, grid)
    acc = np.zeros(2**composite.n_qubits, dtype=np.complex128)
    for start in range(0, len(times), chunk):
        acc += evaluate_many(composite, times[start:start + chunk]).sum(axis=0)
    return StaticState(composite.n_qubits, acc / grid.samples)


def _is_commensurate(window: float, period: float, rtol: float = 1e-12) -> bool:
    cycles = window / period
    return round(cycles) >= 1 and abs(cycles - round(cycles)) <= rtol * max(1.0, cycles)


def window_averages(composite: DynamicComposite, windows) -> np.ndarray:
    """Exact continuous averages over ``[0, w]`` for each ``w``; shape ``(len, 2**N)``."""
    windows = np.atleast_1d(np.asarray(windows, dtype=np.float64))
    if not np.all(windows > 0):
        raise ValueError("window must be positive")
    out = np.empty((len(windows), 2**composite.n_qubits), dtype=np.complex128)
    for i, b in enumerate(all_labels(composite.n_qubits)):
        freqs, coefs = frequency_spectrum(composite, b)
        nz = freqs != 0
        # (e^{ix} - 1) / (ix) with x = k * omega * w, per frequency and window
        x = np.outer(windows, freqs[nz].astype(np.float64) * composite.base_frequency)
        out[:, i] = np.sum(coefs[~nz]) + (np.expm1(1j * x) / (1j * x)) @ coefs[nz]
    return out


def window_average(composite: DynamicComposite, window: float) -> StaticState:
    """Exact continuous average over ``[0, window]`` in closed form."""
    return StaticState(composite.n_qubits, window_averages(composite, [window])[0])


def leakage_estimate(composite: DynamicComposite, window: float) -> np.ndarray:
    """Per-amplitude bound on |window average - symbolic average|.

    Sums ``2 |c| / (|k| * base_frequency * window)`` over every expanded term
    with nonzero total index ``k``.  Whole numbers of periods give zero.
    """
    if not window > 0:
        raise ValueError("window must be positive")
    n_amps = 2**composite.n_qubits
    if _is_commensurate(window, composite.period):
        return np.zeros(n_amps)
    bound = np.zeros(n_amps)
    for i, b in enumerate(all_labels(composite.n_qubits)):
        tot_k, tot_c = expand_arrays(composite, b)
        nz = tot_k != 0
        bound[i] = np.sum(
            2 * np.abs(tot_c[nz]) / (np.abs(tot_k[nz]) * composite.base_frequency * window)
        )
    return bound
