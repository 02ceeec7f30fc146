"""Synthesis of per-qubit multi-tone coefficients for an arbitrary target state.

Every label ``u`` in the target's support gets one tone in every coefficient
``alpha^(n)_level(t)``: amplitude ``alpha_u ** (1/N)`` (principal root) and an
integer frequency index.  Qubits ``1..N-1`` draw their indices at random; the
last qubit is retuned so that the indices along the diagonal ``(u, u, ..., u)``
cancel.  An exhaustive (or meet-in-the-middle) scan then rejects assignments
in which any other index tuple also cancels.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import InvalidStateError, SynthesisError
from .statecore import (
    DynamicComposite,
    DynamicQubit,
    StaticState,
    Tone,
    all_labels,
    check_label,
)

EXHAUSTIVE_MAX_QUBITS = 5


@dataclass(frozen=True)
class SynthesisConfig:
    seed: int = 0
    freq_range: int | None = None  # None -> see resolved_range
    max_retries: int = 64
    drop_zero_amplitudes: bool = True

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.freq_range is not None and self.freq_range < 1:
            raise ValueError("freq_range must be positive")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")

    def resolved_range(self, n_qubits: int, support_size: int | None = None) -> int:
        """Half-width K of the draw range, explicit or derived from the scan size.

        A scan checks ``2**N * s**N`` index tuples and each random sum hits zero
        with probability about ``1/(2.5 K)``, so the default grows with the tuple
        count to keep accidental resonances rare.
        """
        if self.freq_range is not None:
            return int(self.freq_range)
        s = 2**n_qubits if support_size is None else support_size
        return max(10 * n_qubits * 2**n_qubits, 4 * 2**n_qubits * s**n_qubits)


@dataclass(frozen=True)
class FrequencyAssignment:
    """Frequency index for each ``(qubit, level, label)``; missing keys mean no tone."""

    n_qubits: int
    entries: dict[tuple[int, int, str], int] = field(hash=False)

    def frequencies(self, qubit: int, level: int) -> list[tuple[str, int]]:
        """``(label, k)`` pairs of one coefficient, in canonical label order."""
        return sorted(
            (u, k) for (n, lv, u), k in self.entries.items() if n == qubit and lv == level
        )

    def labels(self) -> list[str]:
        return sorted({u for (_, _, u) in self.entries})

    def retuning_residuals(self) -> dict[str, int]:
        """``sum_n entries(n, u_n, u)`` for every label; all zero after retuning."""
        out = {}
        for u in self.labels():
            out[u] = sum(
                self.entries[(n + 1, int(bit), u)]
                for n, bit in enumerate(u)
                if (n + 1, int(bit), u) in self.entries
            )
        return out

    def to_json(self) -> dict:
        rows = [
            {"qubit": n, "level": lv, "label": u, "k": k}
            for (n, lv, u), k in sorted(self.entries.items())
        ]
        return {"n": self.n_qubits, "entries": rows}

    @classmethod
    def from_json(cls, data: dict) -> FrequencyAssignment:
        n = int(data["n"])
        entries = {
            (int(e["qubit"]), int(e["level"]), check_label(e["label"], n)): int(e["k"])
            for e in data["entries"]
        }
        return cls(n, entries)

    @classmethod
    def from_composite(cls, composite: DynamicComposite) -> FrequencyAssignment:
        entries = {}
        for q in composite.qubits:
            for level in (0, 1):
                for tone in q.tones(level):
                    if tone.label is None:
                        raise InvalidStateError("tone without a label has no assignment entry")
                    entries[(q.qubit_index, level, tone.label)] = tone.freq_index
        return cls(composite.n_qubits, entries)


@dataclass(frozen=True)
class Violation:
    target_label: str
    tuple_labels: tuple[str, ...]
    total: int


# -- amplitudes --------------------------------------------------------------


def principal_root(value: complex, n: int) -> complex:
    """Principal ``n``-th root: magnitude ``|z|**(1/n)``, phase ``arg(z)/n``."""
    z = complex(value)
    if z == 0:
        return 0j
    # keep arg in (-pi, pi]: a negative real with -0.0 imaginary part is +pi
    phase = math.pi if (z.imag == 0 and z.real < 0) else cmath.phase(z)
    return cmath.rect(abs(z) ** (1.0 / n), phase / n)


def set_amplitudes(target: StaticState) -> dict[tuple[int, int, str], complex]:
    n_qubits = target.n_qubits
    out = {}
    for label, alpha in zip(all_labels(n_qubits), target.amplitudes):
        beta = principal_root(alpha, n_qubits)
        for n in range(1, n_qubits + 1):
            out[(n, 0, label)] = beta
            out[(n, 1, label)] = beta
    return out


# -- frequency assignment ----------------------------------------------------


def _draw_nonzero(rng: np.random.Generator, k_max: int, count: int) -> list[int]:
    if count > 2 * k_max:
        raise SynthesisError("no collision-free assignment found; increase freq_range")
    picks = rng.choice(2 * k_max, size=count, replace=False)
    # 0..K-1 -> -K..-1 and K..2K-1 -> 1..K
    return [int(p) - k_max if p < k_max else int(p) - k_max + 1 for p in picks]


def _draw_assignment(n_qubits, support, k_max, rng) -> dict[tuple[int, int, str], int] | None:
    entries: dict[tuple[int, int, str], int] = {}
    for n in range(1, n_qubits):
        for level in (0, 1):
            for u, k in zip(support, _draw_nonzero(rng, k_max, len(support))):
                entries[(n, level, u)] = k
    for level in (0, 1):
        free = [u for u in support if int(u[-1]) != level]
        for u, k in zip(free, _draw_nonzero(rng, k_max, len(free))):
            entries[(n_qubits, level, u)] = k
    for u in support:
        partial = sum(entries[(n + 1, int(u[n]), u)] for n in range(n_qubits - 1))
        entries[(n_qubits, int(u[-1]), u)] = -partial
    # distinct indices within every coefficient
    for level in (0, 1):
        ks = [entries[(n_qubits, level, u)] for u in support]
        if len(set(ks)) != len(ks):
            return None
    return entries


def assign_frequencies(
    n_qubits: int, config: SynthesisConfig, support: Iterable[str]
) -> FrequencyAssignment:
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    support = sorted({check_label(u, n_qubits) for u in support})
    if not support:
        raise ValueError("support must be non-empty")
    k_max = config.resolved_range(n_qubits, len(support))
    rng = np.random.default_rng(int(config.seed))
    for _ in range(config.max_retries):
        entries = _draw_assignment(n_qubits, support, k_max, rng)
        if entries is None:
            continue
        candidate = FrequencyAssignment(n_qubits, entries)
        if not collision_scan(candidate, support, mode="auto"):
            return candidate
    raise SynthesisError("no collision-free assignment found; increase freq_range")


# -- collision scan ----------------------------------------------------------


def _ragged(assignment: FrequencyAssignment, b: str, support: list[str]):
    labels, ks, offsets = [], [], [0]
    for n, bit in enumerate(b, start=1):
        row = [(u, assignment.entries[(n, int(bit), u)])
               for u in support if (n, int(bit), u) in assignment.entries]
        labels.append([u for u, _ in row])
        ks.extend(k for _, k in row)
        offsets.append(len(ks))
    return labels, np.array(ks, dtype=np.int64), np.array(offsets, dtype=np.int64)


def _zero_tuples_mitm(ks: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Same result as the exhaustive kernel via a hash join of two half sums."""
    n_lists = len(offsets) - 1
    sizes = np.diff(offsets)
    if np.any(sizes == 0):
        return np.zeros(0, dtype=np.int64)
    half = n_lists // 2

    def partial(lo, hi):
        tot = np.zeros(1, dtype=np.int64)
        for i in range(lo, hi):
            tot = np.add.outer(tot, ks[offsets[i]:offsets[i + 1]]).ravel()
        return tot

    left, right = partial(0, half), partial(half, n_lists)
    by_sum: dict[int, list[int]] = {}
    for j, s in enumerate(right.tolist()):
        by_sum.setdefault(s, []).append(j)
    hits = [i * len(right) + j for i, s in enumerate(left.tolist()) for j in by_sum.get(-s, ())]
    return np.array(sorted(hits), dtype=np.int64)


def collision_scan(
    assignment: FrequencyAssignment, support: Iterable[str], mode: str = "exhaustive"
) -> list[Violation]:
    """Report every non-diagonal label tuple whose frequency indices sum to zero.

    All ``2**N`` target labels are scanned, since an accidental resonance at a
    label outside the support would leak amplitude into it.  ``mode`` is
    ``"exhaustive"``, ``"mitm"`` (meet in the middle) or ``"auto"``.
    """
    n_qubits = assignment.n_qubits
    support = sorted(set(support))
    if mode == "auto":
        mode = "exhaustive" if n_qubits <= 4 else "mitm"
    if mode == "exhaustive":
        if n_qubits > EXHAUSTIVE_MAX_QUBITS:
            raise ValueError(
                f"exhaustive collision scan limited to N <= {EXHAUSTIVE_MAX_QUBITS}; "
                "use mode='mitm' (meet in the middle)"
            )
        finder = _kernels.zero_sum_tuples
    elif mode == "mitm":
        finder = _zero_tuples_mitm
    else:
        raise ValueError(f"unknown collision scan mode {mode!r}")

    violations = []
    for b in all_labels(n_qubits):
        labels, ks, offsets = _ragged(assignment, b, support)
        sizes = [len(x) for x in labels]
        for flat in finder(ks, offsets):
            idx = np.unravel_index(int(flat), sizes)
            tup = tuple(labels[n][i] for n, i in enumerate(idx))
            if all(u == b for u in tup):
                continue
            violations.append(Violation(b, tup, 0))
    return violations


# -- synthesis ---------------------------------------------------------------


def build_composite(
    amplitudes: dict[tuple[int, int, str], complex],
    assignment: FrequencyAssignment,
    base_frequency: float = 1.0,
) -> DynamicComposite:
    qubits = []
    for n in range(1, assignment.n_qubits + 1):
        levels = []
        for level in (0, 1):
            levels.append(tuple(
                Tone(amplitudes[(n, level, u)], k, u)
                for u, k in assignment.frequencies(n, level)
            ))
        qubits.append(DynamicQubit(n, *levels))
    return DynamicComposite(tuple(qubits), base_frequency)


def synthesize_detailed(
    target: StaticState, config: SynthesisConfig | None = None, base_frequency: float = 1.0
) -> tuple[DynamicComposite, FrequencyAssignment]:
    """Like :func:`synthesize`, also returning the full frequency assignment.

    The assignment keeps entries for zero-amplitude labels even though their
    tones are dropped from the composite.
    """
    config = config or SynthesisConfig()
    if config.drop_zero_amplitudes:
        support = target.support()
    else:
        support = all_labels(target.n_qubits)
    assignment = assign_frequencies(target.n_qubits, config, support)
    return build_composite(set_amplitudes(target), assignment, base_frequency), assignment


def synthesize(
    target: StaticState, config: SynthesisConfig | None = None, base_frequency: float = 1.0
) -> DynamicComposite:
    """Dynamic composite whose exact time average equals ``target``."""
    return synthesize_detailed(target, config, base_frequency)[0]


# -- presets -----------------------------------------------------------------


def preset_bell(k0: int = 1, k1: int = 3, base_frequency: float = 1.0):
    """Bell state and its four-tone unraveling; qubit 2 carries the conjugates."""
    target = StaticState.from_labels({"00": 1 / math.sqrt(2), "11": 1 / math.sqrt(2)})
    beta = 2 ** -0.25
    q1 = DynamicQubit(1, (Tone(beta, +k0, "00"),), (Tone(beta, +k1, "11"),))
    q2 = DynamicQubit(2, (Tone(beta, -k0, "00"),), (Tone(beta, -k1, "11"),))
    return target, DynamicComposite((q1, q2), base_frequency)


def preset_w(k0: int = 1, base_frequency: float = 1.0, literal_table: bool = False):
    """W state and its six-tone unraveling with ``k1 = 2 * k0``.

    Each surviving product carries three tones, so the per-tone amplitude is
    ``3**(-1/6)`` to reach ``1/sqrt(3)``.  ``literal_table=True`` uses
    ``3**(-1/3)`` instead, which averages to ``(|100> + |010> + |001>) / 3``.
    """
    target = StaticState.from_labels(
        {"100": 1 / math.sqrt(3), "010": 1 / math.sqrt(3), "001": 1 / math.sqrt(3)}
    )
    beta = 3 ** (-1 / 3) if literal_table else 3 ** (-1 / 6)
    k1 = 2 * k0
    q1 = DynamicQubit(1, (Tone(beta, -k0),), (Tone(beta, -k1),))
    q2 = DynamicQubit(2, (Tone(beta, +k0),), (Tone(beta, 0),))
    q3 = DynamicQubit(3, (Tone(beta, +k0),), (Tone(beta, 0),))
    return target, DynamicComposite((q1, q2, q3), base_frequency)
