"""Static and dynamic state value types.

Amplitude vectors use the canonical ordering in which the first qubit is the
most significant bit, so ``"01"`` is index 1 and ``"10"`` is index 2.  Labels
(bit strings) are plain ``str`` objects such as ``"0110"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import InvalidStateError


# -- bit strings -------------------------------------------------------------


def check_label(label: str, n_qubits: int | None = None) -> str:
    if not isinstance(label, str) or not label or set(label) - {"0", "1"}:
        raise InvalidStateError(f"invalid bit string {label!r}")
    if n_qubits is not None and len(label) != n_qubits:
        raise InvalidStateError(
            f"bit string {label!r} has length {len(label)}, expected {n_qubits}"
        )
    return label


def label_to_index(label: str) -> int:
    return int(check_label(label), 2)


def index_to_label(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")


def all_labels(n_qubits: int) -> list[str]:
    return [index_to_label(i, n_qubits) for i in range(2**n_qubits)]


# -- static states -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StaticState:
    """Constant-amplitude ``n_qubits`` state with ``2**n_qubits`` amplitudes."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidStateError("n_qubits must be positive")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 2**self.n_qubits:
            raise InvalidStateError(
                f"expected {2**self.n_qubits} amplitudes, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> StaticState:
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(round(math.log2(len(amps)))) if len(amps) else 0
        if n < 1 or 2**n != len(amps):
            raise InvalidStateError("amplitude count must be a power of two >= 2")
        return cls(n, amps)

    @classmethod
    def basis(cls, label: str) -> StaticState:
        check_label(label)
        amps = np.zeros(2 ** len(label), dtype=np.complex128)
        amps[label_to_index(label)] = 1.0
        return cls(len(label), amps)

    @classmethod
    def from_labels(cls, weights: dict[str, complex]) -> StaticState:
        """Build a state from ``{label: amplitude}``; missing labels are zero."""
        n = len(next(iter(weights)))
        amps = np.zeros(2**n, dtype=np.complex128)
        for label, value in weights.items():
            amps[label_to_index(check_label(label, n))] = value
        return cls(n, amps)

    def __getitem__(self, label: str) -> complex:
        return complex(self.amplitudes[label_to_index(check_label(label, self.n_qubits))])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol

    def normalized(self) -> StaticState:
        nrm = self.norm()
        if nrm == 0.0:
            raise InvalidStateError("cannot normalize the zero vector")
        return StaticState(self.n_qubits, self.amplitudes / nrm)

    def support(self) -> list[str]:
        """Labels with a nonzero amplitude, in canonical order."""
        return [index_to_label(i, self.n_qubits) for i in np.flatnonzero(self.amplitudes)]

    def to_json(self) -> dict:
        return {
            "n": self.n_qubits,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_json(cls, data: dict) -> StaticState:
        try:
            n = int(data["n"])
            amps = [complex(float(re), float(im)) for re, im in data["amplitudes"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidStateError(f"malformed state JSON: {exc}") from exc
        return cls(n, np.array(amps, dtype=np.complex128))


def tensor_product_static(parts: Sequence[StaticState]) -> StaticState:
    if len(parts) == 0:
        raise InvalidStateError("no subsystems")
    amps = np.ones(1, dtype=np.complex128)
    for part in parts:
        if part.n_qubits != 1:
            raise InvalidStateError("tensor_product_static expects single-qubit parts")
        amps = np.multiply.outer(amps, part.amplitudes).ravel()
    return StaticState(len(parts), amps)


def _same_dims(a: StaticState, b: StaticState) -> None:
    if a.n_qubits != b.n_qubits:
        raise InvalidStateError(
            f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )


def inner_product(a: StaticState, b: StaticState) -> complex:
    _same_dims(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StaticState, b: StaticState) -> float:
    """Squared overlap ``|<a|b>|**2`` of two normalized states, clipped to [0, 1]."""
    return min(1.0, abs(inner_product(a, b)) ** 2)


# -- dynamic states ----------------------------------------------------------


@dataclass(frozen=True)
class Tone:
    """One term ``amplitude * exp(1j * freq_index * base_frequency * t)``."""

    amplitude: complex
    freq_index: int
    label: str | None = None

    def __post_init__(self):
        amp = complex(self.amplitude)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise InvalidStateError("tone amplitude must be finite")
        if int(self.freq_index) != self.freq_index:
            raise InvalidStateError("freq_index must be an integer")
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "freq_index", int(self.freq_index))
        if self.label is not None:
            check_label(self.label)


def _clean_tones(tones: Iterable[Tone]) -> tuple[Tone, ...]:
    kept = tuple(t for t in tones if t.amplitude != 0)
    ks = [t.freq_index for t in kept]
    if len(set(ks)) != len(ks):
        raise InvalidStateError(f"duplicate frequency indices in tone list: {sorted(ks)}")
    return kept


@dataclass(frozen=True)
class DynamicQubit:
    """Time-dependent coefficients of one qubit; zero-amplitude tones are dropped."""

    qubit_index: int
    tones0: tuple[Tone, ...] = ()
    tones1: tuple[Tone, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tones0", _clean_tones(self.tones0))
        object.__setattr__(self, "tones1", _clean_tones(self.tones1))

    def tones(self, level: int) -> tuple[Tone, ...]:
        if level == 0:
            return self.tones0
        if level == 1:
            return self.tones1
        raise ValueError(f"level must be 0 or 1, got {level!r}")

    def coefficient(self, level: int, t: float, base_frequency: float = 1.0) -> complex:
        return sum(
            (tone.amplitude * np.exp(1j * tone.freq_index * base_frequency * t)
             for tone in self.tones(level)),
            0j,
        )


@dataclass(frozen=True)
class DynamicComposite:
    qubits: tuple[DynamicQubit, ...]
    base_frequency: float = 1.0
    _packed: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        qubits = tuple(self.qubits)
        if not qubits:
            raise InvalidStateError("composite needs at least one qubit")
        if sorted(q.qubit_index for q in qubits) != list(range(1, len(qubits) + 1)):
            raise InvalidStateError("qubit indices must be exactly 1..N")
        qubits = tuple(sorted(qubits, key=lambda q: q.qubit_index))
        if not (self.base_frequency > 0 and math.isfinite(self.base_frequency)):
            raise InvalidStateError("base_frequency must be positive and finite")
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "base_frequency", float(self.base_frequency))
        object.__setattr__(self, "_packed", self._pack())

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def period(self) -> float:
        return 2 * math.pi / self.base_frequency

    def _pack(self):
        # ragged layout: list 2*(n-1) + level holds qubit n's tones at that level
        amps, ks, offsets = [], [], [0]
        for q in self.qubits:
            for level in (0, 1):
                for tone in q.tones(level):
                    amps.append(tone.amplitude)
                    ks.append(tone.freq_index)
                offsets.append(len(ks))
        return (
            np.array(amps, dtype=np.complex128),
            np.array(ks, dtype=np.int64),
            np.array(offsets, dtype=np.int64),
        )

    def level_lists(self, label: str):
        """Ragged (amps, ks, offsets) for the coefficient lists selected by ``label``."""
        check_label(label, self.n_qubits)
        amps, ks, offsets = self._packed
        parts_a, parts_k, offs = [], [], [0]
        for n, bit in enumerate(label):
            i = 2 * n + int(bit)
            parts_a.append(amps[offsets[i]:offsets[i + 1]])
            parts_k.append(ks[offsets[i]:offsets[i + 1]])
            offs.append(offs[-1] + offsets[i + 1] - offsets[i])
        return (
            np.concatenate(parts_a) if parts_a else np.zeros(0, np.complex128),
            np.concatenate(parts_k) if parts_k else np.zeros(0, np.int64),
            np.array(offs, dtype=np.int64),
        )

    def tone_count(self) -> int:
        return int(self._packed[2][-1])

    def max_total_frequency(self) -> int:
        """Largest ``|sum of frequency indices|`` over every expanded product term."""
        best = 0
        for level_bits in all_labels(self.n_qubits):
            hi = lo = 0
            for n, bit in enumerate(level_bits):
                ks = [t.freq_index for t in self.qubits[n].tones(int(bit))]
                if not ks:
                    break
                hi += max(ks)
                lo += min(ks)
            else:
                best = max(best, abs(hi), abs(lo))
        return best

    def to_json(self) -> dict:
        tables = []
        for q in self.qubits:
            for level in (0, 1):
                tables.append({
                    "qubit": q.qubit_index,
                    "level": level,
                    "tones": [
                        {
                            "beta": [tone.amplitude.real, tone.amplitude.imag],
                            "k": tone.freq_index,
                            "label": tone.label,
                        }
                        for tone in q.tones(level)
                    ],
                })
        return {"n": self.n_qubits, "base_frequency": self.base_frequency, "tables": tables}

    @classmethod
    def from_json(cls, data: dict) -> DynamicComposite:
        try:
            n = int(data["n"])
            levels: dict[int, dict[int, list[Tone]]] = {i: {0: [], 1: []} for i in range(1, n + 1)}
            for table in data["tables"]:
                qubit, level = int(table["qubit"]), int(table["level"])
                if qubit not in levels or level not in (0, 1):
                    raise InvalidStateError(f"bad table entry qubit={qubit} level={level}")
                for t in table["tones"]:
                    re, im = t["beta"]
                    levels[qubit][level].append(
                        Tone(complex(float(re), float(im)), int(t["k"]), t.get("label"))
                    )
            base = float(data.get("base_frequency", 1.0))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidStateError):
                raise
            raise InvalidStateError(f"malformed tone-table JSON: {exc}") from exc
        qubits = tuple(DynamicQubit(i, tuple(lv[0]), tuple(lv[1])) for i, lv in levels.items())
        return cls(qubits, base)


def coefficient_values(composite: DynamicComposite, times) -> np.ndarray:
    """Per-qubit coefficient values, shape ``(len(times), N, 2)``."""
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    amps, ks, offsets = composite._packed
    vals = _kernels.tone_sums(amps, ks, offsets, times, composite.base_frequency)
    return vals.reshape(len(times), composite.n_qubits, 2)


def evaluate_many(composite: DynamicComposite, times) -> np.ndarray:
    """Composite amplitudes at each time, shape ``(len(times), 2**N)``."""
    coeffs = coefficient_values(composite, times)
    out = coeffs[:, 0, :]
    for n in range(1, composite.n_qubits):
        out = (out[:, :, None] * coeffs[:, n, None, :]).reshape(len(out), -1)
    return out


def evaluate(composite: DynamicComposite, t: float) -> np.ndarray:
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    return evaluate_many(composite, [t])[0]


def instantaneous_norm_sq(composite: DynamicComposite, t: float) -> float:
    """Squared norm of the composite at ``t``; not conserved in general."""
    return float(np.sum(np.abs(evaluate(composite, t)) ** 2))
