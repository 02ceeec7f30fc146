"""Separability diagnostics and figure-style exports."""

from __future__ import annotations

import cmath
import csv
import io
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidStateError
from .statecore import DynamicComposite, DynamicQubit, StaticState, all_labels, evaluate_many

SEPARABILITY_TOL = 1e-10


@dataclass(frozen=True)
class Cut:
    left: frozenset
    right: frozenset

    @classmethod
    def of(cls, left: Iterable[int], n_qubits: int) -> Cut:
        left = frozenset(int(q) for q in left)
        everything = frozenset(range(1, n_qubits + 1))
        if not left or not left < everything:
            raise ValueError(f"invalid cut {sorted(left)} for {n_qubits} qubits")
        return cls(left, everything - left)

    @classmethod
    def parse(cls, text: str, n_qubits: int) -> Cut:
        """Parse ``"1|2,3"`` (or just the left side, ``"1"``)."""
        left_text = text.split("|")[0]
        cut = cls.of((int(x) for x in left_text.split(",") if x.strip()), n_qubits)
        if "|" in text:
            right = frozenset(int(x) for x in text.split("|")[1].split(",") if x.strip())
            if right != cut.right:
                raise ValueError(f"cut {text!r} does not partition 1..{n_qubits}")
        return cut

    def validate(self, n_qubits: int) -> None:
        everything = frozenset(range(1, n_qubits + 1))
        if not self.left or not self.right or self.left & self.right \
                or self.left | self.right != everything:
            raise ValueError(f"cut {self} is not a bipartition of 1..{n_qubits}")

    def __str__(self):
        return ",".join(map(str, sorted(self.left))) + "|" + ",".join(map(str, sorted(self.right)))


@dataclass(frozen=True)
class SpectrumLine:
    freq_index: int
    magnitude: float
    phase: float


def bipartite_determinant(state: StaticState) -> complex:
    if state.n_qubits != 2:
        raise InvalidStateError("bipartite determinant needs exactly 2 qubits")
    a00, a01, a10, a11 = state.amplitudes
    return complex(a00 * a11 - a01 * a10)


def is_nonseparable(state: StaticState) -> bool:
    return abs(bipartite_determinant(state)) > SEPARABILITY_TOL


def amplitude_matrix(state: StaticState, cut: Cut) -> np.ndarray:
    """Amplitudes reshaped to ``(2**|left|, 2**|right|)``."""
    cut.validate(state.n_qubits)
    order = [q - 1 for q in sorted(cut.left)] + [q - 1 for q in sorted(cut.right)]
    tensor = state.amplitudes.reshape((2,) * state.n_qubits).transpose(order)
    return tensor.reshape(2 ** len(cut.left), 2 ** len(cut.right))


def jacobi_singular_values(matrix, tol: float = 1e-15, max_sweeps: int = 60) -> np.ndarray:
    """Singular values of a complex matrix by one-sided (Hestenes) Jacobi.

    Columns are rotated pairwise until mutually orthogonal; the singular
    values are then the column norms.  Returned in descending order.
    """
    a = np.array(matrix, dtype=np.complex128)
    if a.shape[1] > a.shape[0]:
        a = a.conj().T
    n = a.shape[1]
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = np.vdot(a[:, i], a[:, i]).real
                beta = np.vdot(a[:, j], a[:, j]).real
                gamma = np.vdot(a[:, i], a[:, j])
                g = abs(gamma)
                if g == 0.0 or g <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                # phase-align column j so the pair's overlap is real and positive
                aj = a[:, j] * (gamma.conjugate() / g)
                zeta = (beta - alpha) / (2.0 * g)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                ai = a[:, i].copy()
                a[:, i] = c * ai - s * aj
                a[:, j] = s * ai + c * aj
        if not rotated:
            break
    return np.sort(np.linalg.norm(a, axis=0))[::-1]


def schmidt_values(state: StaticState, cut: Cut) -> np.ndarray:
    return jacobi_singular_values(amplitude_matrix(state, cut))


def schmidt_rank(state: StaticState, cut: Cut, tol: float = SEPARABILITY_TOL) -> int:
    return int(np.sum(schmidt_values(state, cut) > tol))


def reduced_purity(state: StaticState, cut: Cut) -> float:
    if not state.is_normalized(1e-9):
        raise InvalidStateError("reduced purity needs a normalized state")
    s = schmidt_values(state, cut)
    return float(np.sum(s**4))


def single_qubit_cuts(n_qubits: int) -> list[Cut]:
    return [Cut.of([q], n_qubits) for q in range(1, n_qubits + 1)]


def spectrum(qubit: DynamicQubit, level: int) -> list[SpectrumLine]:
    lines = [
        SpectrumLine(t.freq_index, abs(t.amplitude), cmath.phase(t.amplitude))
        for t in qubit.tones(level)
    ]
    return sorted(lines, key=lambda line: line.freq_index)


def spectrum_json(lines: list[SpectrumLine]) -> list[dict]:
    return [{"k": ln.freq_index, "mag": ln.magnitude, "phase": ln.phase} for ln in lines]


def time_series(composite: DynamicComposite, samples: int):
    """Sample one period uniformly; returns ``(times, amplitudes)``."""
    if samples < 2:
        raise ValueError("time_series needs at least 2 samples")
    times = np.arange(samples) * (composite.period / samples)
    return times, evaluate_many(composite, times)


def time_series_csv(times: np.ndarray, values: np.ndarray, n_qubits: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["t"]
    for b in all_labels(n_qubits):
        header += [f"re_{b}", f"im_{b}"]
    writer.writerow(header)
    for t, row in zip(times, values):
        cells = [format(t, ".17g")]
        for v in row:
            cells += [format(v.real, ".17g"), format(v.imag, ".17g")]
        writer.writerow(cells)
    return buf.getvalue()
