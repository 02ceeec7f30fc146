import cmath
import itertools

import numpy as np
import pytest

from qechannels import DynamicComposite, DynamicQubit, StaticState, Tone


def random_state(rng, n_qubits):
    amps = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return StaticState(n_qubits, amps / np.linalg.norm(amps))


def random_composite(rng, n_qubits, max_tones=3, k_max=6):
    qubits = []
    for n in range(1, n_qubits + 1):
        levels = []
        for _ in (0, 1):
            count = int(rng.integers(1, max_tones + 1))
            ks = rng.choice(np.arange(-k_max, k_max + 1), size=count, replace=False)
            amps = rng.normal(size=count) + 1j * rng.normal(size=count)
            levels.append(tuple(Tone(a, int(k)) for a, k in zip(amps, ks)))
        qubits.append(DynamicQubit(n, *levels))
    return DynamicComposite(tuple(qubits), base_frequency=float(rng.uniform(0.5, 3.0)))


def brute_force_amplitude(composite, label, t):
    """Expand the product of tone lists term by term with scalar arithmetic."""
    lists = [composite.qubits[n].tones(int(bit)) for n, bit in enumerate(label)]
    total = 0j
    for combo in itertools.product(*lists):
        coef = 1 + 0j
        k_sum = 0
        for tone in combo:
            coef *= tone.amplitude
            k_sum += tone.freq_index
        total += coef * cmath.exp(1j * k_sum * composite.base_frequency * t)
    return total


def resonance_oracle(composite, label):
    """Sum of coefficients whose total frequency index is exactly zero."""
    lists = [composite.qubits[n].tones(int(bit)) for n, bit in enumerate(label)]
    total = 0j
    for combo in itertools.product(*lists):
        if sum(t.freq_index for t in combo) == 0:
            coef = 1 + 0j
            for tone in combo:
                coef *= tone.amplitude
            total += coef
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
