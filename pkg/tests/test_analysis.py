import math

import numpy as np
import pytest

from conftest import random_state
from qechannels import (
    Cut,
    DynamicComposite,
    DynamicQubit,
    StaticState,
    SynthesisConfig,
    bipartite_determinant,
    evaluate,
    preset_bell,
    preset_w,
    reduced_purity,
    schmidt_rank,
    schmidt_values,
    spectrum,
    symbolic_average,
    synthesize,
    Tone,
    tensor_product_static,
    time_series,
)
from qechannels.analysis import (
    amplitude_matrix,
    is_nonseparable,
    jacobi_singular_values,
    single_qubit_cuts,
    spectrum_json,
    time_series_csv,
)
from qechannels.errors import InvalidStateError

SQRT_HALF = 1 / math.sqrt(2)
BELL = StaticState.from_labels({"00": SQRT_HALF, "11": SQRT_HALF})
W = StaticState.from_labels({"100": 1 / math.sqrt(3), "010": 1 / math.sqrt(3), "001": 1 / math.sqrt(3)})


def gram_oracle(matrix):
    """Singular values via eigenvalues of M^H M, independent of the Jacobi sweep."""
    ev = np.linalg.eigvalsh(matrix.conj().T @ matrix)
    return np.sort(np.sqrt(np.clip(ev, 0, None)))[::-1]


# -- determinant -------------------------------------------------------------


def test_bell_determinant():
    assert bipartite_determinant(BELL) == pytest.approx(0.5, abs=1e-15)
    assert is_nonseparable(BELL)


def test_antisymmetric_bell_sign():
    psi = StaticState.from_labels({"01": SQRT_HALF, "10": SQRT_HALF})
    assert bipartite_determinant(psi) == pytest.approx(-0.5, abs=1e-15)


def test_product_state_determinant_zero(rng):
    for _ in range(20):
        psi = tensor_product_static([random_state(rng, 1), random_state(rng, 1)])
        assert abs(bipartite_determinant(psi)) < 1e-15
        assert not is_nonseparable(psi)


def test_determinant_needs_two_qubits():
    with pytest.raises(InvalidStateError):
        bipartite_determinant(W)


def test_determinant_agrees_with_rank(rng):
    cut = Cut.of([1], 2)
    for i in range(500):
        if i % 3 == 0:
            psi = tensor_product_static([random_state(rng, 1), random_state(rng, 1)])
            if i % 2:
                noise = 1e-6 * (rng.normal(size=4) + 1j * rng.normal(size=4))
                psi = StaticState(2, psi.amplitudes + noise)
        else:
            psi = random_state(rng, 2)
        assert is_nonseparable(psi) == (schmidt_rank(psi, cut) == 2)


# -- Schmidt -----------------------------------------------------------------


def test_bell_schmidt():
    np.testing.assert_allclose(schmidt_values(BELL, Cut.of([1], 2)), [SQRT_HALF, SQRT_HALF], atol=1e-15)


def test_basis_schmidt():
    np.testing.assert_allclose(schmidt_values(StaticState.basis("00"), Cut.of([2], 2)), [1, 0], atol=1e-15)


def test_w_schmidt_and_purity():
    cut = Cut.parse("1|2,3", 3)
    s = schmidt_values(W, cut)
    np.testing.assert_allclose(s, [math.sqrt(2 / 3), math.sqrt(1 / 3)], atol=1e-14)
    assert reduced_purity(W, cut) == pytest.approx(5 / 9, abs=1e-14)


def test_amplitude_matrix_orders_qubits():
    psi = StaticState.basis("011")
    m = amplitude_matrix(psi, Cut.of([2], 3))
    # left index is qubit 2 (bit 1), right index is qubits 1,3 (bits 0,1)
    assert m.shape == (2, 4)
    assert m[1, 1] == 1 and np.count_nonzero(m) == 1


@pytest.mark.parametrize("n_qubits", [2, 3, 4, 5])
def test_jacobi_matches_oracles(rng, n_qubits):
    for _ in range(10):
        psi = random_state(rng, n_qubits)
        left = rng.choice(np.arange(1, n_qubits + 1), size=int(rng.integers(1, n_qubits)), replace=False)
        cut = Cut.of(left, n_qubits)
        m = amplitude_matrix(psi, cut)
        s = schmidt_values(psi, cut)
        np.testing.assert_allclose(s, gram_oracle(m)[: len(s)], atol=1e-7)
        np.testing.assert_allclose(s, np.linalg.svd(m, compute_uv=False), atol=1e-13)
        assert np.sum(s**2) == pytest.approx(1.0, abs=1e-13)


def test_jacobi_rank_deficient():
    m = np.outer([1, 2j, 3], [1, -1, 0.5])
    s = jacobi_singular_values(m)
    np.testing.assert_allclose(s, np.linalg.svd(m, compute_uv=False), atol=1e-13)
    assert s[1] < 1e-13


def test_schmidt_squares_sum_to_norm(rng):
    psi = StaticState(3, 2.5 * random_state(rng, 3).amplitudes)
    s = schmidt_values(psi, Cut.of([3], 3))
    assert np.sum(s**2) == pytest.approx(psi.norm() ** 2, rel=1e-13)


def test_purity_values(rng):
    product = tensor_product_static([random_state(rng, 1) for _ in range(3)])
    for cut in single_qubit_cuts(3):
        assert reduced_purity(product, cut) == pytest.approx(1.0, abs=1e-13)
    assert reduced_purity(BELL, Cut.of([1], 2)) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(InvalidStateError):
        reduced_purity(StaticState(2, 2 * BELL.amplitudes), Cut.of([1], 2))


@pytest.mark.parametrize("n_qubits", [2, 3])
def test_synthesis_preserves_schmidt_rank(rng, n_qubits):
    for _ in range(3):
        target = random_state(rng, n_qubits)
        recovered = symbolic_average(synthesize(target, SynthesisConfig(seed=1)))
        for cut in single_qubit_cuts(n_qubits):
            assert schmidt_rank(recovered, cut) == schmidt_rank(target, cut)
            np.testing.assert_allclose(
                schmidt_values(recovered, cut), schmidt_values(target, cut), atol=1e-12
            )


# -- cuts --------------------------------------------------------------------


def test_cut_parse_and_str():
    cut = Cut.parse("2|1,3", 3)
    assert cut.left == {2} and cut.right == {1, 3}
    assert str(cut) == "2|1,3"
    assert Cut.parse("1,2", 3).right == {3}


@pytest.mark.parametrize("text", ["1|2", "|1,2,3", "1,2,3", "4|1,2,3", "1|1,2,3"])
def test_cut_parse_rejects(text):
    with pytest.raises(ValueError):
        Cut.parse(text, 3)


def test_cut_validate_against_state_size():
    with pytest.raises(ValueError):
        schmidt_values(BELL, Cut.of([1], 3))


# -- spectra and time series -------------------------------------------------


def test_bell_spectrum():
    _, composite = preset_bell()
    (line,) = spectrum(composite.qubits[0], 0)
    assert line.freq_index == 1
    assert line.magnitude == pytest.approx(2 ** -0.25, abs=1e-15)
    assert spectrum(composite.qubits[1], 0)[0].freq_index == -1
    assert [ln.freq_index for ln in spectrum(composite.qubits[1], 1)] == [-3]
    assert spectrum_json(spectrum(composite.qubits[0], 1)) == [
        {"k": 3, "mag": pytest.approx(2 ** -0.25), "phase": 0.0}
    ]


def test_spectrum_sorted_and_empty():
    qubit = DynamicQubit(1, (Tone(1.0, 4), Tone(-2.0, -7), Tone(1j, 0)), ())
    lines = spectrum(qubit, 0)
    assert [ln.freq_index for ln in lines] == [-7, 0, 4]
    assert lines[0].phase == pytest.approx(math.pi)
    assert lines[1].phase == pytest.approx(math.pi / 2)
    lonely = DynamicComposite((DynamicQubit(1, (Tone(1.0, 0),), ()),))
    assert spectrum(lonely.qubits[0], 1) == []


def test_bell_time_series():
    _, composite = preset_bell()
    times, values = time_series(composite, 64)
    assert times[0] == 0 and times[1] == pytest.approx(composite.period / 64)
    np.testing.assert_allclose(np.abs(values[:, 0]), SQRT_HALF, atol=1e-15)
    # alpha_01 carries exp(i(1 - 3)t)
    np.testing.assert_allclose(values[:, 1], SQRT_HALF * np.exp(-2j * times), atol=1e-15)
    np.testing.assert_allclose(values[5], evaluate(composite, times[5]), atol=1e-15)


def test_static_composite_time_series_constant():
    composite = DynamicComposite((DynamicQubit(1, (Tone(0.6, 0),), (Tone(0.8j, 0),)),))
    _, values = time_series(composite, 8)
    np.testing.assert_allclose(values, np.tile([0.6, 0.8j], (8, 1)))


def test_time_series_first_row_is_tone_sum_product():
    _, composite = preset_w()
    _, values = time_series(composite, 4)
    for i, b in enumerate(["000", "100", "111"]):
        idx = int(b, 2)
        expected = 1 + 0j
        for n, bit in enumerate(b):
            expected *= sum(t.amplitude for t in composite.qubits[n].tones(int(bit)))
        assert values[0, idx] == pytest.approx(expected, abs=1e-15)


def test_time_series_validation():
    _, composite = preset_bell()
    with pytest.raises(ValueError):
        time_series(composite, 1)


def test_time_series_csv_layout():
    _, composite = preset_bell()
    times, values = time_series(composite, 3)
    lines = time_series_csv(times, values, 2).splitlines()
    assert lines[0] == "t,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11"
    assert len(lines) == 4
    row = [float(x) for x in lines[2].split(",")]
    assert row[0] == times[1]
    assert complex(row[3], row[4]) == values[1, 1]
