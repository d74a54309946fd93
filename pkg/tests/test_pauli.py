import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pauli import (PauliLetter, PauliString, PauliSumError, UnknownPauliError, WeightedPauliSum,
                   letters_to_str, pauli_string_matrix, str_to_letters)


def test_letter_round_trip():
    letters = str_to_letters("IXYZ")
    assert letters == (PauliLetter.I, PauliLetter.X, PauliLetter.Y, PauliLetter.Z)
    assert letters_to_str(letters) == "IXYZ"


def test_unknown_letter():
    with pytest.raises(UnknownPauliError):
        PauliLetter.from_char("Q")
    with pytest.raises(UnknownPauliError):
        PauliString("XA")
    with pytest.raises(UnknownPauliError):
        PauliString("")


def test_single_x_matrix():
    assert np.array_equal(pauli_string_matrix(PauliString("X")), [[0, 1], [1, 0]])


def test_zz_matrix():
    assert np.array_equal(PauliString("ZZ").matrix(), np.diag([1, -1, -1, 1]))


def test_ix_matrix():
    expected = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    assert np.array_equal(PauliString("IX").matrix(), expected)


def test_qubit_numbering():
    p = PauliString("XIZ")
    assert p.letter_on(1) is PauliLetter.Z
    assert p.letter_on(3) is PauliLetter.X
    assert p.support() == (1, 3)
    with pytest.raises(IndexError):
        p.letter_on(4)


@given(st.text(alphabet="IXYZ", min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_strings_are_hermitian_involutions(letters):
    m = PauliString(letters).matrix()
    assert np.allclose(m, m.conj().T)
    assert np.allclose(m @ m, np.eye(2 ** len(letters)))


def test_cnot_as_pauli_sum():
    ii, iz = PauliString("II").matrix(), PauliString("IZ").matrix()
    xi, xz = PauliString("XI").matrix(), PauliString("XZ").matrix()
    combination = (ii + iz + xi - xz) / 2
    # control on qubit 1 (least significant), target qubit 2
    cnot = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
    assert np.array_equal(combination, cnot)


def test_duplicate_strings_rejected():
    with pytest.raises(PauliSumError):
        WeightedPauliSum(((1.0, PauliString("X")), (2.0, PauliString("X"))))


def test_mixed_lengths_rejected():
    with pytest.raises(PauliSumError):
        WeightedPauliSum.from_dict({"X": 1.0, "XX": 1.0})


def test_empty_sum_needs_qubits():
    empty = WeightedPauliSum((), num_qubits=2)
    assert len(empty) == 0
    assert np.array_equal(empty.to_matrix(), np.zeros((4, 4)))
    with pytest.raises(PauliSumError):
        WeightedPauliSum(())


def test_hermiticity_detection():
    assert WeightedPauliSum.from_dict({"X": 0.5, "I": 1.0}).is_hermitian()
    assert not WeightedPauliSum.from_dict({"Z": 1j}).is_hermitian()


def test_identity_coefficient_and_without_identity():
    h = WeightedPauliSum.from_dict({"IX": 0.25, "II": -1.5})
    assert h.identity_coefficient == -1.5
    assert h.without_identity().as_dict() == {"IX": 0.25}
    assert h.coefficient("ZZ") == 0


def test_allclose_ignores_order():
    a = WeightedPauliSum.from_dict({"X": 1.0, "Z": 2.0})
    b = WeightedPauliSum.from_dict({"Z": 2.0, "X": 1.0 + 1e-14})
    assert a.allclose(b)
    assert not a.allclose(WeightedPauliSum.from_dict({"X": 1.0}))


def test_text_format():
    text = """
    # rotated two-qubit Hamiltonian
    0.28125 0.0 IX
    0.28125 0.0 XX
    0.0 0.375 ZZ   # anti-Hermitian part
    -0.5625 -0.375 II
    """
    h = WeightedPauliSum.from_text(text)
    assert h.num_qubits == 2
    assert h.coefficient("ZZ") == 0.375j
    assert WeightedPauliSum.from_text(h.to_text()).allclose(h, atol=0.0)


def test_text_format_errors():
    with pytest.raises(UnknownPauliError):
        WeightedPauliSum.from_text("0.5 X")
    with pytest.raises(UnknownPauliError):
        WeightedPauliSum.from_text("half 0 X")
    with pytest.raises(PauliSumError):
        WeightedPauliSum.from_text("1 0 X\n2 0 X")
