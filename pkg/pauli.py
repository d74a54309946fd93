"""
Pauli Letters, Strings and Weighted Sums

This module defines the single-qubit Pauli letters (I, X, Y, Z), their tensor
products over Γ qubits (Pauli strings) and complex-weighted sums of Pauli
strings. Weighted sums are the representation of every Hamiltonian handled by
the rest of the package.

Key Features:
    - Letter parsing and string conversion
    - Dense matrices in the qubit-Γ ⊗ ... ⊗ qubit-1 ordering
    - Weighted sums with Hermiticity checks and dense reconstruction
    - Plain-text term format (`<re> <im> <string>` per line) for the command line

Classes:
    PauliLetter: Enumeration of single-qubit Pauli operators
    PauliString: Tensor product of Pauli letters
    WeightedPauliSum: Complex-weighted sum of distinct Pauli strings

Example:
     h = WeightedPauliSum.from_text("0.375 0.0 ZZ\\n-0.28125 0.0 IX")
     h.to_matrix().shape
    (4, 4)

Note:
    The leftmost letter acts on the most significant qubit (qubit Γ), so the
    integer basis index α has qubit 1 as its least significant bit.
"""

# Standard library imports
from dataclasses import dataclass
from enum import Enum
from functools import reduce, total_ordering
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

# Third-party imports
import numpy as np


_LETTER_MATRICES = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class UnknownPauliError(ValueError):
    """Error indicating an unknown Pauli letter or a malformed term line."""

    def __init__(self, *args):
        super(UnknownPauliError, self).__init__(*args)


class PauliSumError(ValueError):
    """Error indicating an inconsistent set of weighted Pauli terms."""


@total_ordering
class PauliLetter(Enum):
    """Single-qubit Pauli operators."""
    I = 0
    X = 1
    Y = 2
    Z = 3

    def __lt__(self, other):
        return self.value < other.value

    def __repr__(self):
        return self.name

    def __str__(self):
        return self.name

    @property
    def matrix(self) -> np.ndarray:
        return _LETTER_MATRICES[self.name].copy()

    @classmethod
    def from_char(cls, character: str) -> "PauliLetter":
        """Converts a single character into a PauliLetter.

        Parameters
        ----------
        character: a string of length one

        Returns
        -------
        PauliLetter
            The letter corresponding to the input character

        Raises
        ------
        UnknownPauliError
            If the input is not one of 'I', 'X', 'Y', 'Z'
        """
        try:
            return cls[character]
        except KeyError:
            raise UnknownPauliError(
                f'Pauli letter must be "I", "X", "Y" or "Z", got {character!r}.'
            ) from None


def str_to_letters(letters: str) -> Tuple[PauliLetter, ...]:
    """Converts a string such as 'IXZ' to a tuple of PauliLetter."""
    return tuple(PauliLetter.from_char(element) for element in letters)


def letters_to_str(letters: Iterable[PauliLetter]) -> str:
    """Converts an iterable of PauliLetter into a string.

    Example: (I, X, Z) would be converted to 'IXZ'
    """
    return "".join(map(str, letters))


@dataclass(frozen=True)
class PauliString:
    """
    Tensor product of single-qubit Pauli letters.

    Attributes:
        letters (str): One letter per qubit, written from qubit Γ (left)
            down to qubit 1 (right).
    """
    letters: str

    def __post_init__(self):
        if not self.letters:
            raise UnknownPauliError("A Pauli string needs at least one letter.")
        str_to_letters(self.letters)

    @classmethod
    def identity(cls, num_qubits: int) -> "PauliString":
        return cls("I" * num_qubits)

    @property
    def num_qubits(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) == {"I"}

    def letter_on(self, qubit: int) -> PauliLetter:
        """Returns the letter acting on `qubit` (numbered 1..Γ)."""
        if not 1 <= qubit <= self.num_qubits:
            raise IndexError(f"qubit {qubit} outside 1..{self.num_qubits}")
        return PauliLetter.from_char(self.letters[self.num_qubits - qubit])

    def support(self) -> Tuple[int, ...]:
        """Qubits (numbered 1..Γ) carrying a non-identity letter, ascending."""
        return tuple(q for q in range(1, self.num_qubits + 1) if self.letter_on(q) is not PauliLetter.I)

    def matrix(self) -> np.ndarray:
        return pauli_string_matrix(self)

    def __str__(self):
        return self.letters


def pauli_string_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix of a Pauli string (Kronecker product, qubit Γ leftmost)."""
    return reduce(np.kron, (_LETTER_MATRICES[c] for c in p.letters))


Term = Tuple[complex, PauliString]


@dataclass(frozen=True)
class WeightedPauliSum:
    """
    Complex-weighted sum of distinct Pauli strings of equal length.

    Attributes:
        terms (Tuple[Term, ...]): (coefficient, string) pairs in a fixed order.
            The order is significant: it is the term order used by the
            Trotterized circuits.
        num_qubits (Optional[int]): Required only for the empty sum.
    """
    terms: Tuple[Term, ...]
    num_qubits: Optional[int] = None

    def __post_init__(self):
        terms = tuple(
            (complex(c), p if isinstance(p, PauliString) else PauliString(p))
            for c, p in self.terms
        )
        lengths = {p.num_qubits for _, p in terms}
        if self.num_qubits is not None:
            lengths.add(self.num_qubits)
        if len(lengths) != 1:
            raise PauliSumError(
                f"All strings must act on the same number of qubits, got lengths {sorted(lengths)}."
            )
        labels = [p.letters for _, p in terms]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise PauliSumError(f"Duplicate Pauli strings: {duplicates}.")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "num_qubits", lengths.pop())

    @classmethod
    def from_dict(cls, coefficients: Dict[str, Union[complex, float]],
                  num_qubits: Optional[int] = None) -> "WeightedPauliSum":
        return cls(tuple((c, PauliString(label)) for label, c in coefficients.items()),
                   num_qubits=num_qubits)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def as_dict(self) -> Dict[str, complex]:
        return {p.letters: c for c, p in self.terms}

    def coefficient(self, string: Union[str, PauliString]) -> complex:
        """Coefficient of `string`, zero if the string is absent."""
        label = string.letters if isinstance(string, PauliString) else string
        return self.as_dict().get(label, 0j)

    @property
    def identity_coefficient(self) -> complex:
        return self.coefficient("I" * self.num_qubits)

    def without_identity(self) -> "WeightedPauliSum":
        return WeightedPauliSum(tuple(t for t in self.terms if not t[1].is_identity),
                                num_qubits=self.num_qubits)

    def is_hermitian(self, atol: float = 1e-14) -> bool:
        """Hermitian iff every coefficient is real (Pauli strings are Hermitian)."""
        return all(abs(c.imag) <= atol for c, _ in self.terms)

    def to_matrix(self) -> np.ndarray:
        dim = 2 ** self.num_qubits
        matrix = np.zeros((dim, dim), dtype=complex)
        for c, p in self.terms:
            matrix += c * pauli_string_matrix(p)
        return matrix

    def allclose(self, other: "WeightedPauliSum", atol: float = 1e-12) -> bool:
        """Term-for-term comparison, ignoring term order."""
        if self.num_qubits != other.num_qubits:
            return False
        mine, theirs = self.as_dict(), other.as_dict()
        labels = set(mine) | set(theirs)
        return all(abs(mine.get(k, 0j) - theirs.get(k, 0j)) <= atol for k in labels)

    @classmethod
    def from_text(cls, text: str) -> "WeightedPauliSum":
        """Parses the term format: one `<re> <im> <string>` per line.

        `#` starts a comment; blank lines are ignored.

        Raises
        ------
        UnknownPauliError
            If a line does not have three fields or a number does not parse
        PauliSumError
            If strings repeat or have different lengths, or no term is given
        """
        terms = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 3:
                raise UnknownPauliError(
                    f"line {number}: expected '<re> <im> <string>', got {raw.strip()!r}"
                )
            try:
                coefficient = complex(float(fields[0]), float(fields[1]))
            except ValueError:
                raise UnknownPauliError(f"line {number}: bad coefficient in {raw.strip()!r}") from None
            terms.append((coefficient, PauliString(fields[2].upper())))
        if not terms:
            raise PauliSumError("No Pauli terms found.")
        return cls(tuple(terms))

    def to_text(self) -> str:
        return "\n".join(f"{c.real!r} {c.imag!r} {p.letters}" for c, p in self.terms) + "\n"

    def __str__(self):
        return " + ".join(f"({c.real:g}{c.imag:+g}j)*{p.letters}" for c, p in self.terms) or "0"
