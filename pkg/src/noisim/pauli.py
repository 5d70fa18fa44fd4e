"""Pauli strings over bit masks, with exact phase tracking.

Conventions used throughout the package:

* Qubits are numbered 1..n. Qubit 1 is the leftmost character of the text
  form and the most significant tensor factor of the dense matrix.
* A string is stored as a pair of masks; bit q-1 addresses qubit q. A set
  x bit contributes an X factor, a set z bit a Z factor, both set mean Y.
* Multiplication phases are one of {+1, +i, -1, -i} and are tracked exactly
  (no floating-point phase arithmetic).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "MATRIX_QUBIT_CAP",
    "PHASES",
    "PauliParseError",
    "PauliString",
    "PhasedPauli",
    "identity",
    "multiply",
    "parse",
    "phase_label",
    "tensor",
    "to_matrix",
]

# i**k for k = 0..3; Python complex arithmetic on these values is exact.
PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

_PHASE_LABELS = {1 + 0j: "+1", 1j: "+i", -1 + 0j: "-1", -1j: "-i"}

# Letter for (x, z) indexed as x + 2z.
_LETTERS = "IXZY"
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}

# Dense matrices above this size are refused; memory grows as 4**n.
MATRIX_QUBIT_CAP = 10

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliParseError(ValueError):
    """Raised when a Pauli text form cannot be parsed."""


@dataclass(frozen=True, slots=True)
class PauliString:
    """An unphased n-qubit Pauli string."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"need at least one qubit, got {self.n_qubits}")
        top = 1 << self.n_qubits
        if not (0 <= self.x_mask < top and 0 <= self.z_mask < top):
            raise ValueError(
                f"masks ({self.x_mask}, {self.z_mask}) out of range for "
                f"{self.n_qubits} qubits"
            )

    @property
    def text(self) -> str:
        return "".join(self.letter(q) for q in range(1, self.n_qubits + 1))

    def letter(self, q: int) -> str:
        """Letter at qubit q (1-based)."""
        if not 1 <= q <= self.n_qubits:
            raise ValueError(f"qubit {q} out of range 1..{self.n_qubits}")
        bit = q - 1
        x = (self.x_mask >> bit) & 1
        z = (self.z_mask >> bit) & 1
        return _LETTERS[x + 2 * z]

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def weight(self) -> int:
        """Number of non-identity letters."""
        return (self.x_mask | self.z_mask).bit_count()

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"PauliString({self.text!r})"


@dataclass(frozen=True, slots=True)
class PhasedPauli:
    """A Pauli string together with an exact scalar phase."""

    string: PauliString
    phase: complex

    def __post_init__(self) -> None:
        if self.phase not in PHASES:
            raise ValueError(f"phase {self.phase!r} not in {{+1, +i, -1, -i}}")

    @property
    def phase_text(self) -> str:
        return _PHASE_LABELS[self.phase]


def phase_label(phase: complex) -> str:
    """External rendering of an exact phase: '+1', '+i', '-1' or '-i'."""
    try:
        return _PHASE_LABELS[phase]
    except KeyError:
        raise ValueError(f"phase {phase!r} not in {{+1, +i, -1, -i}}") from None


def identity(n_qubits: int) -> PauliString:
    return PauliString(n_qubits, 0, 0)


def parse(text: str) -> PauliString:
    """Parse a text form like "XZ" into a PauliString.

    Position 1 of the text is qubit 1. Anything outside I/X/Y/Z is rejected
    with the offending position named.
    """
    if not text:
        raise PauliParseError("empty Pauli string")
    x_mask = 0
    z_mask = 0
    for pos, ch in enumerate(text, start=1):
        bits = _LETTER_BITS.get(ch)
        if bits is None:
            raise PauliParseError(
                f"invalid letter {ch!r} at position {pos} of {text!r}"
            )
        x, z = bits
        x_mask |= x << (pos - 1)
        z_mask |= z << (pos - 1)
    return PauliString(len(text), x_mask, z_mask)


def multiply(a: PauliString, b: PauliString) -> PhasedPauli:
    """Product a * b with its exact phase.

    Writing each letter as i**(x z) X**x Z**z, per-qubit reordering picks up
    (-1)**(z_a x_b); the mask-level phase exponent is accumulated with
    popcounts so no per-qubit loop is needed.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError(
            f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}"
        )
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    exponent = (
        (a.x_mask & a.z_mask).bit_count()
        + (b.x_mask & b.z_mask).bit_count()
        - (x & z).bit_count()
        + 2 * (a.z_mask & b.x_mask).bit_count()
    )
    return PhasedPauli(PauliString(a.n_qubits, x, z), PHASES[exponent % 4])


def tensor(a: PauliString, b: PauliString) -> PauliString:
    """Tensor product; a occupies the lower qubit indices."""
    return PauliString(
        a.n_qubits + b.n_qubits,
        a.x_mask | (b.x_mask << a.n_qubits),
        a.z_mask | (b.z_mask << a.n_qubits),
    )


@lru_cache(maxsize=4096)
def _matrix_cached(n_qubits: int, x_mask: int, z_mask: int) -> np.ndarray:
    out = np.array([[1]], dtype=complex)
    for q in range(1, n_qubits + 1):
        bit = q - 1
        letter = _LETTERS[((x_mask >> bit) & 1) + 2 * ((z_mask >> bit) & 1)]
        out = np.kron(out, _SINGLE[letter])
    out.setflags(write=False)
    return out


def to_matrix(p: PauliString) -> np.ndarray:
    """Dense 2**n x 2**n matrix of the (unphased) string.

    Qubit 1 is the most significant Kronecker factor. The returned array is
    cached and read-only; copy before mutating. Refused above
    MATRIX_QUBIT_CAP qubits.
    """
    if p.n_qubits > MATRIX_QUBIT_CAP:
        raise ValueError(
            f"refusing dense matrix for {p.n_qubits} qubits "
            f"(cap {MATRIX_QUBIT_CAP})"
        )
    return _matrix_cached(p.n_qubits, p.x_mask, p.z_mask)
