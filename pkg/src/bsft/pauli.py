"""n-qubit Pauli operators in binary symplectic form.

A Pauli is stored as two length-n bit vectors (packed into Python ints)
plus a power of i.  Qubit j carries the factor i^(x_j * z_j) X^x_j Z^z_j,
so the letter Y corresponds to (x_j, z_j) = (1, 1) with no extra phase.
Multiplication tracks the phase exactly mod 4, which is what lets the
small-code oracles stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}
_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {v: k for k, v in _PHASE_PREFIX.items()}


@dataclass(frozen=True)
class PauliOp:
    """Immutable Pauli operator on n qubits.

    x and z hold the X- and Z-part bit vectors (bit j = qubit j);
    phase is the exponent of i in front of the canonical qubit-wise form.
    """

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bit vector wider than qubit count")
        object.__setattr__(self, "phase", self.phase & 3)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOp":
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _LETTER_TO_BITS[letter]
        return cls(n, xb << qubit, zb << qubit)

    @classmethod
    def from_string(cls, text: str) -> "PauliOp":
        """Parse "<phase><letters>", e.g. "+XIZ", "-iYY".  Letter 0 = qubit 0."""
        body = text
        phase = 0
        for prefix in ("+i", "-i", "+", "-"):
            if text.startswith(prefix):
                phase = _PREFIX_PHASE[prefix]
                body = text[len(prefix):]
                break
        if not body or any(c not in _LETTER_TO_BITS for c in body):
            raise ValueError(f"bad Pauli string {text!r}")
        x = z = 0
        for j, letter in enumerate(body):
            xb, zb = _LETTER_TO_BITS[letter]
            x |= xb << j
            z |= zb << j
        return cls(len(body), x, z, phase)

    @classmethod
    def from_support(cls, n: int, xs=(), zs=()) -> "PauliOp":
        x = z = 0
        for q in xs:
            x |= 1 << q
        for q in zs:
            z |= 1 << q
        return cls(n, x, z)

    # ------------------------------------------------------------------
    # group algebra
    # ------------------------------------------------------------------

    def multiply(self, other: "PauliOp") -> "PauliOp":
        """Group product self * other with exact phase tracking."""
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} != {other.n}")
        x = self.x ^ other.x
        z = self.z ^ other.z
        # i^(x1 z1) i^(x2 z2) (-1)^(z1 x2) = i^(phase delta) i^(x3 z3)
        t = (
            (self.x & self.z).bit_count()
            + (other.x & other.z).bit_count()
            + 2 * (self.z & other.x).bit_count()
            - (x & z).bit_count()
        )
        return PauliOp(self.n, x, z, (self.phase + other.phase + t) & 3)

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return self.multiply(other)

    def commutes(self, other: "PauliOp") -> bool:
        return not self.sympl(other)

    def sympl(self, other: "PauliOp") -> int:
        """Symplectic form: 0 if the operators commute, 1 if not."""
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} != {other.n}")
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) & 1

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def letter(self, qubit: int) -> str:
        return _BITS_TO_LETTER[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_string(self) -> str:
        letters = "".join(self.letter(j) for j in range(self.n))
        return _PHASE_PREFIX[self.phase] + letters

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"PauliOp({self.to_string()!r})"


__all__ = ["PauliOp"]
