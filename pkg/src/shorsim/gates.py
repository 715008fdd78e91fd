"""Gate set and gate matrices.

Single-qubit H, X, T; two-qubit CNOT, CZ, SWAP and the parametric controlled
phase CP (angle is ``pi * phase`` for a rational ``phase``); the three-qubit
CSWAP; the controlled modular multiplier CU acting on a control plus the whole
function register; and the IQFT pseudo-gate marking an unexpanded inverse
Fourier transform over the listed qubits.

Matrix convention: the matrix index over a gate's qubits is MSB-first in
``qubits`` order (qubits[0] is the most significant bit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np


class GateKind(Enum):
    H = "H"
    X = "X"
    T = "T"
    CNOT = "CNOT"
    CZ = "CZ"
    CP = "CP"
    SWAP = "SWAP"
    CSWAP = "CSWAP"
    CU = "CU"
    IQFT = "IQFT"


@dataclass(frozen=True)
class ModMul:
    """Parameters of a controlled modular multiplier: y -> C**(2**j) * y mod N."""

    base: int
    modulus: int
    power: int  # j: the gate multiplies by base**(2**power)

    def __post_init__(self):
        if not (1 < self.base < self.modulus):
            raise ValueError(f"base must satisfy 1 < C < N, got C={self.base} N={self.modulus}")
        if math.gcd(self.base, self.modulus) != 1:
            raise ValueError(f"C={self.base} and N={self.modulus} are not co-prime")
        if self.power < 0:
            raise ValueError("power must be non-negative")

    @property
    def multiplier(self) -> int:
        return pow(self.base, 2**self.power, self.modulus)


@dataclass(frozen=True)
class Gate:
    """One circuit operation.  ``qubits`` lists controls before targets."""

    kind: GateKind
    qubits: tuple[int, ...]
    phase: Fraction | None = None  # CP only, in units of pi
    modmul: ModMul | None = None   # CU only
    tag: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value}: duplicate qubit in {self.qubits}")
        n = GATE_ARITY.get(self.kind)
        if n is not None and len(self.qubits) != n:
            raise ValueError(f"{self.kind.value} expects {n} qubits, got {len(self.qubits)}")
        if self.kind is GateKind.CP:
            if self.phase is None:
                raise ValueError("CP requires a phase")
        elif self.phase is not None:
            raise ValueError(f"{self.kind.value} takes no phase")
        if self.kind is GateKind.CU:
            if self.modmul is None:
                raise ValueError("CU requires modular-multiplier parameters")
            m = len(self.qubits) - 1
            if 2**m < self.modmul.modulus:
                raise ValueError("function register too small for the modulus")
        elif self.modmul is not None:
            raise ValueError(f"{self.kind.value} takes no modular-multiplier parameters")

    def with_qubits(self, qubits: tuple[int, ...]) -> "Gate":
        return Gate(self.kind, qubits, self.phase, self.modmul, self.tag)

    def same_operation(self, other: "Gate") -> bool:
        """Equality ignoring the provenance tag (dataclass eq already does)."""
        return (
            self.kind == other.kind
            and self.qubits == other.qubits
            and self.phase == other.phase
            and self.modmul == other.modmul
        )


GATE_ARITY = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.T: 1,
    GateKind.CNOT: 2,
    GateKind.CZ: 2,
    GateKind.CP: 2,
    GateKind.SWAP: 2,
    GateKind.CSWAP: 3,
    # CU and IQFT have variable arity
}

ENTANGLING_KINDS = frozenset(
    {GateKind.CNOT, GateKind.CZ, GateKind.CP, GateKind.SWAP, GateKind.CSWAP, GateKind.CU}
)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_T = np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def _cswap_matrix() -> np.ndarray:
    m = np.eye(8, dtype=complex)
    # control is the MSB: swap the two low bits within the control=1 block
    m[[5, 6]] = m[[6, 5]]
    return m


_CSWAP = _cswap_matrix()


def modmul_permutation(mm: ModMul, m: int) -> np.ndarray:
    """Permutation of {0..2**m-1} for y -> multiplier*y mod N, identity for y >= N."""
    perm = np.arange(2**m)
    k = mm.multiplier
    for y in range(mm.modulus):
        perm[y] = (k * y) % mm.modulus
    return perm


def gate_matrix(gate: Gate) -> np.ndarray:
    """Dense unitary of ``gate`` over its own qubits (MSB-first)."""
    kind = gate.kind
    if kind is GateKind.H:
        return _H
    if kind is GateKind.X:
        return _X
    if kind is GateKind.T:
        return _T
    if kind is GateKind.CNOT:
        return _CNOT
    if kind is GateKind.CZ:
        return _CZ
    if kind is GateKind.SWAP:
        return _SWAP
    if kind is GateKind.CSWAP:
        return _CSWAP
    if kind is GateKind.CP:
        return np.diag([1, 1, 1, np.exp(1j * math.pi * float(gate.phase))]).astype(complex)
    if kind is GateKind.CU:
        m = len(gate.qubits) - 1
        dim = 2 ** (m + 1)
        perm = modmul_permutation(gate.modmul, m)
        mat = np.zeros((dim, dim), dtype=complex)
        half = 2**m
        for y in range(half):
            mat[y, y] = 1.0                      # control 0: identity
            mat[half + perm[y], half + y] = 1.0  # control 1: permute
        return mat
    raise ValueError(f"{kind.value} has no matrix (marker gate); expand it first")


def is_self_inverse(gate: Gate) -> bool:
    kind = gate.kind
    if kind in (GateKind.H, GateKind.X, GateKind.CNOT, GateKind.CZ,
                GateKind.SWAP, GateKind.CSWAP):
        return True
    if kind is GateKind.CP:
        # squares to identity iff the phase is an odd integer multiple of pi
        return gate.phase.denominator == 1 and gate.phase.numerator % 2 == 1
    if kind is GateKind.CU:
        mm = gate.modmul
        return pow(mm.multiplier, 2, mm.modulus) == 1
    return False
