"""Parametric noise model for post-selected photonic gates.

Every multi-qubit interaction gate (CNOT, CZ, CP, CSWAP, CU; SWAP is rail
relabelling and stays free) is applied as a channel:

    rho -> (1 - p) * M_V(U rho U') + p * depolarized

where M_V mixes the coherent gate (weight V) with the same gate followed by
complete phase damping in the gate's interaction basis, the product basis
that diagonalizes its unitary (weight 1 - V): computational (x) computational
for CZ/CP and for the basis-state-routing multipliers, control (x) X-basis
for CNOT, control (x) swap-symmetry basis for CSWAP.  V is the relative
two-photon interference visibility; at V = 1 the gate is ideal, at V = 0 the
interfering amplitudes are fully distinguishable, which destroys the
entangling power and part of the basis-state correlations.  Depolarizing with
probability p acts on the gate's own qubits.  Post-selection is modelled
separately as a per-gate success probability (1/3 for a fully prebiased
two-photon gate), compounded exponentially for wider interactions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .gates import ENTANGLING_KINDS, Gate, GateKind, gate_matrix

GATE_SUCCESS_DEFAULT = 1.0 / 3.0

PRESETS = {
    "off": {},
    "dependent-pair": {"visibility": 0.98},
    "independent-pair": {"visibility": 0.85},
    # first interaction gate runs on a dependent photon pair, later ones on
    # independent pairs
    "preset-paper": {"per_gate_visibility": (0.98, 0.85)},
}


@dataclass(frozen=True)
class NoiseModel:
    visibility: float = 1.0
    per_gate_visibility: tuple[float, ...] | None = None
    depolarizing: float = 0.0
    gate_success: float = GATE_SUCCESS_DEFAULT

    def __post_init__(self):
        values = [self.visibility, self.depolarizing, self.gate_success]
        if self.per_gate_visibility is not None:
            object.__setattr__(self, "per_gate_visibility", tuple(self.per_gate_visibility))
            values += list(self.per_gate_visibility)
        for v in values:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"noise parameters must lie in [0, 1], got {v}")

    @classmethod
    def preset(cls, name: str) -> "NoiseModel":
        try:
            return cls(**PRESETS[name])
        except KeyError:
            raise ValueError(
                f"unknown noise preset '{name}' (expected one of {sorted(PRESETS)})"
            ) from None

    @classmethod
    def parse(cls, spec: str) -> "NoiseModel":
        """Preset name or comma-separated key=value pairs.

        Keys: ``vr`` (visibility), ``vr_list`` (colon-separated per-gate
        visibilities), ``p`` (depolarizing), ``success`` (gate success).
        """
        spec = spec.strip()
        if spec in PRESETS:
            return cls.preset(spec)
        kw = {}
        for item in spec.split(","):
            if not item:
                continue
            if "=" not in item:
                raise ValueError(f"noise spec entries must be key=value, got '{item}'")
            key, value = item.split("=", 1)
            key = key.strip()
            if key == "vr":
                kw["visibility"] = float(value)
            elif key == "vr_list":
                kw["per_gate_visibility"] = tuple(float(x) for x in value.split(":"))
            elif key == "p":
                kw["depolarizing"] = float(value)
            elif key == "success":
                kw["gate_success"] = float(value)
            else:
                raise ValueError(f"unknown noise key '{key}'")
        return cls(**kw)

    @property
    def trivial(self) -> bool:
        return (
            self.visibility == 1.0
            and self.depolarizing == 0.0
            and not self.per_gate_visibility
        )

    def visibility_for(self, interaction_index: int) -> float:
        """Visibility of the n-th interaction gate of a circuit (0-based).

        A per-gate list is extended with its last entry when the circuit has
        more interaction gates than entries.
        """
        if self.per_gate_visibility:
            idx = min(interaction_index, len(self.per_gate_visibility) - 1)
            return self.per_gate_visibility[idx]
        return self.visibility


def is_interaction(gate: Gate) -> bool:
    """True for gates realized by two-photon interference (post-selected)."""
    return gate.kind in ENTANGLING_KINDS and gate.kind is not GateKind.SWAP


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_PAIR_SYMMETRY = np.array(
    [[1, 0, 0, 0],
     [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0],
     [0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0],
     [0, 0, 0, 1]], dtype=complex,
)


def interaction_frame(gate: Gate) -> np.ndarray | None:
    """Unitary whose columns are the gate's interaction-basis states, or None
    when that basis is computational.  The gate's matrix is diagonal in this
    frame, which is what makes it the which-path pointer basis for
    distinguishable photons."""
    if gate.kind is GateKind.CNOT:
        return np.kron(np.eye(2, dtype=complex), _HADAMARD)
    if gate.kind is GateKind.CSWAP:
        return np.kron(np.eye(2, dtype=complex), _PAIR_SYMMETRY)
    return None  # CZ, CP and the modular multipliers route basis states


def postselection_yield(circuit: Circuit, noise: NoiseModel) -> float:
    """Expected fraction of runs surviving post-selection: the product of the
    per-gate success probabilities.  A k-qubit interaction compounds k-1
    pairwise interferences (a cascade gate), hence success**(k-1)."""
    y = 1.0
    for g in circuit.gates:
        if is_interaction(g):
            y *= noise.gate_success ** (len(g.qubits) - 1)
    return y


# Kraus machinery (shared with process tomography)


def dephasing_kraus(k: int, frame: np.ndarray | None) -> list[np.ndarray]:
    """Rank-one projectors onto the interaction-basis states of a k-qubit
    gate: complete phase damping in that basis."""
    dim = 2**k
    if frame is None:
        frame = np.eye(dim, dtype=complex)
    return [np.outer(frame[:, i], frame[:, i].conj()) for i in range(dim)]


def depolarizing_kraus(k: int, p: float) -> list[np.ndarray]:
    """Kraus set of the k-qubit depolarizing channel of strength p."""
    from .tomography import pauli_basis  # deferred: tomography imports this module

    if p == 0.0:
        return [np.eye(2**k, dtype=complex)]
    ops = [np.sqrt(1.0 - p) * np.eye(2**k, dtype=complex)]
    scale = np.sqrt(p / 4.0**k)
    ops.extend(scale * pm for pm in pauli_basis(k))
    return ops


def noisy_gate_kraus(gate: Gate, visibility: float, depolarizing: float) -> list[np.ndarray]:
    """Kraus operators of one gate under the photonic noise model."""
    u = gate_matrix(gate)
    k = len(gate.qubits)
    kraus = [u]
    if is_interaction(gate) and visibility < 1.0:
        kraus = [np.sqrt(visibility) * u]
        kraus += [np.sqrt(1.0 - visibility) * proj @ u
                  for proj in dephasing_kraus(k, interaction_frame(gate))]
    if depolarizing > 0.0:
        kraus = [d @ g for d in depolarizing_kraus(k, depolarizing) for g in kraus]
    return kraus


@dataclass(frozen=True)
class Channel:
    """A completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple[np.ndarray, ...] = field(compare=False)
    num_qubits: int

    @classmethod
    def from_unitary(cls, u: np.ndarray) -> "Channel":
        k = int(np.log2(u.shape[0]))
        return cls((u.astype(complex),), k)

    @classmethod
    def from_gate(cls, gate: Gate, visibility: float = 1.0,
                  depolarizing: float = 0.0) -> "Channel":
        return cls(tuple(noisy_gate_kraus(gate, visibility, depolarizing)),
                   len(gate.qubits))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho)
        for kop in self.kraus:
            out += kop @ rho @ kop.conj().T
        return out

    def tensor(self, other: "Channel") -> "Channel":
        kraus = tuple(np.kron(a, b) for a in self.kraus for b in other.kraus)
        return Channel(kraus, self.num_qubits + other.num_qubits)
