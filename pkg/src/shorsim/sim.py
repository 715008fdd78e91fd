"""Dense pure-state and density-matrix simulation.

States are indexed most-significant-bit first: qubit 0 (the top rail)
contributes 2**(width-1) to the basis index.  Density matrices evolve through
the same gate kernel via the row-major vectorization trick: applying U to the
row qubits and conj(U) to the column qubits of the flattened matrix.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from ._kernels import apply_gate
from .builder import expand_iqft_marker
from .circuit import DENSE_CAP, Circuit
from .errors import PreconditionError
from .gates import gate_matrix
from .noise import NoiseModel, interaction_frame, is_interaction

DENSITY_CAP = 10  # qubits; a density matrix has 4**width entries

_AXIS_LETTERS = string.ascii_lowercase + string.ascii_uppercase


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    @property
    def num_qubits(self) -> int:
        return int(np.log2(self.amplitudes.shape[0]))

    def validate(self, tol: float = 1e-10) -> "PureState":
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > tol:
            raise ValueError(f"state norm {norm} deviates from 1 by more than {tol}")
        return self

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    @property
    def num_qubits(self) -> int:
        return int(np.log2(self.matrix.shape[0]))

    def validate(self, tol: float = 1e-10, psd_tol: float = 1e-8) -> "DensityMatrix":
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > tol:
            raise ValueError(f"not Hermitian: max deviation {herm}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > tol:
            raise ValueError(f"trace {tr} deviates from 1 by more than {tol}")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -psd_tol:
            raise ValueError(f"not positive semidefinite: min eigenvalue {lo}")
        return self

    def probabilities(self) -> np.ndarray:
        return np.clip(np.diag(self.matrix).real, 0.0, None)


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome histogram of one measurement setting.

    ``basis`` holds one Pauli letter per measured qubit.  Sampled records have
    ``shots > 0`` and integer counts summing to ``shots``; exact
    (infinite-shot) records use ``shots == 0`` and store probabilities.
    """

    basis: tuple[str, ...]
    counts: dict[str, float]
    shots: int

    def validate(self) -> "MeasurementRecord":
        total = sum(self.counts.values())
        if self.shots > 0 and round(total) != self.shots:
            raise ValueError(f"counts sum {total} != shots {self.shots}")
        if self.shots == 0 and abs(total - 1.0) > 1e-9:
            raise ValueError(f"exact record probabilities sum to {total}")
        return self

    def frequencies(self) -> dict[str, float]:
        total = sum(self.counts.values())
        return {k: v / total for k, v in self.counts.items()}


def _check_width(width: int, cap: int, what: str):
    if width > cap:
        raise PreconditionError(f"{what}: width {width} exceeds cap of {cap} qubits")


def run_pure(circuit: Circuit, input_state: int = 0, cap: int = DENSE_CAP) -> PureState:
    """Exact state after all gates, from the given basis-state input."""
    c = expand_iqft_marker(circuit)
    _check_width(c.width, cap, "run_pure")
    dim = 2**c.width
    if not 0 <= input_state < dim:
        raise PreconditionError(f"input basis state {input_state} out of range")
    psi = np.zeros(dim, dtype=complex)
    psi[input_state] = 1.0
    for g in c.gates:
        psi = apply_gate(psi, c.width, gate_matrix(g), g.qubits)
    return PureState(psi)


def circuit_unitary(circuit: Circuit, cap: int = DENSE_CAP) -> np.ndarray:
    """Brute-force unitary of the gate list (final-op flags are labelling and
    are not folded in)."""
    c = expand_iqft_marker(circuit)
    _check_width(c.width, cap, "circuit_unitary")
    w = c.width
    mat = np.eye(2**w, dtype=complex).reshape(-1)
    for g in c.gates:
        mat = apply_gate(mat, 2 * w, gate_matrix(g), g.qubits)
    return mat.reshape(2**w, 2**w)


def run_density(circuit: Circuit, input_state: int = 0,
                noise: NoiseModel | None = None, cap: int = DENSITY_CAP) -> DensityMatrix:
    """Evolve a density matrix through the circuit under the photonic noise
    model; with noise off this equals the pure-state projector."""
    noise = noise or NoiseModel()
    c = expand_iqft_marker(circuit)
    _check_width(c.width, cap, "run_density")
    w = c.width
    dim = 2**w
    if not 0 <= input_state < dim:
        raise PreconditionError(f"input basis state {input_state} out of range")
    rho = np.zeros((dim, dim), dtype=complex)
    rho[input_state, input_state] = 1.0
    interaction_index = 0
    for g in c.gates:
        u = gate_matrix(g)
        flat = apply_gate(np.ascontiguousarray(rho).reshape(-1), 2 * w, u, g.qubits)
        flat = apply_gate(flat, 2 * w, u.conj(), tuple(q + w for q in g.qubits))
        rho = flat.reshape(dim, dim)
        if is_interaction(g):
            v = noise.visibility_for(interaction_index)
            interaction_index += 1
            if v < 1.0:
                damped = _dephase_in_frame(rho, w, g.qubits, interaction_frame(g))
                rho = v * rho + (1.0 - v) * damped
        if noise.depolarizing > 0.0:
            rho = _depolarize(rho, w, g.qubits, noise.depolarizing)
    return DensityMatrix(rho)


def _dephase_in_frame(rho: np.ndarray, width: int, qubits: tuple[int, ...],
                      frame: np.ndarray | None) -> np.ndarray:
    """Complete phase damping of ``qubits`` in the interaction basis given by
    ``frame`` columns (computational when None)."""
    out = np.ascontiguousarray(rho).reshape(-1).copy()
    col_qubits = tuple(q + width for q in qubits)
    if frame is not None:
        back = frame.conj().T
        out = apply_gate(out, 2 * width, back, qubits)
        out = apply_gate(out, 2 * width, back.conj(), col_qubits)
    out = out.reshape(rho.shape)
    _dephase_qubits(out, width, qubits)
    if frame is not None:
        out = apply_gate(out.reshape(-1), 2 * width, frame, qubits)
        out = apply_gate(out, 2 * width, frame.conj(), col_qubits)
        out = out.reshape(rho.shape)
    return out


def _dephase_qubits(rho: np.ndarray, width: int, qubits: tuple[int, ...]):
    """Zero every coherence between computational sectors of ``qubits``
    (in place)."""
    t = rho.reshape((2,) * (2 * width))
    for q in qubits:
        view = np.moveaxis(t, (q, width + q), (0, 1))
        view[0, 1] = 0.0
        view[1, 0] = 0.0


def _depolarize(rho: np.ndarray, width: int, qubits, p: float) -> np.ndarray:
    qubits = tuple(qubits)
    keep = tuple(q for q in range(width) if q not in set(qubits))
    if keep:
        reduced = partial_trace_matrix(rho, width, keep)
        mixed = _embed_with_identity(reduced, width, keep)
    else:
        mixed = np.eye(rho.shape[0], dtype=complex) * (np.trace(rho) / rho.shape[0])
    return (1.0 - p) * rho + p * mixed


def _embed_with_identity(reduced: np.ndarray, width: int, keep: tuple[int, ...]) -> np.ndarray:
    s = width - len(keep)
    eye = np.eye(2**s, dtype=complex) / 2**s
    full = np.kron(reduced, eye)  # qubit order: keep first, then the rest
    order = list(keep) + [q for q in range(width) if q not in keep]
    return _permute_qubits(full, width, order)


def _permute_qubits(mat: np.ndarray, width: int, order: list[int]) -> np.ndarray:
    """Reindex a matrix whose qubit at position i is original qubit order[i]
    back to original qubit numbering."""
    pos = [0] * width
    for i, q in enumerate(order):
        pos[q] = i
    axes = [pos[q] for q in range(width)] + [width + pos[q] for q in range(width)]
    t = mat.reshape((2,) * (2 * width)).transpose(axes)
    return np.ascontiguousarray(t).reshape(mat.shape)


def partial_trace(state: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every qubit not in ``keep``; the result's qubit order follows
    the ``keep`` sequence."""
    keep = tuple(keep)
    if not keep:
        raise PreconditionError("partial_trace requires a non-empty keep set")
    return DensityMatrix(partial_trace_matrix(state.matrix, state.num_qubits, keep))


def partial_trace_matrix(rho: np.ndarray, width: int, keep: tuple[int, ...]) -> np.ndarray:
    t = rho.reshape((2,) * (2 * width))
    row = list(_AXIS_LETTERS[:width])
    col = list(_AXIS_LETTERS[width:2 * width])
    for q in range(width):
        if q not in keep:
            col[q] = row[q]
    spec = "".join(row) + "".join(col) + "->" + \
        "".join(row[q] for q in keep) + "".join(col[q] for q in keep)
    k = len(keep)
    return np.einsum(spec, t).reshape(2**k, 2**k)


def register_distribution(state, register, reverse: bool = False) -> np.ndarray:
    """Born-rule outcome distribution over ``register`` (marginalizing the
    rest), with outcomes labelled MSB-first in register order, optionally
    after reversing that order."""
    register = tuple(register)
    if not register:
        raise PreconditionError("empty register")
    probs = state.probabilities()
    w = state.num_qubits
    axes = list(register[::-1] if reverse else register)
    rest = [q for q in range(w) if q not in register]
    t = probs.reshape((2,) * w).transpose(axes + rest)
    out = t.reshape(2 ** len(register), -1).sum(axis=1)
    return np.clip(out, 0.0, None)


def measure_logical(state, register, shots: int, seed: int,
                    reverse: bool = False) -> MeasurementRecord:
    """Sample logical outcomes of ``register`` with a counter-based generator."""
    if shots < 1:
        raise PreconditionError("shots must be >= 1")
    probs = register_distribution(state, register, reverse=reverse)
    probs = probs / probs.sum()
    rng = np.random.Generator(np.random.Philox(seed))
    counts = rng.multinomial(shots, probs)
    k = len(tuple(register))
    histogram = {format(i, f"0{k}b"): int(n) for i, n in enumerate(counts) if n > 0}
    return MeasurementRecord(("Z",) * k, histogram, shots)


def conditional_function_distribution(state, argument_qubits, function_qubits,
                                      outcome: int) -> np.ndarray:
    """Distribution over ``function_qubits`` conditioned on measuring
    ``argument_qubits`` in the basis state ``outcome`` (MSB-first labels,
    natural register order)."""
    argument_qubits = tuple(argument_qubits)
    function_qubits = tuple(function_qubits)
    probs = state.probabilities()
    w = state.num_qubits
    rest = [q for q in range(w)
            if q not in argument_qubits and q not in function_qubits]
    t = probs.reshape((2,) * w).transpose(
        list(argument_qubits) + list(function_qubits) + rest
    )
    joint = t.reshape(2 ** len(argument_qubits), 2 ** len(function_qubits), -1).sum(axis=2)
    if not 0 <= outcome < joint.shape[0]:
        raise PreconditionError(f"argument outcome {outcome} out of range")
    weight = joint[outcome].sum()
    if weight <= 1e-14:
        raise PreconditionError(f"conditioning on zero-probability outcome {outcome}")
    return joint[outcome] / weight
