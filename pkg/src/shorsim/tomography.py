"""State and process tomography with maximum-likelihood reconstruction.

State tomography measures every local Pauli setting (3**k settings for k
qubits; the outcome statistics carry the 2**(2k) real parameters of the
state).  Reconstruction maximizes the likelihood of the recorded counts over
physical (positive, trace-one) states: exactly-consistent data (the
infinite-shot mode, ``shots == 0`` records) admits the closed-form optimum by
linear inversion plus a positivity projection; sampled data is refined by the
fixed-point R*rho*R iteration from a projected linear-inversion start.

Process tomography drives 4**k product input states (|0>, |1>, |+>, |+i> per
qubit) through the channel, state-tomographs every output, and assembles the
chi matrix: the process's expansion coefficients over the k-qubit Pauli
operator basis, normalized to unit trace.  Process fidelity is Tr(chi_a
chi_b); full process tomography is capped at two qubits (4**k inputs times
3**k settings grows too fast beyond that).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import IncompleteDataError, NonConvergenceError, PreconditionError
from .noise import Channel
from .sim import DensityMatrix, MeasurementRecord, PureState

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}

_EIGENSTATES = {
    "Z": (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
    "X": (np.array([1, 1], dtype=complex) / np.sqrt(2),
          np.array([1, -1], dtype=complex) / np.sqrt(2)),
    "Y": (np.array([1, 1j], dtype=complex) / np.sqrt(2),
          np.array([1, -1j], dtype=complex) / np.sqrt(2)),
}

MLE_TOL = 1e-10
MLE_MAX_ITERATIONS = 10_000


@lru_cache(maxsize=None)
def pauli_basis(k: int) -> tuple[np.ndarray, ...]:
    """The 4**k Pauli products over k qubits, I/X/Y/Z lexicographic."""
    mats = []
    for letters in itertools.product("IXYZ", repeat=k):
        m = np.array([[1.0 + 0j]])
        for letter in letters:
            m = np.kron(m, PAULI_1Q[letter])
        mats.append(m)
    return tuple(mats)


def pauli_settings(k: int) -> tuple[tuple[str, ...], ...]:
    """All 3**k local measurement settings."""
    return tuple(itertools.product("XYZ", repeat=k))


@lru_cache(maxsize=None)
def _setting_projectors(setting: tuple[str, ...]) -> np.ndarray:
    """Stack of the 2**k outcome projectors of one local Pauli setting."""
    k = len(setting)
    projs = np.empty((2**k, 2**k, 2**k), dtype=complex)
    for outcome in range(2**k):
        vec = np.array([1.0 + 0j])
        for pos, letter in enumerate(setting):
            bit = (outcome >> (k - 1 - pos)) & 1
            vec = np.kron(vec, _EIGENSTATES[letter][bit])
        projs[outcome] = np.outer(vec, vec.conj())
    return projs


def simulate_state_tomography(state, shots_per_setting: int, seed: int,
                              exact: bool = False) -> list[MeasurementRecord]:
    """Measurement records over every local Pauli setting of the state.

    ``exact`` records the Born probabilities themselves (infinite-shot mode);
    otherwise each setting is sampled with a counter-based generator.
    """
    rho = state.density().matrix if isinstance(state, PureState) else state.matrix
    k = int(np.log2(rho.shape[0]))
    if not exact and shots_per_setting < 1:
        raise PreconditionError("shots_per_setting must be >= 1 when sampling")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    records = []
    for setting in pauli_settings(k):
        projs = _setting_projectors(setting)
        probs = np.clip(np.einsum("oij,ji->o", projs, rho).real, 0.0, None)
        probs = probs / probs.sum()
        if exact:
            counts = {format(o, f"0{k}b"): float(p) for o, p in enumerate(probs) if p > 0}
            records.append(MeasurementRecord(setting, counts, 0))
        else:
            sampled = rng.multinomial(shots_per_setting, probs)
            counts = {format(o, f"0{k}b"): int(n) for o, n in enumerate(sampled) if n > 0}
            records.append(MeasurementRecord(setting, counts, shots_per_setting))
    return records


def _record_arrays(records) -> tuple[int, np.ndarray, np.ndarray]:
    """Validate completeness and flatten records into projector/weight stacks."""
    if not records:
        raise IncompleteDataError("no tomography records")
    k = len(records[0].basis)
    seen = {tuple(r.basis) for r in records}
    missing = set(pauli_settings(k)) - seen
    if missing:
        raise IncompleteDataError(
            f"incomplete setting set: {len(missing)} of {3**k} settings missing"
        )
    projs = []
    weights = []
    for r in records:
        stack = _setting_projectors(tuple(r.basis))
        for label, value in r.counts.items():
            projs.append(stack[int(label, 2)])
            weights.append(float(value))
    weights = np.asarray(weights)
    return k, np.asarray(projs), weights / weights.sum()


def _linear_inversion(projs: np.ndarray, freqs: np.ndarray, settings: int) -> np.ndarray:
    # per-projector frequency normalized within its own setting: freqs sum to
    # 1 across everything, each complete setting carries 1/settings of it
    a = projs.conj().reshape(projs.shape[0], -1)
    target = freqs * settings
    sol, *_ = np.linalg.lstsq(a, target, rcond=None)
    d = projs.shape[1]
    rho = sol.reshape(d, d)
    return (rho + rho.conj().T) / 2


def _project_psd(m: np.ndarray, floor: float = 0.0) -> np.ndarray:
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    vals = np.clip(vals, floor, None)
    out = (vecs * vals) @ vecs.conj().T
    return out / np.real(np.trace(out))


def reconstruct_state(records, tol: float = MLE_TOL,
                      max_iterations: int = MLE_MAX_ITERATIONS) -> DensityMatrix:
    """Maximum-likelihood density matrix for the recorded counts."""
    k, projs, freqs = _record_arrays(records)
    exact = all(r.shots == 0 for r in records)
    rho = _project_psd(_linear_inversion(projs, freqs, 3**k),
                       floor=0.0 if exact else 1e-9)
    if exact:
        # exactly consistent data: the projected inversion reproduces every
        # frequency, which is the likelihood optimum
        return DensityMatrix(rho)
    loglik = None
    for _ in range(max_iterations):
        probs = np.einsum("oij,ji->o", projs, rho).real
        probs = np.clip(probs, 1e-300, None)
        r_op = np.einsum("o,oij->ij", freqs / probs, projs)
        rho = r_op @ rho @ r_op
        rho = rho / np.real(np.trace(rho))
        new_loglik = float(freqs @ np.log(probs))
        if loglik is not None and abs(new_loglik - loglik) < tol:
            return DensityMatrix(rho)
        loglik = new_loglik
    probs = np.clip(np.einsum("oij,ji->o", projs, rho).real, 1e-300, None)
    residual = abs(float(freqs @ np.log(probs)) - loglik)
    raise NonConvergenceError(max_iterations, residual)


# Process tomography


@dataclass(frozen=True)
class ChiMatrix:
    """Process representation over the Pauli operator basis, trace one."""

    matrix: np.ndarray = field(compare=False)
    num_qubits: int

    def validate(self, tol: float = 1e-8) -> "ChiMatrix":
        m = self.matrix
        if float(np.max(np.abs(m - m.conj().T))) > tol:
            raise ValueError("chi matrix is not Hermitian")
        if abs(complex(np.trace(m)) - 1.0) > tol:
            raise ValueError("chi matrix trace deviates from 1")
        if float(np.linalg.eigvalsh(m)[0]) < -tol:
            raise ValueError("chi matrix is not positive semidefinite")
        return self


def chi_from_kraus(kraus, k: int) -> ChiMatrix:
    d = 2**k
    basis = pauli_basis(k)
    coeffs = np.array([[np.trace(p @ op) / d for p in basis] for op in kraus])
    chi = coeffs.T @ coeffs.conj()
    return ChiMatrix((chi + chi.conj().T) / 2, k)


def chi_of_channel(channel: Channel) -> ChiMatrix:
    return chi_from_kraus(channel.kraus, channel.num_qubits)


def chi_of_unitary(u: np.ndarray) -> ChiMatrix:
    return chi_from_kraus([np.asarray(u, dtype=complex)], int(np.log2(u.shape[0])))


def process_fidelity(chi_a: ChiMatrix, chi_b: ChiMatrix) -> float:
    """Tr(chi_a chi_b) with both arguments normalized to unit trace."""
    if chi_a.num_qubits != chi_b.num_qubits:
        raise PreconditionError("process dimension mismatch")
    a = chi_a.matrix / np.real(np.trace(chi_a.matrix))
    b = chi_b.matrix / np.real(np.trace(chi_b.matrix))
    return float(np.real(np.trace(a @ b)))


def _input_states(k: int) -> list[np.ndarray]:
    kets = [
        np.array([1, 0], dtype=complex),
        np.array([0, 1], dtype=complex),
        np.array([1, 1], dtype=complex) / np.sqrt(2),
        np.array([1, 1j], dtype=complex) / np.sqrt(2),
    ]
    states = []
    for combo in itertools.product(kets, repeat=k):
        vec = np.array([1.0 + 0j])
        for ket in combo:
            vec = np.kron(vec, ket)
        states.append(np.outer(vec, vec.conj()))
    return states


def process_tomography_records(channel: Channel, shots_per_setting: int, seed: int,
                               exact: bool = False) -> list[list[MeasurementRecord]]:
    """State-tomography records of the channel output for each input state."""
    k = channel.num_qubits
    if k > 2:
        raise PreconditionError("full process tomography is capped at 2 qubits")
    child_seeds = np.random.SeedSequence(seed).generate_state(4**k, dtype=np.uint64)
    records = []
    for rho_in, sub in zip(_input_states(k), child_seeds):
        out = DensityMatrix(channel.apply(rho_in))
        records.append(simulate_state_tomography(
            out, shots_per_setting, int(sub), exact=exact))
    return records


def reconstruct_process(records_by_input: list[list[MeasurementRecord]]) -> ChiMatrix:
    """Chi matrix from per-input state-tomography records.

    The reconstructed outputs determine the channel's action on the matrix
    units (the 4**k product inputs span operator space); the resulting
    superoperator is re-expressed in the Pauli basis, Hermitized, and
    projected to the nearest positive, trace-one chi matrix.
    """
    count = len(records_by_input)
    k = round(np.log2(count) / 2)
    if 4**k != count:
        raise IncompleteDataError(f"expected 4**k record groups, got {count}")
    d = 2**k
    outputs = [reconstruct_state(recs).matrix for recs in records_by_input]
    ins = np.array([rho.reshape(-1) for rho in _input_states(k)])  # (4^k, d^2)
    super_op = np.empty((d * d, d * d), dtype=complex)
    for j in range(d * d):
        unit = np.zeros(d * d, dtype=complex)
        unit[j] = 1.0
        coeffs = np.linalg.solve(ins.T, unit)
        column = sum(c * out for c, out in zip(coeffs, outputs))
        super_op[:, j] = column.reshape(-1)
    chi = _chi_from_superop(super_op, k)
    vals, vecs = np.linalg.eigh(chi)
    vals = np.clip(vals, 0.0, None)
    chi = (vecs * vals) @ vecs.conj().T
    chi = chi / np.real(np.trace(chi))
    return ChiMatrix(chi, k)


def _chi_from_superop(super_op: np.ndarray, k: int) -> np.ndarray:
    d = 2**k
    basis = pauli_basis(k)
    chi = np.empty((d * d, d * d), dtype=complex)
    for m in range(d * d):
        for n in range(d * d):
            kmn = np.kron(basis[m], basis[n].T)
            chi[m, n] = np.trace(kmn.conj().T @ super_op) / d**2
    return (chi + chi.conj().T) / 2


def simulate_process_tomography(channel: Channel, shots_per_setting: int, seed: int,
                                exact: bool = False) -> ChiMatrix:
    return reconstruct_process(
        process_tomography_records(channel, shots_per_setting, seed, exact=exact)
    )


def product_rule_fidelity(fidelities) -> float:
    """Process fidelity of independent gates on disjoint qubit sets: the plain
    product.  Note that multiplying independently rounded inputs differs from
    rounding the product of unrounded measurements (0.85 * 0.89 = 0.7565
    exactly); this function multiplies its inputs as given."""
    out = 1.0
    for f in fidelities:
        out *= f
    return out


def chained_error_bound(fidelities) -> float:
    """Lower bound on the process fidelity of a gate sequence by chaining
    per-gate errors.

    Uses the Bures angle A(F) = arccos(sqrt(F)) between Jamiolkowski states,
    which obeys the triangle inequality under composition (the chaining
    property of the process-distance framework of Gilchrist, Langford and
    Nielsen, Phys. Rev. A 71, 062310 (2005)), so

        F_total >= cos^2( min(pi/2, sum_i arccos(sqrt(F_i))) ).

    The bound never exceeds the smallest input and approaches 1 only when
    every input does, which is why it is weak for mid-range fidelities.
    """
    total = 0.0
    for f in fidelities:
        if not 0.0 <= f <= 1.0:
            raise PreconditionError(f"fidelity {f} outside [0, 1]")
        total += float(np.arccos(np.sqrt(f)))
    total = min(total, np.pi / 2)
    return float(np.cos(total) ** 2)


# Bootstrap error bars


def resample_records(records, rng) -> list[MeasurementRecord]:
    out = []
    for r in records:
        if r.shots == 0:
            out.append(r)
            continue
        labels = sorted(r.counts)
        probs = np.array([r.counts[b] for b in labels], dtype=float)
        fresh = rng.multinomial(r.shots, probs / probs.sum())
        counts = {b: int(n) for b, n in zip(labels, fresh) if n > 0}
        out.append(MeasurementRecord(r.basis, counts, r.shots))
    return out


def bootstrap_metric(records, reconstruct, metric, resamples: int, seed: int):
    """Parametric bootstrap: resample counts, re-reconstruct, report the
    metric's mean and standard deviation over the resamples."""
    if resamples < 2:
        raise PreconditionError("need at least 2 bootstrap resamples")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    values = []
    for _ in range(resamples):
        if records and isinstance(records[0], list):
            fresh = [resample_records(group, rng) for group in records]
        else:
            fresh = resample_records(records, rng)
        values.append(metric(reconstruct(fresh)))
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1))
