"""State metrics: fidelity, linear entropy, tangle, and the GHZ witness.

Fidelity uses the squared-overlap convention: <psi|rho|psi> for a pure target
and (Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2 for mixed pairs, so a pure state
against itself scores 1 under either route.
"""

from __future__ import annotations

import numpy as np

from .errors import PreconditionError
from .sim import DensityMatrix, PureState


def _as_matrix(state) -> np.ndarray:
    if isinstance(state, PureState):
        return state.density().matrix
    if isinstance(state, DensityMatrix):
        return state.matrix
    return np.asarray(state, dtype=complex)


def fidelity(rho, target) -> float:
    """Squared-overlap fidelity of ``rho`` against a pure or mixed target."""
    rho_m = _as_matrix(rho)
    if isinstance(target, PureState) or (
        not isinstance(target, DensityMatrix) and np.asarray(target).ndim == 1
    ):
        vec = target.amplitudes if isinstance(target, PureState) else np.asarray(target)
        if rho_m.shape[0] != vec.shape[0]:
            raise PreconditionError(
                f"dimension mismatch: {rho_m.shape[0]} vs {vec.shape[0]}"
            )
        return float(np.real(vec.conj() @ rho_m @ vec))
    sigma = _as_matrix(target)
    if rho_m.shape != sigma.shape:
        raise PreconditionError(f"dimension mismatch: {rho_m.shape} vs {sigma.shape}")
    # (Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2 via the nuclear norm of
    # sqrt(rho) sqrt(sigma), which stays accurate for rank-deficient inputs
    product = _psd_sqrt(rho_m) @ _psd_sqrt(sigma)
    return float(np.linalg.svd(product, compute_uv=False).sum() ** 2)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def linear_entropy(rho) -> float:
    """Normalized mixedness d(1 - Tr rho^2)/(d - 1): 0 for pure states, 1 for
    the maximally mixed state of any dimension."""
    m = _as_matrix(rho)
    d = m.shape[0]
    purity = float(np.real(np.trace(m @ m)))
    return d * (1.0 - purity) / (d - 1.0)


_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)


def concurrence(rho) -> float:
    """Two-qubit concurrence from the spin-flipped eigenvalue construction."""
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise PreconditionError("concurrence is defined for exactly 2 qubits")
    flipped = _YY @ m.conj() @ _YY
    eigs = np.linalg.eigvals(m @ flipped)
    lams = np.sqrt(np.clip(np.sort(eigs.real)[::-1], 0.0, None))
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def tangle(rho) -> float:
    """Squared concurrence."""
    return concurrence(rho) ** 2


def ghz_state(k: int = 3) -> PureState:
    amps = np.zeros(2**k, dtype=complex)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return PureState(amps)


# Ideal three-qubit joint state of the partially-compiled order-2 circuit on
# its interacting rails (argument control, then the two toggling function
# qubits top-to-bottom): (|001> + |110>)/sqrt(2).  A single X on the last
# qubit maps it to the canonical GHZ state, so this target is the GHZ state
# expressed in the circuit's local frame; it is frozen here as a constant.
GHZ_FRAME_LOCAL_X = (2,)


def ghz_frame_target(k: int = 3) -> PureState:
    amps = np.zeros(2**k, dtype=complex)
    amps[0b001] = amps[0b110] = 1.0 / np.sqrt(2.0)
    return PureState(amps)


def ghz_witness(rho, target: PureState | None = None) -> float:
    """GHZ witness value 1/2 - F_GHZ against the frame-rotated target;
    negative values certify GHZ-class entanglement."""
    m = _as_matrix(rho)
    if m.shape != (8, 8):
        raise PreconditionError("the GHZ witness is defined for exactly 3 qubits")
    target = target or ghz_frame_target()
    return 0.5 - fidelity(m, target)
