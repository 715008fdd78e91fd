"""Pure-numpy gate application kernel.

Convention: a state over ``n`` qubits is a flat complex vector of length
``2**n`` whose basis index reads the qubits most-significant-bit first, i.e.
qubit 0 contributes ``2**(n-1)``.  A gate matrix over ``k`` target qubits uses
the same convention within ``targets`` order: ``targets[0]`` is the most
significant bit of the matrix index.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def apply_gate(state: np.ndarray, n: int, u: np.ndarray, targets) -> np.ndarray:
    """Apply the ``2**k x 2**k`` unitary ``u`` to ``targets`` of ``state``.

    Returns the updated flat state vector; the input buffer must not be
    relied upon afterwards.
    """
    k = len(targets)
    psi = state.reshape((2,) * n)
    psi = np.moveaxis(psi, targets, range(k))
    batched = psi.reshape(2**k, -1)
    batched = u @ batched
    psi = batched.reshape((2,) * n)
    psi = np.moveaxis(psi, range(k), targets)
    return np.ascontiguousarray(psi).reshape(-1)
