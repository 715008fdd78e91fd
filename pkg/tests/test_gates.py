import numpy as np
import pytest
from fractions import Fraction

from shorsim.gates import (ENTANGLING_KINDS, Gate, GateKind, ModMul, gate_matrix,
                           is_self_inverse, modmul_permutation)

UNITARITY_TOL = 1e-12


def unitarity_defect(u):
    return np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()


@pytest.mark.parametrize("gate", [
    Gate(GateKind.H, (0,)),
    Gate(GateKind.X, (0,)),
    Gate(GateKind.T, (0,)),
    Gate(GateKind.CNOT, (0, 1)),
    Gate(GateKind.CZ, (0, 1)),
    Gate(GateKind.SWAP, (0, 1)),
    Gate(GateKind.CSWAP, (0, 1, 2)),
    Gate(GateKind.CP, (0, 1), phase=Fraction(-1, 4)),
    Gate(GateKind.CP, (0, 1), phase=Fraction(1, 2)),
    Gate(GateKind.CU, (0, 1, 2, 3, 4), modmul=ModMul(2, 15, 0)),
    Gate(GateKind.CU, (0, 1, 2, 3, 4), modmul=ModMul(7, 15, 1)),
    Gate(GateKind.CU, (0, 1, 2, 3), modmul=ModMul(2, 5, 0)),
])
def test_all_gate_matrices_unitary(gate):
    assert unitarity_defect(gate_matrix(gate)) < UNITARITY_TOL


def test_hadamard_matrix():
    np.testing.assert_allclose(gate_matrix(Gate(GateKind.H, (0,))),
                               np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def test_cnot_matrix_control_msb():
    u = gate_matrix(Gate(GateKind.CNOT, (0, 1)))
    # |10> -> |11>
    vec = np.zeros(4); vec[0b10] = 1
    out = u @ vec
    assert out[0b11] == 1


@pytest.mark.parametrize("C,j", [(2, 0), (2, 1), (4, 0), (7, 0), (7, 1), (13, 0), (14, 0)])
def test_controlled_multiplier_is_permutation(C, j):
    u = gate_matrix(Gate(GateKind.CU, (0, 1, 2, 3, 4), modmul=ModMul(C, 15, j)))
    # every row and column has exactly one unit entry
    assert np.allclose(np.abs(u).sum(axis=0), 1)
    assert np.allclose(np.abs(u).sum(axis=1), 1)
    assert np.allclose(np.abs(u) ** 2, np.abs(u))


def test_multiplier_identity_above_modulus():
    perm = modmul_permutation(ModMul(2, 15, 0), 4)
    assert perm[15] == 15  # y >= N is fixed
    assert perm[7] == 14


def test_multiplier_action_matches_modular_product():
    mm = ModMul(7, 15, 0)
    perm = modmul_permutation(mm, 4)
    for y in range(15):
        assert perm[y] == (7 * y) % 15


def test_self_inverse_classification():
    assert is_self_inverse(Gate(GateKind.H, (0,)))
    assert is_self_inverse(Gate(GateKind.CSWAP, (0, 1, 2)))
    assert not is_self_inverse(Gate(GateKind.T, (0,)))
    assert not is_self_inverse(Gate(GateKind.CP, (0, 1), phase=Fraction(-1, 2)))
    assert is_self_inverse(Gate(GateKind.CP, (0, 1), phase=Fraction(1, 1)))
    # multiplier 4 mod 15 squares to 1, multiplier 2 does not
    assert is_self_inverse(Gate(GateKind.CU, (0, 1, 2, 3, 4), modmul=ModMul(4, 15, 0)))
    assert not is_self_inverse(Gate(GateKind.CU, (0, 1, 2, 3, 4), modmul=ModMul(2, 15, 0)))


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (1, 1))
    with pytest.raises(ValueError):
        Gate(GateKind.H, (0, 1))
    with pytest.raises(ValueError):
        Gate(GateKind.CP, (0, 1))  # missing phase
    with pytest.raises(ValueError):
        ModMul(3, 15, 0)  # not co-prime
    with pytest.raises(ValueError):
        Gate(GateKind.CU, (0, 1, 2), modmul=ModMul(2, 15, 0))  # register too small


def test_swap_not_two_photon_interaction():
    from shorsim.noise import is_interaction

    assert GateKind.SWAP in ENTANGLING_KINDS
    assert not is_interaction(Gate(GateKind.SWAP, (0, 1)))
    assert is_interaction(Gate(GateKind.CNOT, (0, 1)))
