import numpy as np
import pytest

from shorsim import (DensityMatrix, PureState, concurrence, fidelity, ghz_frame_target,
                     ghz_state, ghz_witness, linear_entropy, tangle)
from shorsim.errors import PreconditionError

RNG = np.random.default_rng(1234)


def random_density(d, rng=RNG):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_pure(d, rng=RNG):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return PureState(v / np.linalg.norm(v))


def bell():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 2**-0.5
    return PureState(v)


class TestFidelity:
    def test_pure_with_itself(self):
        psi = random_pure(8)
        assert fidelity(psi.density(), psi) == pytest.approx(1.0)

    def test_orthogonal_pure_states(self):
        a = PureState(np.array([1, 0], dtype=complex))
        b = PureState(np.array([0, 1], dtype=complex))
        assert fidelity(a.density(), b) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_vs_bell(self):
        assert fidelity(DensityMatrix(np.eye(4) / 4), bell()) == pytest.approx(0.25)

    def test_mixed_self_fidelity_is_one(self):
        for _ in range(100):
            rho = random_density(4)
            assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-8)

    def test_mixed_route_consistent_with_pure_route(self):
        rho = random_density(4)
        psi = bell()
        assert fidelity(rho, psi) == pytest.approx(fidelity(rho, psi.density()), abs=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(PreconditionError):
            fidelity(random_density(4), random_pure(8))


class TestLinearEntropy:
    def test_pure_state_zero(self):
        assert linear_entropy(random_pure(8).density()) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 4, 8])
    def test_maximally_mixed_one(self, d):
        assert linear_entropy(DensityMatrix(np.eye(d) / d)) == pytest.approx(1.0)

    def test_equal_mixture_of_two_orthogonal_states(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = rho[1, 1] = 0.5
        assert linear_entropy(DensityMatrix(rho)) == pytest.approx(2 / 3)

    def test_bounds_on_random_states(self):
        for _ in range(50):
            s = linear_entropy(random_density(4))
            assert -1e-12 <= s <= 1 + 1e-12


class TestTangle:
    def test_bell_state(self):
        assert tangle(bell().density()) == pytest.approx(1.0)

    def test_product_pure_state(self):
        psi = np.kron(random_pure(2).amplitudes, random_pure(2).amplitudes)
        assert tangle(PureState(psi).density()) == pytest.approx(0.0, abs=1e-8)

    def test_werner_state_closed_form(self):
        # concurrence of p|Phi><Phi| + (1-p)I/4 is (3p-1)/2 for p > 1/3
        p = 0.8
        rho = p * bell().density().matrix + (1 - p) * np.eye(4) / 4
        c = concurrence(DensityMatrix(rho))
        assert c == pytest.approx((3 * p - 1) / 2)
        assert tangle(DensityMatrix(rho)) == pytest.approx(0.49)

    def test_separable_mixtures_have_zero_tangle(self):
        rng = np.random.default_rng(77)
        for _ in range(25):
            terms = rng.integers(2, 5)
            weights = rng.dirichlet(np.ones(terms))
            rho = np.zeros((4, 4), dtype=complex)
            for w in weights:
                psi = np.kron(random_pure(2, rng).amplitudes,
                              random_pure(2, rng).amplitudes)
                rho += w * np.outer(psi, psi.conj())
            assert tangle(DensityMatrix(rho)) < 1e-8

    def test_wrong_dimension(self):
        with pytest.raises(PreconditionError):
            tangle(random_density(8))


class TestGhzWitness:
    def test_ideal_frame_target(self):
        assert ghz_witness(ghz_frame_target().density()) == pytest.approx(-0.5)

    def test_canonical_ghz_in_canonical_frame(self):
        assert ghz_witness(ghz_state(3).density(),
                           target=ghz_state(3)) == pytest.approx(-0.5)

    def test_maximally_mixed(self):
        assert ghz_witness(DensityMatrix(np.eye(8) / 8)) == pytest.approx(3 / 8)

    def test_witness_is_half_minus_fidelity_exactly(self):
        for _ in range(20):
            rho = random_density(8)
            w = ghz_witness(rho)
            f = fidelity(rho, ghz_frame_target())
            assert w == 0.5 - f

    def test_frame_target_is_locally_rotated_ghz(self):
        # X on the last qubit maps the frozen target to the canonical GHZ
        x = np.array([[0, 1], [1, 0]])
        frame = np.kron(np.eye(4), x)
        rotated = frame @ ghz_frame_target().amplitudes
        np.testing.assert_allclose(rotated, ghz_state(3).amplitudes, atol=1e-12)

    def test_paper_style_arithmetic(self):
        # a state with GHZ fidelity 0.59 has witness -0.09 by construction
        rho = 0.59 * ghz_frame_target().density().matrix
        rho = rho + (1 - 0.59) * _orthogonal_complement_state()
        w = ghz_witness(DensityMatrix(rho))
        assert w == pytest.approx(-0.09)

    def test_wrong_dimension(self):
        with pytest.raises(PreconditionError):
            ghz_witness(random_density(4))


def _orthogonal_complement_state():
    target = ghz_frame_target().amplitudes
    proj = np.eye(8) - np.outer(target, target.conj())
    return proj / np.trace(proj).real
