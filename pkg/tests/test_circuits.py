import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predictability import circuits as Q
from predictability.channels import apply, dephasing_channel
from predictability.errors import (
    BadParameter,
    DimensionMismatch,
    EmptyHistogram,
    IdentityViolation,
    NotUnitary,
    TooLarge,
)
from predictability.states import (
    b2_basis,
    computational_basis,
    haar_random_unitary,
    haar_random_vector,
)

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)
seeds = st.integers(0, 2**32 - 1)


class TestUGate:
    def test_examples(self):
        assert np.allclose(Q.u_gate_matrix(0, 0, 0), np.eye(2))
        assert np.allclose(Q.u_gate_matrix(math.pi, 0, math.pi), [[0, 1], [1, 0]], atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(t=angles, p=angles, lam=angles)
    def test_unitary_and_dagger(self, t, p, lam):
        m = Q.u_gate_matrix(t, p, lam)
        assert np.allclose(m.conj().T @ m, np.eye(2), atol=1e-12)
        prod = Q.u_gate_matrix(*Q.u_dagger_params(t, p, lam)) @ m
        assert abs(abs(prod[0, 0]) - 1) < 1e-10
        assert np.allclose(prod, prod[0, 0] * np.eye(2), atol=1e-10)

    def test_dagger_examples(self):
        prod = Q.u_gate_matrix(*Q.u_dagger_params(0, 0, 0))
        assert np.allclose(prod, prod[0, 0] * np.eye(2))
        dag = Q.u_gate_matrix(*Q.u_dagger_params(math.pi / 2, 0, 0))
        want = Q.u_gate_matrix(math.pi / 2, 0, 0).conj().T
        phase = dag[0, 0] / want[0, 0]
        assert abs(abs(phase) - 1) < 1e-12 and np.allclose(dag, phase * want, atol=1e-12)

    def test_fallback_on_identity_failure(self, monkeypatch, caplog):
        def broken(*args, **kwargs):
            raise IdentityViolation("forced")

        monkeypatch.setattr(Q, "u_dagger_params", broken)
        with caplog.at_level(logging.WARNING, logger="predictability.circuits"):
            c = Q.build_nrvnm_circuit_1q(0.8, 0.3)
        assert c.gates[0].kind == "unitary"
        assert "conjugate transpose" in caplog.text
        assert Q.circuit_as_channel(c, Q.nrvnm_basis_1q(0.8, 0.3)).max_deviation < 1e-10


class TestGatesAndCircuits:
    def test_gate_validation(self):
        with pytest.raises(BadParameter):
            Q.Gate("u", (0,), params=(1.0,))
        with pytest.raises(BadParameter):
            Q.cx(1, 1)
        with pytest.raises(BadParameter):
            Q.Gate("swap", (0, 1))
        with pytest.raises(DimensionMismatch):
            Q.Gate("unitary", (0,), matrix=np.eye(4))
        with pytest.raises(BadParameter):
            Q.Circuit(1, 1, [Q.cx(0, 2)])

    def test_nq_builder_errors(self):
        with pytest.raises(NotUnitary):
            Q.build_nrvnm_circuit_nq(np.ones((4, 4)))
        with pytest.raises(DimensionMismatch):
            Q.build_nrvnm_circuit_nq(np.eye(3))
        with pytest.raises(TooLarge):
            Q.build_nrvnm_circuit_nq(np.eye(2**6))

    def test_layout(self):
        c = Q.build_nrvnm_circuit_nq(np.eye(4))
        assert c.num_system_qubits == c.num_ancilla_qubits == 2
        cnots = [(g.control, g.targets[0]) for g in c.gates if g.kind == "cx"]
        assert cnots == [(0, 2), (1, 3)]


class TestSimulation:
    def test_plain_cnot_dilation(self):
        c = Q.build_nrvnm_circuit_1q(0.0, 0.0)
        plus = np.array([1, 1]) / math.sqrt(2)
        out = Q.simulate_statevector(c, plus)
        # full index s + 2*a: the Bell pair |00> + |11>
        assert np.allclose(np.abs(out), [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)], atol=1e-12)

    def test_norm_and_input_checks(self):
        c = Q.build_nrvnm_circuit_nq(haar_random_unitary(4, 1))
        psi = haar_random_vector(16, 2)
        assert np.linalg.norm(Q.simulate_statevector(c, psi)) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(DimensionMismatch):
            Q.simulate_statevector(c, np.ones(8) / math.sqrt(8))

    def test_unitary(self):
        c = Q.build_nrvnm_circuit_1q(1.1, 0.4)
        u = Q.circuit_unitary(c)
        assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)

    @pytest.mark.parametrize("theta,phi", [(math.pi / 2, 0.0), (math.pi / 2, math.pi / 2), (0.0, 0.0)])
    def test_named_qubit_bases(self, theta, phi):
        c = Q.build_nrvnm_circuit_1q(theta, phi)
        assert Q.circuit_as_channel(c, Q.nrvnm_basis_1q(theta, phi)).max_deviation < 1e-10

    @settings(max_examples=20, deadline=None)
    @given(t=angles, p=angles, seed=seeds)
    def test_1q_channel(self, t, p, seed):
        c = Q.build_nrvnm_circuit_1q(t, p)
        assert Q.circuit_as_channel(c, Q.nrvnm_basis_1q(t, p), 5, seed).max_deviation < 1e-10

    def test_2q_channel_b2(self):
        b2 = b2_basis()
        c = Q.build_nrvnm_circuit_nq(b2.vectors)
        assert Q.circuit_as_channel(c, b2).max_deviation < 1e-10

    def test_channel_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Q.circuit_as_channel(Q.build_nrvnm_circuit_1q(0, 0), computational_basis(4))

    def test_density_matches_statevector_without_noise(self):
        c = Q.build_nrvnm_circuit_nq(haar_random_unitary(4, 3))
        psi = haar_random_vector(4, 4)
        out = Q.simulate_statevector(c, psi)
        rho = Q.simulate_density(c, psi, Q.NoiseModel.off())
        assert np.allclose(rho, np.outer(out, out.conj()), atol=1e-12)

    def test_noisy_density_is_a_state(self):
        c = Q.build_nrvnm_circuit_nq(b2_basis().vectors)
        rho = Q.simulate_density(c, haar_random_vector(4, 5), Q.NoiseModel())
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(rho, rho.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(rho).min() > -1e-12

    def test_full_depolarizing_of_a_bare_cnot(self):
        c = Q.Circuit(1, 1, [Q.cx(0, 1)])
        rho = Q.simulate_density(c, np.array([1, 0, 0, 0]), Q.NoiseModel(0.5, 0.0))
        # rate 1/2 mixes |00><00| halfway toward I/4
        assert np.allclose(np.diag(rho).real, [0.5 + 0.125, 0.125, 0.125, 0.125], atol=1e-12)


class TestSampling:
    def test_noise_model_validation(self):
        with pytest.raises(BadParameter):
            Q.NoiseModel(0.7, 0.0)
        assert not Q.NoiseModel.off().enabled

    def test_deterministic_and_total(self):
        c = Q.build_nrvnm_circuit_1q(1.0, 0.2)
        psi = haar_random_vector(2, 1)
        a = Q.sample_measurement(c, psi, shots=1000, seed=3)
        b = Q.sample_measurement(c, psi, shots=1000, seed=3)
        assert np.array_equal(a, b) and a.sum() == 1000
        with pytest.raises(BadParameter):
            Q.sample_measurement(c, psi, shots=0)

    def test_zero_noise_equals_noiseless(self):
        c = Q.build_nrvnm_circuit_nq(b2_basis().vectors)
        psi = haar_random_vector(4, 2)
        a = Q.sample_measurement(c, psi, shots=4096, noise=None, seed=5)
        b = Q.sample_measurement(c, psi, shots=4096, noise=Q.NoiseModel(0.0, 0.0), seed=5)
        assert np.array_equal(a, b)

    def test_frequencies_follow_the_dephased_state(self):
        b2 = b2_basis()
        c = Q.build_nrvnm_circuit_nq(b2.vectors)
        psi = haar_random_vector(4, 7)
        counts = Q.sample_measurement(c, psi, shots=200_000, seed=1)
        want = np.real(np.diag(apply(dephasing_channel(b2), np.outer(psi, psi.conj()))))
        assert np.allclose(counts / 200_000, want, atol=5e-3)

    def test_readout_flips_move_mass(self):
        c = Q.Circuit(1, 1, [])
        counts = Q.sample_measurement(c, np.array([1, 0]), shots=100_000,
                                      noise=Q.NoiseModel(0.0, 0.1), seed=2)
        assert counts[1] / 100_000 == pytest.approx(0.1, abs=5e-3)

    def test_estimates(self):
        p, c = Q.estimate_measures_from_counts(np.array([10, 0]), np.array([5, 5]), 2)
        assert p == pytest.approx(1.0) and c == pytest.approx(1.0)
        with pytest.raises(EmptyHistogram):
            Q.estimate_measures_from_counts(np.array([0, 0]), np.array([1, 1]), 2)

    def test_bootstrap_scale(self):
        rng = np.random.default_rng(0)
        cx_ = rng.multinomial(8192, [0.7, 0.3])
        cy_ = rng.multinomial(8192, [0.5, 0.5])
        sp, sc = Q.bootstrap_sigma(cx_, cy_, 2, seed=1)
        # delta-method standard error of log2 d - H(p) at p = 0.7
        se = math.sqrt(0.7 * 0.3 / 8192) * abs(math.log2(0.7 / 0.3))
        assert 0.7 * se < sp < 1.3 * se
        assert sc > 0


class TestTextFormat:
    def test_round_trip_1q(self):
        c = Q.build_nrvnm_circuit_1q(1.25, -0.5)
        text = Q.circuit_to_text(c)
        assert text.splitlines()[1].startswith("u 0 ")
        back = Q.circuit_from_text(text)
        assert np.allclose(Q.circuit_unitary(back), Q.circuit_unitary(c), atol=1e-11)

    def test_round_trip_nq_exact(self):
        c = Q.build_nrvnm_circuit_nq(haar_random_unitary(4, 9))
        back = Q.circuit_from_text(Q.circuit_to_text(c))
        assert np.array_equal(Q.circuit_unitary(back), Q.circuit_unitary(c))

    def test_without_header(self):
        c = Q.circuit_from_text("u 0 1 0 0\ncx 0 1\n")
        assert (c.num_system_qubits, c.num_ancilla_qubits) == (1, 1)

    def test_bad_lines(self):
        with pytest.raises(BadParameter):
            Q.circuit_from_text("measure 0\n")
        with pytest.raises(BadParameter):
            Q.circuit_from_text("unitary 0 1,0 0,0\n")

    def test_unparseable_numbers(self):
        with pytest.raises(BadParameter):
            Q.circuit_from_text("u 0 a b c\n")
        with pytest.raises(BadParameter):
            Q.circuit_from_text("unitary 0 1,0,0 0 0 1\n")
