import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predictability import channels as C
from predictability.errors import BadParameter, DimensionMismatch, NotMutuallyUnbiased
from predictability.linalg import trace_distance, validate_density
from predictability.states import (
    ObservableBasis,
    computational_basis,
    fourier_mub_partner,
    random_basis,
    random_density,
)

K2 = computational_basis(2)
F2 = fourier_mub_partner(K2)
PLUS = np.full((2, 2), 0.5)
seeds = st.integers(0, 2**32 - 1)


def rotated(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return ObservableBasis(np.array([[c, -s], [s, c]], dtype=complex), "rot")


def project_oracle(rho, basis):
    out = np.zeros_like(rho, dtype=complex)
    for j in range(basis.dim):
        v = basis.vectors[:, j]
        out += np.vdot(v, rho @ v) * np.outer(v, v.conj())
    return out


class TestKrausChannel:
    def test_read_only_and_dims(self):
        ch = C.dephasing_channel(K2)
        assert ch.dim_in == ch.dim_out == 2
        with pytest.raises(ValueError):
            ch.kraus_operators[0][0, 0] = 3

    def test_rejects_empty_and_ragged(self):
        with pytest.raises(BadParameter):
            C.KrausChannel(())
        with pytest.raises(DimensionMismatch):
            C.KrausChannel((np.eye(2), np.eye(3)))

    def test_apply_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            C.apply(C.identity_channel(2), np.eye(3) / 3)

    def test_identity(self):
        rho = random_density(3, 1)
        assert np.allclose(C.identity_channel(3)(rho), rho)


class TestDephasing:
    def test_examples(self):
        assert np.allclose(C.apply(C.dephasing_channel(K2), PLUS), np.eye(2) / 2)
        d34 = np.diag([0.75, 0.25])
        assert np.allclose(C.apply(C.dephasing_channel(K2), d34), d34)
        assert np.allclose(C.apply(C.dephasing_channel(F2), np.diag([1.0, 0.0])), np.eye(2) / 2)

    @settings(max_examples=30, deadline=None)
    @given(d=st.integers(2, 5), seed=seeds)
    def test_matches_projection_oracle_and_idempotent(self, d, seed):
        x = random_basis(d, seed)
        rho = random_density(d, seed + 1)
        ch = C.dephasing_channel(x)
        once = C.apply(ch, rho)
        assert np.allclose(once, project_oracle(rho, x), atol=1e-12)
        assert np.allclose(C.apply(C.compose(ch, ch), rho), once, atol=1e-12)
        assert abs(np.trace(once) - 1) < 1e-12

    def test_double_dephasing(self):
        k3 = computational_basis(3)
        f3 = fourier_mub_partner(k3)
        rho = random_density(3, 2)
        assert np.allclose(C.apply(C.double_dephasing(k3, f3), rho), np.eye(3) / 3, atol=1e-12)
        assert np.allclose(C.apply(C.double_dephasing(k3, k3), rho),
                           C.apply(C.dephasing_channel(k3), rho), atol=1e-12)
        rot = rotated(math.pi / 6)
        zero = np.diag([1.0, 0.0])
        expect = project_oracle(project_oracle(zero, K2), rot)
        got = C.apply(C.double_dephasing(K2, rot), zero)
        assert np.allclose(got, expect, atol=1e-12)
        c2 = math.cos(math.pi / 12) ** 2
        assert np.allclose(rot.diagonal(got), [c2, 1 - c2], atol=1e-12)


class TestMonitoringMaps:
    def test_lambda_endpoints(self):
        rho = random_density(2, 7)
        assert np.allclose(C.apply(C.monitoring_lambda(K2, F2, 0.0), rho), rho, atol=1e-12)
        assert np.allclose(C.apply(C.monitoring_lambda(K2, F2, 1.0), rho), np.eye(2) / 2, atol=1e-12)

    def test_lambda_half_on_zero(self):
        got = C.apply(C.monitoring_lambda(K2, F2, 0.5), np.diag([1.0, 0.0]))
        assert np.allclose(got, np.diag([0.75, 0.25]), atol=1e-12)

    def test_lambda_errors(self):
        with pytest.raises(NotMutuallyUnbiased):
            C.monitoring_lambda(K2, rotated(0.4), 0.3)
        with pytest.raises(BadParameter):
            C.monitoring_lambda(K2, F2, 1.5)

    def test_theta(self):
        rho = random_density(2, 3)
        assert np.allclose(C.apply(C.monitoring_theta(K2, 0.0), rho), rho, atol=1e-12)
        assert np.allclose(C.apply(C.monitoring_theta(K2, 1.0), rho), np.diag(np.diag(rho)), atol=1e-12)
        got = C.apply(C.monitoring_theta(K2, 0.5), PLUS)
        assert np.allclose(got, [[0.5, 0.25], [0.25, 0.5]], atol=1e-12)
        with pytest.raises(BadParameter):
            C.monitoring_theta(K2, -0.1)

    def test_diagonal_unitary(self):
        rho = random_density(2, 5)
        assert np.allclose(C.apply(C.diagonal_unitary_channel(K2, [0, 0]), rho), rho)
        minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
        assert np.allclose(C.apply(C.diagonal_unitary_channel(K2, [0, math.pi]), PLUS), minus, atol=1e-12)
        with pytest.raises(BadParameter):
            C.diagonal_unitary_channel(K2, [0, 1, 2])

    @settings(max_examples=25, deadline=None)
    @given(d=st.integers(2, 5), seed=seeds)
    def test_diagonal_unitary_commutes_with_dephasing(self, d, seed):
        x = random_basis(d, seed)
        phases = np.random.default_rng(seed).uniform(0, 2 * math.pi, d)
        u, deph = C.diagonal_unitary_channel(x, phases), C.dephasing_channel(x)
        rho = random_density(d, seed + 2)
        assert np.allclose(C.apply(u, C.apply(deph, rho)), C.apply(deph, C.apply(u, rho)), atol=1e-12)
        assert np.allclose(x.diagonal(C.apply(u, rho)), x.diagonal(rho), atol=1e-12)


class TestValidity:
    def test_is_cptp_examples(self):
        assert C.is_cptp(C.dephasing_channel(K2))
        assert not C.is_cptp(C.KrausChannel((0.9 * np.eye(2),)))
        assert C.is_cptp(C.monitoring_lambda(K2, F2, 0.3))

    @settings(max_examples=25, deadline=None)
    @given(d=st.integers(2, 4), seed=seeds, eps=st.floats(0, 1))
    def test_every_map_is_cptp_and_contractive(self, d, seed, eps):
        x = random_basis(d, seed)
        y = fourier_mub_partner(x)
        rho, sigma = random_density(d, seed + 1), random_density(d, seed + 2)
        for ch in (C.monitoring_lambda(x, y, eps), C.monitoring_theta(x, eps), C.double_dephasing(x, y)):
            assert C.is_cptp(ch)
            out = validate_density(C.apply(ch, rho))
            assert trace_distance(out, C.apply(ch, sigma)) <= trace_distance(rho, sigma) + 1e-9

    def test_commuting_condition(self):
        k3 = computational_basis(3)
        for eps in (0.1, 0.5, 0.9):
            assert C.check_commuting_condition(k3, fourier_mub_partner(k3), eps) < 1e-10
        assert C.check_commuting_condition(K2, F2, 0.0) < 1e-14
        with pytest.raises(NotMutuallyUnbiased):
            C.check_commuting_condition(K2, rotated(0.3), 0.5)
