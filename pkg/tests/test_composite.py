import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predictability import composite as CP
from predictability.errors import DimensionMismatch, TooLarge
from predictability.measures import predictability_vn
from predictability.states import computational_basis, random_basis, random_density

K2 = computational_basis(2)
BELL = CP.maximally_entangled(2)
seeds = st.integers(0, 2**32 - 1)
pairs = st.tuples(st.integers(2, 4), st.integers(2, 4))


def zz():
    rho = np.zeros((4, 4))
    rho[0, 0] = 1
    return rho


def bip(da, db, seed):
    return CP.BipartiteState(random_density(da * db, seed), da, db)


class TestBipartiteState:
    def test_dimension_checks(self):
        with pytest.raises(DimensionMismatch):
            CP.BipartiteState(np.eye(4) / 4, 2, 3)
        with pytest.raises(DimensionMismatch):
            CP.joint_predictability(CP.BipartiteState(np.eye(6) / 6, 2, 3), K2, K2)

    def test_reductions(self):
        a, b = random_density(2, 1), random_density(3, 2)
        s = CP.BipartiteState(np.kron(a, b), 2, 3)
        assert np.allclose(s.rho_a, a) and np.allclose(s.rho_b, b)


class TestJoint:
    def test_examples(self):
        assert CP.joint_predictability(CP.BipartiteState(zz(), 2, 2), K2, K2) == pytest.approx(2.0)
        assert CP.joint_predictability(CP.BipartiteState(np.eye(6) / 6, 2, 3), K2,
                                       computational_basis(3)) == pytest.approx(0.0, abs=1e-12)
        assert CP.joint_predictability(CP.BipartiteState(BELL, 2, 2), K2, K2) == pytest.approx(1.0)

    def test_mutual_information(self):
        prod = CP.BipartiteState(np.kron(random_density(2, 3), random_density(2, 4)), 2, 2)
        assert CP.mutual_information_diag(prod, K2, K2) == pytest.approx(0.0, abs=1e-12)
        assert CP.mutual_information_diag(CP.BipartiteState(BELL, 2, 2), K2, K2) == pytest.approx(1.0)
        classical = np.diag([0.5, 0, 0, 0.5])
        assert CP.mutual_information_diag(CP.BipartiteState(classical, 2, 2), K2, K2) == pytest.approx(1.0)

    def test_decomposition_examples(self):
        prod = CP.BipartiteState(np.kron(random_density(2, 3), random_density(3, 4)), 2, 3)
        x, y = random_basis(2, 1), random_basis(3, 2)
        assert CP.check_joint_decomposition(prod, x, y) < 1e-10
        assert CP.mutual_information_diag(prod, x, y) < 1e-10
        bell = CP.BipartiteState(BELL, 2, 2)
        assert predictability_vn(bell.rho_a, K2) == pytest.approx(0.0, abs=1e-12)
        assert predictability_vn(bell.rho_b, K2) == pytest.approx(0.0, abs=1e-12)
        assert CP.check_joint_decomposition(bell, K2, K2) < 1e-12
        assert CP.check_joint_decomposition(bip(2, 3, 9), x, y) < 1e-10

    @settings(max_examples=40, deadline=None)
    @given(dims=pairs, seed=seeds)
    def test_decomposition_random(self, dims, seed):
        da, db = dims
        s = bip(da, db, seed)
        x, y = random_basis(da, seed + 1), random_basis(db, seed + 2)
        assert CP.check_joint_decomposition(s, x, y) < 1e-10
        assert CP.mutual_information_diag(s, x, y) >= -1e-10


class TestConditional:
    def test_examples(self):
        prod = CP.BipartiteState(np.kron(np.eye(2) / 2, random_density(2, 1)), 2, 2)
        assert CP.conditional_predictability(prod, K2, K2) == pytest.approx(0.0, abs=1e-12)
        bell = CP.BipartiteState(BELL, 2, 2)
        assert CP.conditional_predictability(bell, K2, K2) == pytest.approx(1.0)
        assert CP.conditional_predictability(CP.BipartiteState(zz(), 2, 2), K2, K2) == pytest.approx(1.0)

    def test_conditional_cr_examples(self):
        bell = CP.BipartiteState(BELL, 2, 2)
        assert CP.conditional_entropy_diag(bell, K2, K2) == pytest.approx(0.0, abs=1e-12)
        assert CP.check_conditional_cr(bell, K2, K2) < 1e-12
        sigma = random_density(2, 5)
        prod = CP.BipartiteState(np.kron(np.eye(2) / 2, sigma), 2, 2)
        assert CP.conditional_entropy_diag(prod, K2, K2) == pytest.approx(1.0, abs=1e-12)
        assert CP.check_conditional_cr(prod, K2, K2) < 1e-12
        assert CP.check_conditional_cr(CP.BipartiteState(zz(), 2, 2), K2, K2) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(dims=pairs, seed=seeds)
    def test_random(self, dims, seed):
        da, db = dims
        s = bip(da, db, seed)
        x, y = random_basis(da, seed + 1), random_basis(db, seed + 2)
        cond = CP.conditional_predictability(s, x, y)
        assert cond == pytest.approx(CP.conditional_predictability_relative(s, x, y), abs=1e-10)
        assert cond >= predictability_vn(s.rho_a, x) - 1e-10
        assert CP.check_conditional_cr(s, x, y) < 1e-10


class TestAdditivity:
    def test_examples(self):
        d34 = np.diag([0.75, 0.25])
        assert CP.check_additivity(d34, K2, 1) == 0.0
        assert CP.check_additivity(d34, K2, 2) < 1e-12
        h = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
        assert 2 * (1 - h) == pytest.approx(0.3774437510817343, abs=1e-12)
        assert CP.check_additivity(np.eye(3) / 3, computational_basis(3), 3) < 1e-12

    def test_too_large(self):
        with pytest.raises(TooLarge):
            CP.check_additivity(np.eye(3) / 3, computational_basis(3), 4)

    @settings(max_examples=20, deadline=None)
    @given(d=st.integers(2, 4), n=st.integers(1, 3), seed=seeds)
    def test_random(self, d, n, seed):
        if d**n > 64:
            return
        assert CP.check_additivity(random_density(d, seed), random_basis(d, seed + 1), n) < 1e-10
