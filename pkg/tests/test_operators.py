import itertools
import math

import numpy as np
import pytest

from refprob.exceptions import DimensionError, InputError, ValidationError
from refprob.operators import (
    cycle_trace_product,
    devectorize,
    eigvalsh,
    haar_moment,
    hermitian_eig,
    is_psd,
    jordan_product,
    kron_all,
    permutation_operator,
    random_hermitian,
    random_state,
    random_unitary,
    trace_inner_product,
    vectorize,
)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


def proj(v):
    return np.outer(v, v.conj())


class TestTraceInnerProduct:
    def test_identity(self):
        assert trace_inner_product(np.eye(2), np.eye(2)) == 2

    def test_orthogonal(self):
        assert trace_inner_product(proj(KET0), proj(KET1)) == 0

    def test_overlap(self):
        # <0|+><+|0> = 1/2
        assert trace_inner_product(proj(KET0), proj(PLUS)) == pytest.approx(0.5, abs=1e-15)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            trace_inner_product(np.eye(2), np.eye(3))


class TestVectorize:
    def test_identity(self):
        assert np.array_equal(vectorize(np.eye(2)), [1, 0, 0, 1])

    def test_position_rule(self):
        A = np.zeros((2, 2))
        A[0, 1] = 1  # entry (j=0, i=1) -> index i*d + j = 2
        assert np.array_equal(vectorize(A), [0, 0, 1, 0])

    def test_matches_defining_formula(self):
        # |A) = (I (x) A) sum_i |i,i>
        A = random_hermitian(3, 0)
        omega = sum(np.kron(np.eye(3)[i], np.eye(3)[i]) for i in range(3))
        assert np.allclose(vectorize(A), np.kron(np.eye(3), A) @ omega)

    def test_round_trip_exact(self):
        A = random_hermitian(4, 1)
        assert np.array_equal(devectorize(vectorize(A)), A)

    def test_dot_product_oracle(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(100):
            E, S = random_hermitian(3, rng), random_state(3, 2, rng)
            worst = max(worst, abs(np.vdot(vectorize(E), vectorize(S)) - np.trace(E @ S)))
        assert worst < 1e-12

    def test_non_square(self):
        with pytest.raises(DimensionError):
            vectorize(np.ones((2, 3)))
        with pytest.raises(DimensionError):
            devectorize(np.ones(5))


class TestPermutationOperator:
    def test_identity(self):
        assert np.array_equal(permutation_operator((0, 1), 2), np.eye(4))

    def test_swap_on_projectors(self):
        T = permutation_operator((1, 0), 2)
        X = proj(KET0)
        assert np.trace(T @ np.kron(X, X)).real == pytest.approx(1.0)

    def test_is_permutation_matrix(self):
        T = permutation_operator((2, 0, 1), 3)
        assert set(np.unique(T)) <= {0, 1}
        assert np.all(T.sum(axis=0) == 1) and np.all(T.sum(axis=1) == 1)

    def test_three_cycle(self):
        X, Y, Z = (random_hermitian(2, s) for s in range(3))
        T = permutation_operator((1, 2, 0), 2)
        assert abs(np.trace(T @ kron_all([X, Y, Z])) - np.trace(X @ Y @ Z)) < 1e-12

    @pytest.mark.parametrize("t", [2, 3, 4])
    def test_all_permutations_match_cycle_oracle(self, t):
        d = 2 if t == 4 else 3
        rng = np.random.default_rng(t)
        mats = [random_hermitian(d, rng) for _ in range(t)]
        big = kron_all(mats)
        for perm in itertools.permutations(range(t)):
            lhs = np.trace(permutation_operator(perm, d) @ big)
            assert abs(lhs - cycle_trace_product(perm, mats)) < 1e-12

    @pytest.mark.parametrize("perm", [(0, 0), (1, 2), ()])
    def test_rejects_non_bijection(self, perm):
        with pytest.raises(InputError):
            permutation_operator(perm, 2)


class TestHaarMoment:
    def test_t1(self):
        assert np.allclose(haar_moment(2, 1), np.eye(2) / 2)

    def test_t2_swap_form(self):
        S = permutation_operator((1, 0), 2)
        assert np.abs(haar_moment(2, 2) - (np.eye(4) + S) / 6).max() < 1e-15

    def test_t3_direct(self):
        acc = sum(permutation_operator(p, 2) for p in itertools.permutations(range(3)))
        M = haar_moment(2, 3)
        assert np.abs(M - acc / 6 / 4).max() < 1e-15
        assert np.trace(M).real == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("d,t", [(2, 1), (2, 2), (2, 3), (3, 2), (4, 3)])
    def test_psd_unit_trace_invariant(self, d, t):
        M = haar_moment(d, t)
        assert abs(np.trace(M) - 1) < 1e-12
        assert np.linalg.eigvalsh(M)[0] > -1e-12
        # projector onto the symmetric subspace, rescaled
        assert np.abs(M @ M * math.comb(d + t - 1, t) - M).max() < 1e-12
        rng = np.random.default_rng(d * 10 + t)
        for _ in range(20):
            U = kron_all([random_unitary(d, rng)] * t)
            assert np.abs(U @ M - M @ U).max() < 1e-10


class TestEigen:
    def test_diagonal(self):
        w, _ = hermitian_eig(np.diag([1.0, 3.0]))
        assert np.allclose(w, [3, 1])

    def test_projector(self):
        assert np.allclose(eigvalsh(proj(PLUS)), [1, 0], atol=1e-15)

    def test_reconstruction(self):
        A = random_hermitian(6, 11)
        w, V = hermitian_eig(A)
        assert np.all(np.diff(w) <= 0)
        assert np.abs(V @ np.diag(w) @ V.conj().T - A).max() < 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            hermitian_eig(np.array([[0, 1], [0, 0]]))

    def test_density_spectrum(self):
        rng = np.random.default_rng(3)
        for rank in (1, 2, 3, 4):
            w = eigvalsh(random_state(4, rank, rng))
            assert w.min() >= -1e-12 and w.max() <= 1 + 1e-12
            assert abs(w.sum() - 1) < 1e-12


class TestPsd:
    def test_identity(self):
        assert is_psd(np.eye(2), 0)

    def test_negative(self):
        assert not is_psd(np.diag([1, -0.5]), 1e-9)

    def test_outer_product(self):
        psi = np.random.default_rng(0).standard_normal(3) + 0j
        assert is_psd(np.outer(psi, psi), 1e-10)


class TestRandomState:
    def test_maximally_mixed(self):
        assert np.allclose(random_state(3, 3, seed=1, equal_weights=True), np.eye(3) / 3)

    def test_pure_purity(self):
        rho = random_state(4, 1, seed=2)
        assert abs(np.trace(rho @ rho) - 1) < 1e-12

    def test_deterministic(self):
        assert np.array_equal(random_state(3, 2, seed=9), random_state(3, 2, seed=9))

    @pytest.mark.parametrize("rank", [0, 4])
    def test_rank_range(self, rank):
        with pytest.raises(InputError):
            random_state(3, rank, seed=0)

    def test_rank(self):
        assert np.linalg.matrix_rank(random_state(4, 2, seed=3), tol=1e-10) == 2


def test_jordan_product_basic():
    A, B = random_hermitian(3, 0), random_hermitian(3, 1)
    assert np.abs(jordan_product(A, B) - jordan_product(B, A)).max() < 1e-15
    assert np.allclose(jordan_product(np.eye(3), B), B)
    with pytest.raises(DimensionError):
        jordan_product(np.eye(2), np.eye(3))
