import numpy as np
import pytest

from refprob.designs import WeightedEnsemble, mub_qubit, sic_qubit
from refprob.exceptions import DimensionError, UnsupportedConfiguration, ValidationError
from refprob.operators import is_psd, random_hermitian, random_state
from refprob.refdevice import (
    CLOSED_FORM,
    PSEUDOINVERSE,
    born_matrix,
    born_rule,
    col_P_residual,
    device_from_design,
    in_col_P,
    operator_of_probs,
    probs_of_state,
    project_col_P,
    with_phi,
)

RHO0 = np.diag([1.0, 0.0]).astype(complex)


class TestConstruction:
    def test_mub_P(self, mub_device):
        P = mub_device.P
        # P_ij = (1/3)|<psi_i|psi_j>|^2
        gram = np.abs(mub_qubit().states.conj() @ mub_qubit().states.T) ** 2
        assert np.abs(P - gram / 3).max() < 1e-15
        assert np.allclose(np.diag(P), 1 / 3)
        assert P[0, 1] == pytest.approx(0) and P[2, 3] == pytest.approx(0)
        assert P[0, 2] == pytest.approx(1 / 6)

    def test_effects_sum(self, mub_device):
        assert np.abs(mub_device.effects.sum(axis=0) - np.eye(2)).max() < 1e-12

    def test_stab_traces(self, stab_device):
        traces = np.einsum("iaa->i", stab_device.effects).real
        assert np.abs(traces - 4 / 60).max() < 1e-12

    @pytest.mark.parametrize("name", ["mub_device", "stab_device", "sic_device"])
    def test_invariants(self, name, request):
        dev = request.getfixturevalue(name)
        r = dev.check_invariants()
        assert r["p_phi_p"] < 1e-9 and r["s_phi_e"] < 1e-9

    def test_biased_rejected(self):
        ens = WeightedEnsemble(2, mub_qubit().states, [0.25, 0.15, 0.15, 0.15, 0.15, 0.15])
        with pytest.raises(UnsupportedConfiguration):
            device_from_design(ens)

    def test_auto_policy(self, mub_device):
        assert mub_device.phi_method == CLOSED_FORM

    def test_closed_form_needs_two_design(self):
        states = np.array([[1, 0], [0, 1]], dtype=complex)
        ens = WeightedEnsemble.uniform(states)
        assert device_from_design(ens).phi_method == PSEUDOINVERSE
        with pytest.raises(UnsupportedConfiguration):
            device_from_design(ens, CLOSED_FORM)


class TestBornMatrix:
    def test_closed_form_value(self, mub_device):
        assert np.abs(born_matrix(mub_device, CLOSED_FORM) - (3 * np.eye(6) - np.ones((6, 6)) / 3)).max() < 1e-15

    @pytest.mark.parametrize("method", [CLOSED_FORM, PSEUDOINVERSE])
    def test_one_inverse(self, mub_device, method):
        P = mub_device.P
        phi = born_matrix(mub_device, method)
        assert np.abs(P @ phi @ P - P).max() < 1e-10

    def test_sic_pseudoinverse_is_inverse(self, sic_device):
        phi = born_matrix(sic_device, PSEUDOINVERSE)
        assert np.abs(phi - np.linalg.inv(sic_device.P)).max() < 1e-9

    def test_sic_closed_form_is_inverse(self, sic_device):
        assert np.abs(born_matrix(sic_device, CLOSED_FORM) @ sic_device.P - np.eye(4)).max() < 1e-12

    def test_unknown_method(self, mub_device):
        with pytest.raises(ValueError):
            born_matrix(mub_device, "magic")

    def test_phi_independence(self, design3_device):
        pinv = with_phi(design3_device, PSEUDOINVERSE)
        rng = np.random.default_rng(1)
        for _ in range(20):
            p = probs_of_state(design3_device, random_state(design3_device.d, None, rng))
            assert np.abs(operator_of_probs(design3_device, p) - operator_of_probs(pinv, p)).max() < 1e-9

    def test_s_phi_e(self, design3_device):
        dev = design3_device
        assert np.abs(dev.S @ dev.phi @ dev.E - np.eye(dev.d**2)).max() < 1e-10


class TestEncoding:
    def test_maximally_mixed(self, mub_device):
        assert np.allclose(probs_of_state(mub_device, np.eye(2) / 2), 1 / 6)

    def test_ket0(self, mub_device):
        p = probs_of_state(mub_device, RHO0)
        assert np.allclose(p, [1 / 3, 0, 1 / 6, 1 / 6, 1 / 6, 1 / 6], atol=1e-15)

    def test_trace_checked(self, mub_device):
        with pytest.raises(ValidationError):
            probs_of_state(mub_device, np.eye(2))
        with pytest.raises(DimensionError):
            probs_of_state(mub_device, np.eye(3) / 3)

    def test_round_trip_sweep(self, design3_device):
        dev = design3_device
        rng = np.random.default_rng(5)
        for k in range(500):
            p = probs_of_state(dev, random_state(dev.d, 1 + k % dev.d, rng))
            assert abs(p.sum() - 1) < 1e-12 and p.min() > -1e-12
            again = probs_of_state(dev, operator_of_probs(dev, p))
            assert np.abs(again - p).max() < 1e-10

    def test_decode_uniform(self, mub_device):
        assert np.abs(operator_of_probs(mub_device, np.full(6, 1 / 6)) - np.eye(2) / 2).max() < 1e-10

    def test_decode_ket0(self, mub_device):
        p = probs_of_state(mub_device, RHO0)
        assert np.abs(operator_of_probs(mub_device, p) - RHO0).max() < 1e-10

    def test_deterministic_vector_nonquantum(self, mub_device):
        # phi e_1 = 3 e_1 - 1/3: rho = 3|0><0| - (1/3)(3 I) = diag(2, -1)
        rho = operator_of_probs(mub_device, np.eye(6)[0])
        assert np.allclose(rho, np.diag([2.0, -1.0]), atol=1e-14)
        assert not is_psd(rho, 1e-9)

    def test_decode_length(self, mub_device):
        with pytest.raises(DimensionError):
            operator_of_probs(mub_device, np.ones(4) / 4)


class TestBornRule:
    def test_reference_measurement(self, design3_device):
        dev = design3_device
        p = probs_of_state(dev, random_state(dev.d, 2, seed=3))
        assert np.abs(born_rule(dev, dev.effects, p) - p).max() < 1e-10

    def test_trivial_measurement(self, mub_device):
        p = probs_of_state(mub_device, random_state(2, 2, seed=1))
        assert np.allclose(born_rule(mub_device, [np.eye(2)], p), [1.0])

    def test_z_measurement_on_plus(self, mub_device):
        plus = np.full((2, 2), 0.5, dtype=complex)
        p = probs_of_state(mub_device, plus)
        q = born_rule(mub_device, [np.diag([1, 0]), np.diag([0, 1])], p)
        assert np.abs(q - 0.5).max() < 1e-10

    def test_random_povm_matches_trace(self, stab_device):
        rng = np.random.default_rng(8)
        rho = random_state(4, 3, rng)
        # random 3-outcome POVM from a random unitary's columns grouped
        U = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))[0]
        A = [np.outer(U[:, 0], U[:, 0].conj()), np.outer(U[:, 1], U[:, 1].conj()),
             np.outer(U[:, 2], U[:, 2].conj()) + np.outer(U[:, 3], U[:, 3].conj())]
        q = born_rule(stab_device, A, probs_of_state(stab_device, rho))
        assert np.abs(q - [np.trace(a @ rho).real for a in A]).max() < 1e-10

    def test_both_phis_agree(self, mub_device):
        pinv = with_phi(mub_device, PSEUDOINVERSE)
        rng = np.random.default_rng(2)
        A = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
        for _ in range(100):
            p = probs_of_state(mub_device, random_state(2, None, rng))
            assert np.abs(born_rule(mub_device, A, p) - born_rule(pinv, A, p)).max() < 1e-9

    def test_rejects_non_povm(self, mub_device):
        p = np.full(6, 1 / 6)
        with pytest.raises(ValidationError):
            born_rule(mub_device, [np.diag([1.0, 0.0])], p)
        with pytest.raises(ValidationError):
            born_rule(mub_device, [np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])], p)


class TestColumnSpace:
    def test_states_in_col(self, design3_device):
        dev = design3_device
        rng = np.random.default_rng(4)
        for _ in range(50):
            assert in_col_P(dev, probs_of_state(dev, random_state(dev.d, None, rng)), 1e-10)

    def test_uniform_fixed_point(self, mub_device):
        u = np.full(6, 1 / 6)
        assert np.abs(project_col_P(mub_device, u) - u).max() < 1e-15

    def test_deterministic_vector_outside(self, mub_device):
        # P phi e_1 = (2/3, -1/3, 1/6, 1/6, 1/6, 1/6): residual 1/3
        e1 = np.eye(6)[0]
        assert col_P_residual(mub_device, e1) == pytest.approx(1 / 3, abs=1e-14)
        assert not in_col_P(mub_device, e1, 1e-6)

    def test_projector_idempotent(self, design3_device):
        Q = design3_device.projector
        assert np.abs(Q @ Q - Q).max() < 1e-12

    def test_hermitian_operators_in_col(self, stab_device):
        from refprob.refdevice import probs_of_operator
        x = probs_of_operator(stab_device, random_hermitian(4, 0))
        assert in_col_P(stab_device, x, 1e-10)
