"""Reference devices: measure with effects ``E_i``, reprepare ``sigma_i``.

A device is built from an unbiased design ``{psi_i}`` as ``E_i = (d/n)
|psi_i><psi_i|`` and ``sigma_i = |psi_i><psi_i|``. It carries the
conditional-probability matrix ``P[i, j] = tr(E_i sigma_j)`` and a Born matrix
``phi`` satisfying ``P phi P = P``, which together translate between density
matrices and probability vectors.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .designs import WeightedEnsemble, is_t_design
from .exceptions import DimensionError, UnsupportedConfiguration, ValidationError
from .operators import check_hermitian, eigvalsh, haar_moment, is_psd

PSEUDOINVERSE = "pseudoinverse"
CLOSED_FORM = "two_design_closed_form"
PHI_METHODS = (PSEUDOINVERSE, CLOSED_FORM)

SVD_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class ReferenceDevice:
    d: int
    effects: np.ndarray
    states: np.ndarray
    P: np.ndarray
    phi: np.ndarray
    phi_method: str

    @property
    def n(self):
        return self.effects.shape[0]

    @cached_property
    def E(self):
        """Rows ``(E_i|``, so that ``E @ vectorize(rho)`` gives ``tr(E_i rho)``."""
        return np.stack([e.ravel(order="F").conj() for e in self.effects])

    @cached_property
    def S(self):
        """Columns ``|sigma_i)``."""
        return np.stack([s.ravel(order="F") for s in self.states], axis=1)

    @cached_property
    def design_order(self):
        """Largest ``t <= 3`` such that the reference states form a ``t``-design."""
        order = 0
        for t in (1, 2, 3):
            if states_moment_residual(self.states, t) > 1e-10:
                break
            order = t
        return order

    @cached_property
    def projector(self):
        """``P phi``, the projector onto col(P)."""
        return self.P @ self.phi

    def require_design(self, t, what):
        if self.design_order < t:
            raise UnsupportedConfiguration(
                f"{what} requires reference states forming a {t}-design "
                f"(device is a {self.design_order}-design)"
            )

    def invariant_residuals(self):
        eye = np.eye(self.d)
        traces = np.einsum("iaa->i", self.effects).real
        return {
            "effects_sum": float(np.max(np.abs(self.effects.sum(axis=0) - eye))),
            "effects_min_eigenvalue": float(
                min(eigvalsh(e)[-1] for e in self.effects)
            ),
            "states_proportional": float(
                np.max(np.abs(self.states - self.effects / traces[:, None, None]))
            ),
            "unbiased": float(np.max(np.abs(traces - self.d / self.n))),
            "p_phi_p": float(np.max(np.abs(self.P @ self.phi @ self.P - self.P))),
            "s_phi_e": float(
                np.max(np.abs(self.S @ self.phi @ self.E - np.eye(self.d**2)))
            ),
        }

    def check_invariants(self):
        """Raise ``ValidationError`` listing every violated device invariant."""
        r = self.invariant_residuals()
        limits = {
            "effects_sum": 1e-10,
            "states_proportional": 1e-12,
            "unbiased": 1e-12,
            "p_phi_p": 1e-9,
            "s_phi_e": 1e-9,
        }
        bad = [f"{k}={r[k]:.3g}" for k, lim in limits.items() if r[k] > lim]
        if r["effects_min_eigenvalue"] < -1e-12:
            bad.append(f"effects_min_eigenvalue={r['effects_min_eigenvalue']:.3g}")
        if bad:
            raise ValidationError("device invariants violated: " + ", ".join(bad))
        return r


def states_moment_residual(states, t):
    """Max-norm of ``(1/n) sum_i sigma_i^{(x) t}`` minus the Haar moment."""
    d = states.shape[1]
    acc = np.zeros((d**t, d**t), dtype=np.complex128)
    for s in states:
        term = s
        for _ in range(t - 1):
            term = np.kron(term, s)
        acc += term
    return float(np.max(np.abs(acc / len(states) - haar_moment(d, t))))


def conditional_probabilities(effects, states):
    return np.einsum("iab,jba->ij", effects, states).real


def _pseudoinverse(P):
    U, sv, Vh = np.linalg.svd(P)
    keep = sv > SVD_CUTOFF * sv[0]
    return (Vh[keep].conj().T / sv[keep]) @ U[:, keep].conj().T


def _closed_form(d, n):
    return (d + 1) * np.eye(n) - (d / n) * np.ones((n, n))


def born_matrix(device, method):
    """A 1-inverse of ``device.P``.

    ``pseudoinverse`` gives the Moore-Penrose inverse from the SVD, dropping
    singular values below ``1e-10 * s_max``. ``two_design_closed_form`` gives
    ``(d+1) I - (d/n) J`` and needs reference states forming a 2-design.
    """
    if method == PSEUDOINVERSE:
        return _pseudoinverse(device.P)
    if method == CLOSED_FORM:
        device.require_design(2, "closed-form Born matrix")
        return _closed_form(device.d, device.n)
    raise ValueError(f"unknown Born-matrix method {method!r}")


def device_from_design(ens: WeightedEnsemble, phi_method="auto"):
    """Build the reference device of an unbiased design ensemble.

    ``phi_method='auto'`` picks the closed form when the ensemble passes the
    2-design test at tolerance 1e-10, and the pseudoinverse otherwise.
    """
    if not ens.unbiased:
        raise UnsupportedConfiguration("reference devices require an unbiased ensemble")
    d, n = ens.d, ens.n
    states = ens.projectors()
    effects = (d / n) * states
    P = conditional_probabilities(effects, states)

    if phi_method == "auto":
        phi_method = CLOSED_FORM if is_t_design(ens, 2).passed else PSEUDOINVERSE
    if phi_method == CLOSED_FORM:
        if not is_t_design(ens, 2).passed:
            raise UnsupportedConfiguration("closed-form Born matrix requires a 2-design")
        phi = _closed_form(d, n)
    elif phi_method == PSEUDOINVERSE:
        phi = _pseudoinverse(P)
    else:
        raise ValueError(f"unknown Born-matrix method {phi_method!r}")
    return ReferenceDevice(d, effects, states, P, phi, phi_method)


def with_phi(device, method):
    """Copy of ``device`` using a different Born matrix."""
    return ReferenceDevice(
        device.d, device.effects, device.states, device.P, born_matrix(device, method), method
    )


def _check_probs(device, p):
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (device.n,):
        raise DimensionError(f"probability vector must have length {device.n}, got {p.shape}")
    return p


def probs_of_state(device, rho):
    """``p_i = tr(E_i rho)`` for a unit-trace Hermitian ``rho``."""
    rho = check_hermitian(rho, 1e-10, "rho")
    if rho.shape != (device.d, device.d):
        raise DimensionError(f"rho must be {device.d}x{device.d}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-10:
        raise ValidationError(f"rho must have unit trace, got {tr.real:.6g}")
    return np.einsum("iab,ba->i", device.effects, rho).real


def probs_of_operator(device, X):
    """``x_i = tr(E_i X)`` with no trace or positivity requirement."""
    X = check_hermitian(X, 1e-10, "X")
    return np.einsum("iab,ba->i", device.effects, X).real


def operator_of_probs(device, p):
    """``sum_ij phi_ij p_j sigma_i``; invalid ``p`` simply yields a non-PSD operator."""
    p = _check_probs(device, p)
    return np.einsum("i,iab->ab", device.phi @ p, device.states)


def born_rule(device, measurement, p):
    """Outcome probabilities ``q_i = sum_jk tr(A_i sigma_j) phi_jk p_k`` of POVM ``A``."""
    p = _check_probs(device, p)
    A = np.asarray(measurement, dtype=np.complex128)
    if A.ndim != 3 or A.shape[1:] != (device.d, device.d):
        raise DimensionError(f"measurement must be a stack of {device.d}x{device.d} matrices")
    for a in A:
        check_hermitian(a, 1e-10, "measurement operator")
        if not is_psd(a, 1e-12):
            raise ValidationError("measurement operators must be positive semidefinite")
    if np.max(np.abs(A.sum(axis=0) - np.eye(device.d))) > 1e-10:
        raise ValidationError("measurement operators must sum to the identity")
    Q = conditional_probabilities(A, device.states)
    return Q @ (device.phi @ p)


def project_col_P(device, p):
    return device.projector @ _check_probs(device, p)


def col_P_residual(device, p):
    p = _check_probs(device, p)
    return float(np.max(np.abs(p - device.projector @ p)))


def in_col_P(device, p, tol=1e-10):
    return col_P_residual(device, p) <= tol


def maximally_mixed_probs(device):
    return np.full(device.n, 1.0 / device.n)

