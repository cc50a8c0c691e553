"""Which probability vectors are quantum states, decided from the device alone.

Everything here works on a :class:`~refprob.refdevice.ReferenceDevice` and
plain probability vectors. The matrix-side counterparts (reconstructed
operators, their eigenvalues and traces) serve as an independent check in
the test-suite.
"""
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .exceptions import DimensionError, InputError, PreconditionError, UnsupportedConfiguration
from .kernels import jacobi_eigh, triple_from_p
from .operators import eigvalsh, jordan_product, random_pure_state, random_state
from .refdevice import (
    col_P_residual,
    maximally_mixed_probs,
    operator_of_probs,
    probs_of_operator,
    probs_of_state,
    project_col_P,
)

DEFAULT_TOL = 1e-9

DIRECT = "direct"
FROM_P = "from_P"
GENERAL = "general"
THREE_DESIGN = "three_design"
SIMPLIFIED = "simplified"


@dataclass(frozen=True, eq=False)
class TripleTensor:
    """``entries[i, j, k] = Re tr(E_i sigma_j sigma_k)``."""

    n: int
    entries: np.ndarray
    method: str


@dataclass(frozen=True)
class ValidityReport:
    normalized: bool
    norm_residual: float
    in_col_p: bool
    col_residual: float
    l_min_eigenvalue: float
    valid: bool
    purity: float
    trace_cube: float
    pure: bool
    scalar_residuals: Optional[tuple]
    vector_residual: Optional[float]
    tolerance: float

    def to_dict(self):
        out = asdict(self)
        if self.scalar_residuals is not None:
            out["scalar_residuals"] = list(self.scalar_residuals)
        return out


@dataclass(frozen=True, eq=False)
class ObservableAssignment:
    """Values ``x`` on reference outcomes, ``X = sum_i x_i E_i`` and, for ``x``
    in col(P), the operator ``X_tilde`` with ``x_i = tr(E_i X_tilde)``."""

    x: np.ndarray
    X: np.ndarray
    X_tilde: Optional[np.ndarray]

    @property
    def n(self):
        return self.x.shape[0]


def _vec(device, p, name="vector"):
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (device.n,):
        raise DimensionError(f"{name} must have length {device.n}, got {p.shape}")
    return p


# --- agreement and entropies -------------------------------------------------


def agreement_probability(device, probs):
    """Probability that independent copies of the device all report the same outcome."""
    probs = [_vec(device, p) for p in probs]
    if len(probs) < 2:
        raise InputError("agreement needs at least two probability vectors")
    return float(np.sum(np.prod(probs, axis=0)))


def agreement_bounds(d, n, t):
    """Lower/upper agreement bounds for ``t`` copies of an unbiased ``t``-design device."""
    r = d / n
    if t == 2:
        return r / (d + 1), r * 2 / (d + 1)
    if t == 3:
        denom = (d + 1) * (d + 2)
        return r**2 / denom, r**2 * 6 / denom
    raise UnsupportedConfiguration(f"agreement bounds are available for t in (2, 3), not {t}")


def renyi_entropy(p, t):
    """Order-``t`` Renyi entropy (natural log)."""
    if t == 1:
        raise UnsupportedConfiguration("the Shannon limit t = 1 is not provided")
    if t <= 0:
        raise InputError("Renyi order must be positive")
    p = np.asarray(p, dtype=np.float64)
    if np.any(p < -1e-12):
        raise InputError("probabilities must be nonnegative")
    p = np.clip(p, 0.0, None)
    return float(math.log(np.sum(p**t)) / (1 - t))


def pure_state_entropy(d, n, t):
    """Renyi entropy of any pure state on an unbiased ``t``-design device (the minimum)."""
    return renyi_entropy_of_sum(agreement_bounds(d, n, t)[1], t)


def renyi_entropy_of_sum(power_sum, t):
    return math.log(power_sum) / (1 - t)


# --- pure states -------------------------------------------------------------


def pure_scalar_residuals(device, p):
    """Defects of the 1-, 2- and 3-norm sphere conditions, evaluated on the
    projection of ``p`` into col(P)."""
    device.require_design(3, "scalar pure-state conditions")
    d, n = device.d, device.n
    x = project_col_P(device, _vec(device, p))
    _, upper2 = agreement_bounds(d, n, 2)
    _, upper3 = agreement_bounds(d, n, 3)
    return (
        float(np.sum(x) - 1.0),
        float(np.sum(x**2) - upper2),
        float(np.sum(x**3) - upper3),
    )


def trace_powers_from_probs(device, p):
    """``(tr rho^2, tr rho^3)`` of the operator represented by ``p``.

    The square uses ``(d+1)(n/d) sum x_i^2 - 1`` on ``x = P phi p``; the cube
    contracts the probability-only triple tensor with ``phi p`` three times.
    """
    device.require_design(3, "trace powers from probabilities")
    d, n = device.d, device.n
    p = _vec(device, p)
    x = project_col_P(device, p)
    tr2 = (d + 1) * (n / d) * float(np.sum(x**2)) - 1.0
    y = device.phi @ p
    R = triple_tensor(device, FROM_P).entries
    tr3 = (n / d) * float(np.einsum("abc,a,b,c->", R, y, y, y))
    return tr2, tr3


def pure_vector_residual(device, p):
    """``1/2 [1/2 (d+1)(d+2)(n/d) sum_m P_im p_m^2 - d/n] - p_i`` for every ``i``.

    Vanishes exactly on pure-state probability vectors of a 3-design device.
    """
    device.require_design(3, "the quadratic pure-state condition")
    d, n = device.d, device.n
    p = _vec(device, p)
    coeff = 0.5 * (d + 1) * (d + 2) * (n / d)
    return 0.5 * (coeff * (device.P @ p**2) - d / n) - p


# --- triple tensor and moment joints ----------------------------------------


def triple_tensor_direct(device):
    T = np.einsum("iab,jbc,kca->ijk", device.effects, device.states, device.states, optimize=True)
    return T.real.copy()


def triple_tensor_from_P(P, d):
    """Probability-only formula for ``Re tr(E_i sigma_j sigma_k)``; exact on
    unbiased 3-design devices, no check performed here."""
    return triple_from_p(np.asarray(P, dtype=np.float64), float(d))


_TRIPLE_CACHE = "_triple_cache"


def triple_tensor(device, method=DIRECT):
    """Jordan structure coefficients ``Re tr(E_i sigma_j sigma_k)``.

    ``direct`` reads them off the matrices; ``from_P`` uses only the
    conditional-probability matrix and needs a 3-design device.
    """
    cache = device.__dict__.setdefault(_TRIPLE_CACHE, {})
    if method not in cache:
        if method == DIRECT:
            entries = triple_tensor_direct(device)
        elif method == FROM_P:
            device.require_design(3, "the probability-only triple tensor")
            entries = triple_tensor_from_P(device.P, device.d)
        else:
            raise ValueError(f"unknown triple-tensor method {method!r}")
        entries.setflags(write=False)
        cache[method] = TripleTensor(device.n, entries, method)
    return cache[method]


def moment_joint_probs(device, t):
    """Joint outcome distribution of ``t`` device copies on the Haar moment state."""
    d, n = device.d, device.n
    P = device.P
    if t == 1:
        return np.full(n, 1.0 / n)
    if t == 2:
        return (d / n + P) / ((d + 1) * n)
    if t == 3:
        R = triple_tensor(device, DIRECT).entries
        bracket = (
            d / n
            + P[np.newaxis, :, :]
            + P[:, :, np.newaxis]
            + P[:, np.newaxis, :]
            + 2 * R
        )
        return bracket * d / ((d + 1) * (d + 2) * n**2)
    raise UnsupportedConfiguration(f"moment joint probabilities are provided for t <= 3, not {t}")


def moment_joint_from_design(device, t):
    """``(1/n) sum_m P_im P_jm ...``, valid when the states form a ``t``-design."""
    P = device.P
    if t == 1:
        return P.mean(axis=1)
    if t == 2:
        return np.einsum("im,jm->ij", P, P) / device.n
    if t == 3:
        return np.einsum("im,jm,km->ijk", P, P, P, optimize=True) / device.n
    raise UnsupportedConfiguration(f"t must be 1, 2 or 3, not {t}")


# --- Jordan multiplication and validity ---------------------------------------


def jordan_L(device, p, method=GENERAL):
    """Matrix of Jordan multiplication by the state of ``p``, sandwiched as
    ``tr(E_i (rho o sigma_j))``.

    ``general`` contracts the directly computed triple tensor with ``phi p``;
    ``three_design`` uses only ``P`` and ``p``.
    """
    p = _vec(device, p)
    if method == GENERAL:
        R = triple_tensor(device, DIRECT).entries
        return np.einsum("ijk,k->ij", R, device.phi @ p)
    if method == THREE_DESIGN:
        device.require_design(3, "the probability-only L matrix")
        d, n = device.d, device.n
        P = device.P
        coeff = (d + 1) * (d + 2) * (n / d)
        cubic = np.einsum("mi,mj,m->ij", P, P, p)
        return 0.5 * (coeff * cubic - P - p[:, None] - p[None, :] - d / n)
    raise ValueError(f"unknown L method {method!r}")


def _sym_eig(M):
    M = 0.5 * (M + M.T)
    w, V = jacobi_eigh(M)
    order = np.argsort(w)
    return w[order], V[:, order].real


def validity_check(device, p, tol=DEFAULT_TOL):
    """Certify ``p`` as a quantum state using reference-device probabilities only."""
    if tol <= 0:
        raise InputError("tol must be positive")
    p = _vec(device, p)
    norm_residual = float(abs(np.sum(p) - 1.0))
    col_residual = col_P_residual(device, p)
    three = device.design_order >= 3
    L = jordan_L(device, p, THREE_DESIGN if three else GENERAL)
    l_min = float(_sym_eig(L)[0][0])
    normalized = norm_residual <= tol
    in_col = col_residual <= tol
    valid = normalized and in_col and l_min >= -tol

    if three:
        purity, trace_cube = trace_powers_from_probs(device, p)
        scalars = pure_scalar_residuals(device, p)
        vector = float(np.max(np.abs(pure_vector_residual(device, p))))
        pure = (
            valid
            and bool(np.all(p >= -tol))
            and all(abs(r) <= tol for r in scalars)
        )
    else:
        y = device.phi @ p
        d, n = device.d, device.n
        purity = (n / d) * float(y @ device.P @ y)
        R = triple_tensor(device, DIRECT).entries
        trace_cube = (n / d) * float(np.einsum("abc,a,b,c->", R, y, y, y))
        scalars, vector = None, None
        pure = valid and abs(purity - 1) <= tol and abs(trace_cube - 1) <= tol

    return ValidityReport(
        normalized=normalized,
        norm_residual=norm_residual,
        in_col_p=in_col,
        col_residual=col_residual,
        l_min_eigenvalue=l_min,
        valid=valid,
        purity=purity,
        trace_cube=trace_cube,
        pure=pure,
        scalar_residuals=scalars,
        vector_residual=vector,
        tolerance=tol,
    )


# --- observables and the variance bound -------------------------------------


def observable_lift(device, x, tol=1e-10):
    """``X = sum_i x_i E_i`` and, when ``x`` lies in col(P),
    ``X_tilde = (n/d)[(d+1) X - tr(X) I]``."""
    device.require_design(2, "observable lifting")
    x = _vec(device, x, "x")
    X = np.einsum("i,iab->ab", x, device.effects)
    X_tilde = None
    if col_P_residual(device, x) <= tol:
        d, n = device.d, device.n
        X_tilde = (n / d) * ((d + 1) * X - np.trace(X) * np.eye(d))
    return ObservableAssignment(x, X, X_tilde)


def observable_project(device, X_tilde):
    """``x_i = tr(E_i X_tilde)``; always in col(P)."""
    return probs_of_operator(device, X_tilde)


def _x_values(device, x):
    if isinstance(x, ObservableAssignment):
        x = x.x
    return _vec(device, x, "x")


def _require_col(device, x, tol=1e-9):
    res = col_P_residual(device, x)
    if res > tol:
        raise PreconditionError(f"x must lie in col(P) (residual {res:.3g})")


def second_moment_observable(device, x, p, form=GENERAL):
    """``tr(X^2 rho)`` from ``x`` and ``p`` alone."""
    x = _x_values(device, x)
    p = _vec(device, p)
    d, n = device.d, device.n
    if form == GENERAL:
        L = jordan_L(device, p, GENERAL)
        return (d / n) * float(x @ L @ x)
    if form == SIMPLIFIED:
        device.require_design(3, "the simplified second moment")
        _require_col(device, x)
        x2_rho = float(np.sum(x**2 * p))
        x_rho = float(np.sum(x * p))
        x2_mu = float(np.mean(x**2))
        x_mu = float(np.mean(x))
        return 0.5 * (d + 2) / (d + 1) * (x2_rho - d / (d + 2) * (x2_mu - 2 * x_mu * x_rho))
    raise ValueError(f"unknown form {form!r}")


def variance_bound(device, x, p, slack=1e-9):
    """Reference-device variance of ``x`` against its quantum lower bound.

    Returns ``(variance, bound, satisfied)`` with ``satisfied`` meaning
    ``variance >= bound - slack``.
    """
    x = _x_values(device, x)
    p = _vec(device, p)
    _require_col(device, x)
    d = device.d
    x_rho = float(np.sum(x * p))
    variance = float(np.sum(x**2 * p)) - x_rho**2
    bound = d / (d + 2) * (float(np.mean(x**2)) - 2 * float(np.mean(x)) * x_rho) - x_rho**2
    return variance, bound, bool(variance >= bound - slack)


def violating_observable(device, p):
    """Observable values in col(P) built from the most negative eigenvector of
    ``jordan_L``; for an invalid ``p`` they violate the variance bound."""
    p = _vec(device, p)
    method = THREE_DESIGN if device.design_order >= 3 else GENERAL
    w, V = _sym_eig(jordan_L(device, p, method))
    v = V[:, 0]
    x = device.projector.T @ v
    return x / np.linalg.norm(x), float(w[0])


# --- test-vector generation --------------------------------------------------


def stretched_probs(device, p, factor):
    """Move ``p`` radially away from the uniform vector by ``factor``.

    Normalization and membership in col(P) are preserved.
    """
    u = maximally_mixed_probs(device)
    return u + factor * (_vec(device, p) - u)


def generate_vectors(device, count, seed=0, stretch=1.5):
    """Deterministic mix of valid and invalid probability vectors in col(P).

    Each vector uses its own PRNG stream spawned from ``seed``, so results do
    not depend on evaluation order. Yields ``(p, expected_valid)`` pairs where
    ``expected_valid`` describes how the vector was built.
    """
    d = device.d
    streams = np.random.SeedSequence(seed).spawn(count)
    for k, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        kind = k % 4
        if kind == 0:
            yield probs_of_state(device, random_state(d, 1, rng)), True
        elif kind == 1:
            rank = int(rng.integers(2, d + 1))
            yield probs_of_state(device, random_state(d, rank, rng)), True
        elif kind == 2:
            psi = random_pure_state(d, rng)
            pure = probs_of_state(device, np.outer(psi, psi.conj()))
            yield stretched_probs(device, pure, stretch), False
        else:
            rho = random_state(d, int(rng.integers(1, d + 1)), rng)
            lam_min = float(eigvalsh(rho)[-1])
            # push the smallest eigenvalue to a clearly negative value
            target = -float(rng.uniform(0.05, 0.5)) / d
            factor = (1 / d - target) / (1 / d - lam_min)
            yield stretched_probs(device, probs_of_state(device, rho), factor), False


def oracle_operator(device, p):
    """Hilbert-space counterpart of ``p`` used for cross-checks."""
    return operator_of_probs(device, p)


def oracle_L(device, p):
    """``tr(E_i (rho o sigma_j))`` computed from matrices."""
    rho = operator_of_probs(device, p)
    return np.array(
        [
            [np.trace(device.effects[i] @ jordan_product(rho, device.states[j])).real for j in range(device.n)]
            for i in range(device.n)
        ]
    )
