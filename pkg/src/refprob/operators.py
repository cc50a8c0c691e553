"""Dense complex linear algebra and the Hilbert-space oracle.

Matrices are plain ``numpy`` arrays. Hermitian operators, density matrices,
effects and reference states are all ``(d, d)`` complex arrays; pure states
are length-``d`` complex vectors.

Vectorization is column stacking, ``|A) = (I (x) A) sum_i |i,i>``, so entry
``A[j, i]`` lands at index ``i*d + j``.
"""
import itertools
import math

import numpy as np

from .exceptions import DimensionError, InputError, ValidationError
from .kernels import jacobi_eigh

TOL_HERM = 1e-12


def as_square(A, name="matrix"):
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    return A


def check_hermitian(A, tol=TOL_HERM, name="matrix"):
    """Return ``A`` as a complex array, raising if it is not Hermitian within ``tol``."""
    A = as_square(A, name)
    dev = float(np.max(np.abs(A - A.conj().T)))
    if dev > tol:
        raise ValidationError(f"{name} is not Hermitian (max deviation {dev:.3g} > {tol:.3g})")
    return A


def trace_inner_product(A, B):
    """Hilbert-Schmidt inner product ``tr(A^H B)``."""
    A = as_square(A, "A")
    B = as_square(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    return complex(np.vdot(A.ravel(), B.ravel()))


def vectorize(A):
    """Column-stacking vectorization: ``A[j, i]`` goes to index ``i*d + j``."""
    A = as_square(A)
    return A.ravel(order="F").copy()


def devectorize(v):
    v = np.asarray(v, dtype=np.complex128).ravel()
    d = math.isqrt(v.size)
    if d * d != v.size or d < 1:
        raise DimensionError(f"length {v.size} is not a perfect square")
    return v.reshape((d, d), order="F").copy()


def ket_bra(psi):
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def kron_all(mats):
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = np.kron(out, m)
    return out


def _check_perm(perm):
    perm = tuple(int(k) for k in perm)
    if sorted(perm) != list(range(len(perm))) or not perm:
        raise InputError(f"{perm!r} is not a permutation of 0..t-1")
    return perm


def permutation_operator(perm, d):
    """Matrix of ``T_pi`` on ``(C^d)^{(x) t}``.

    ``T_pi`` maps the basis ket ``|a_0, ..., a_{t-1}>`` to the ket whose slot
    ``k`` holds ``a_{perm[k]}``. For ``t = 2`` and ``perm = (1, 0)`` this is the
    swap ``sum |b,a><a,b|``; ``perm = (1, 2, 0)`` gives ``sum |b,c,a><a,b,c|``.
    """
    perm = _check_perm(perm)
    if d < 2:
        raise InputError("local dimension must be at least 2")
    t = len(perm)
    D = d**t
    # digits[idx, k] is the slot-k label of basis index idx (slot 0 most significant)
    digits = np.array(list(itertools.product(range(d), repeat=t)), dtype=np.int64).reshape(D, t)
    out_digits = digits[:, list(perm)]
    weights = d ** np.arange(t - 1, -1, -1)
    rows = out_digits @ weights
    T = np.zeros((D, D), dtype=np.complex128)
    T[rows, np.arange(D)] = 1.0
    return T


def permutation_cycles(perm):
    """Cycles of ``perm`` as tuples ``(k, perm[k], perm[perm[k]], ...)``."""
    perm = _check_perm(perm)
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc, k = [], start
        while k not in seen:
            seen.add(k)
            cyc.append(k)
            k = perm[k]
        cycles.append(tuple(cyc))
    return cycles


def cycle_trace_product(perm, mats):
    """Oracle for ``tr(T_pi (X_0 (x) ... (x) X_{t-1}))``: product over cycles of
    the trace of the cycle-ordered matrix product."""
    perm = _check_perm(perm)
    if len(mats) != len(perm):
        raise DimensionError("need one matrix per tensor factor")
    value = 1.0 + 0j
    for cyc in permutation_cycles(perm):
        prod = mats[cyc[0]]
        for k in cyc[1:]:
            prod = prod @ mats[k]
        value *= np.trace(prod)
    return complex(value)


def haar_moment(d, t):
    """``t``-th moment of Haar-random pure states,
    ``binom(d+t-1, t)^{-1} (1/t!) sum_pi T_pi``."""
    if d < 2 or t < 1:
        raise InputError("need d >= 2 and t >= 1")
    acc = np.zeros((d**t, d**t), dtype=np.complex128)
    for perm in itertools.permutations(range(t)):
        acc += permutation_operator(perm, d)
    return acc / (math.comb(d + t - 1, t) * math.factorial(t))


def hermitian_eig(A, tol=TOL_HERM):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns
    -------
    w : ndarray
        Real eigenvalues in descending order.
    V : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    A = check_hermitian(A, tol)
    w, V = jacobi_eigh(A)
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def eigvalsh(A, tol=TOL_HERM):
    return hermitian_eig(A, tol)[0]


def is_psd(A, tol=1e-12):
    """True iff the smallest eigenvalue of Hermitian ``A`` is at least ``-tol``."""
    return bool(eigvalsh(A)[-1] >= -tol)


def jordan_product(A, B):
    """``A o B = (AB + BA) / 2``."""
    A = as_square(A, "A")
    B = as_square(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    return 0.5 * (A @ B + B @ A)


# --- random fixtures ---------------------------------------------------------
# All randomness goes through numpy's PCG64 generator (``np.random.default_rng``).


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure_state(d, seed=None):
    """Haar-random unit vector from normalized complex Gaussian amplitudes."""
    rng = _rng(seed)
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return psi / np.linalg.norm(psi)


def random_state(d, rank=None, seed=None, equal_weights=False):
    """Random density matrix of the requested rank.

    ``rank=1`` gives a Haar-random pure state. Higher ranks use ``G G^H / tr``
    for a complex Gaussian ``d x rank`` matrix ``G``; with ``equal_weights``
    the state is instead an equal mixture of ``rank`` random orthonormal
    vectors, so ``rank=d`` yields ``I/d``.
    """
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise InputError(f"rank must be in 1..{d}, got {rank}")
    rng = _rng(seed)
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    if equal_weights:
        Q, _ = np.linalg.qr(G)
        rho = Q @ Q.conj().T / rank
    else:
        rho = G @ G.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_hermitian(d, seed=None):
    rng = _rng(seed)
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (G + G.conj().T)


def random_unitary(d, seed=None):
    """Haar-random unitary (QR of a Ginibre matrix with phase fix)."""
    rng = _rng(seed)
    G = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(G)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph
