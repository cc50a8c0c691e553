"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""
import math

import numpy as np


def jacobi_eigh(A, tol=1e-15, max_sweeps=60):
    """Diagonalize a Hermitian matrix with cyclic (row-order) Jacobi sweeps.

    Returns ``(w, V)`` with unsorted real eigenvalues ``w`` and unitary ``V``
    such that ``A = V diag(w) V^H``.
    """
    a = np.array(A, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    frob = float(np.linalg.norm(a))
    if frob == 0.0:
        return np.zeros(n), v

    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off = float(np.sum(np.abs(a[iu]) ** 2))
        if math.sqrt(2.0 * off) <= tol * frob:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(a[p, q])
                if r <= 1e-300 or r < 1e-18 * frob:
                    continue
                g = a[p, q] / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if theta >= 0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                upp, upq = c, s
                uqp, uqq = -s * g.conjugate(), c * g.conjugate()

                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = colp * upp + colq * uqp
                a[:, q] = colp * upq + colq * uqq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(upp) * rowp + np.conj(uqp) * rowq
                a[q, :] = np.conj(upq) * rowp + np.conj(uqq) * rowq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = vp * upp + vq * uqp
                v[:, q] = vp * upq + vq * uqq

    return np.real(np.diag(a)).copy(), v


def triple_from_p(P, d):
    """R_ijk = 1/2 [c sum_m P_im P_jm P_km - P_jk - P_ij - P_ik - d/n],
    with c = (d+1)(d+2)(n/d)."""
    P = np.asarray(P, dtype=np.float64)
    n = P.shape[0]
    coeff = (d + 1.0) * (d + 2.0) * (n / d)
    cubic = np.einsum("im,jm,km->ijk", P, P, P, optimize=True)
    return 0.5 * (
        coeff * cubic
        - P[np.newaxis, :, :]
        - P[:, :, np.newaxis]
        - P[:, np.newaxis, :]
        - d / n
    )
