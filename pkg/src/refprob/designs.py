"""Catalogued complex-projective designs and numerical design certificates."""
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InputError, ValidationError
from .operators import haar_moment, hermitian_eig

PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True, eq=False)
class WeightedEnsemble:
    """Pure states ``states[i]`` (rows, length ``d``) with weights ``weights[i]``."""

    d: int
    states: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        states = np.asarray(self.states, dtype=np.complex128)
        weights = np.asarray(self.weights, dtype=np.float64)
        if states.ndim != 2 or states.shape[1] != self.d:
            raise ValidationError(f"states must have shape (n, {self.d}), got {states.shape}")
        if weights.shape != (states.shape[0],):
            raise ValidationError("one weight per state required")
        norms = np.linalg.norm(states, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValidationError("states must be normalized to 1e-12")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ValidationError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self):
        return self.states.shape[0]

    @property
    def unbiased(self):
        return bool(np.max(np.abs(self.weights - 1.0 / self.n)) <= 1e-12)

    def projectors(self):
        return np.einsum("ia,ib->iab", self.states, self.states.conj())

    @classmethod
    def uniform(cls, states):
        states = np.asarray(states, dtype=np.complex128)
        n, d = states.shape
        return cls(d, states, np.full(n, 1.0 / n))


@dataclass(frozen=True)
class DesignCertificate:
    t: int
    moment_residual: float
    frame_potential: float
    frame_potential_target: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.moment_residual <= self.tolerance))

    @property
    def frame_excess(self):
        return self.frame_potential - self.frame_potential_target

    def to_dict(self):
        return {
            "t": self.t,
            "moment_residual": self.moment_residual,
            "frame_potential": self.frame_potential,
            "frame_potential_target": self.frame_potential_target,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def mub_qubit():
    """Eigenstates of Z, X, Y in the order z+, z-, x+, x-, y+, y-."""
    s = 1 / math.sqrt(2)
    states = [
        [1, 0],
        [0, 1],
        [s, s],
        [s, -s],
        [s, 1j * s],
        [s, -1j * s],
    ]
    return WeightedEnsemble.uniform(states)


def sic_qubit():
    """Qubit SIC: Bloch tetrahedron with one vertex at |0>."""
    theta = math.acos(-1.0 / 3.0)
    states = [[1.0, 0.0]]
    for k in range(3):
        phi = 2 * math.pi * k / 3
        states.append([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    return WeightedEnsemble.uniform(states)


def _canonical_phase(psi):
    k = int(np.argmax(np.abs(psi) > 1e-9))
    return psi * (abs(psi[k]) / psi[k])


def _sort_key(psi):
    # +0.0 normalizes negative zeros produced by rounding
    return tuple((round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0) for z in psi)


def stabilizer_states(m):
    """All ``m``-qubit stabilizer states, ``m`` in {1, 2}.

    Each state is the joint +1 eigenvector of ``m`` commuting, independent,
    signed Pauli operators. Duplicates (projectors within 1e-9 in max-norm)
    are dropped and the result is sorted by rounded amplitudes.
    """
    if m not in (1, 2):
        raise InputError(f"stabilizer enumeration supports 1 or 2 qubits, got {m}")
    d = 2**m
    eye = np.eye(d, dtype=np.complex128)
    paulis = []
    for labels in itertools.product("IXYZ", repeat=m):
        if set(labels) == {"I"}:
            continue
        op = PAULI[labels[0]]
        for lab in labels[1:]:
            op = np.kron(op, PAULI[lab])
        paulis.extend([op, -op])

    projectors, states = [], []
    for gens in itertools.product(paulis, repeat=m):
        if any(
            np.max(np.abs(a @ b - b @ a)) > 1e-12 for a, b in itertools.combinations(gens, 2)
        ):
            continue
        proj = eye
        for g in gens:
            proj = proj @ (eye + g) / 2
        if abs(np.trace(proj).real - 1.0) > 1e-9:
            continue  # dependent generators
        if any(np.max(np.abs(proj - q)) < 1e-9 for q in projectors):
            continue
        projectors.append(proj)
        _, V = hermitian_eig(proj)
        states.append(_canonical_phase(V[:, 0]))

    states.sort(key=_sort_key)
    return WeightedEnsemble.uniform(np.array(states))


def tensor_power_states(states, t):
    """Rows ``psi^{(x) t}`` for each row ``psi`` of ``states``."""
    out = states
    for _ in range(t - 1):
        out = np.einsum("ia,ib->iab", out, states).reshape(states.shape[0], -1)
    return out


def moment_operator(ens, t):
    """``sum_i p_i (|psi_i><psi_i|)^{(x) t}``."""
    if t < 1:
        raise InputError("t must be at least 1")
    v = tensor_power_states(ens.states, t)
    return np.einsum("i,ia,ib->ab", ens.weights, v, v.conj())


def frame_potential(ens, t):
    gram = np.abs(ens.states.conj() @ ens.states.T) ** 2
    return float(ens.weights @ gram**t @ ens.weights)


def frame_potential_target(d, t):
    return 1.0 / math.comb(d + t - 1, t)


def is_t_design(ens, t, tol=1e-10):
    """Certify the ``t``-design property by comparing moment operators.

    ``passed`` is decided by the max-norm residual against the Haar moment;
    the frame potential and its lower bound are recorded as a cross-check.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    residual = float(np.max(np.abs(moment_operator(ens, t) - haar_moment(ens.d, t))))
    return DesignCertificate(
        t=t,
        moment_residual=residual,
        frame_potential=frame_potential(ens, t),
        frame_potential_target=frame_potential_target(ens.d, t),
        tolerance=tol,
    )


def design_order(ens, max_t=3, tol=1e-10):
    """Largest ``t <= max_t`` for which ``ens`` is a ``t``-design (0 if none)."""
    order = 0
    for t in range(1, max_t + 1):
        if not is_t_design(ens, t, tol).passed:
            break
        order = t
    return order


CATALOGUE = {
    "mub-qubit": mub_qubit,
    "sic-qubit": sic_qubit,
}
