"""JSON file formats.

Complex numbers are ``[re, im]`` pairs and matrices are row-major nested
lists. Floats are written with Python's shortest round-trip repr, so reading
a file back reproduces every stored value exactly.

Schemas::

    ensemble  {"d", "weights", "states"}
    device    {"d", "n", "effects", "states", "P", "phi", "phi_method"}
    probs     {"n", "p"}
    operator  {"d", "matrix"}
    tensor    {"n", "method", "entries"}          # entries[i][j][k]
    report    ValidityReport fields + "tolerance"
"""
import json
import math
import sys

import numpy as np

from .designs import WeightedEnsemble
from .exceptions import RefprobError
from .refdevice import PHI_METHODS, ReferenceDevice
from .statespace import TripleTensor


class SchemaError(RefprobError, ValueError):
    """A file does not match the expected JSON schema."""


def _reject_constant(name):
    raise SchemaError(f"non-finite value {name} is not allowed")


def loads(text):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from exc


def load(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def dumps(obj):
    return json.dumps(obj, allow_nan=False)


def dump(obj, path=None):
    """Write ``obj`` as JSON to ``path``, or to stdout when ``path`` is None."""
    text = dumps(obj)
    if path is None or path == "-":
        sys.stdout.write(text + "\n")
        return
    try:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise SchemaError(f"cannot write {path}: {exc}") from exc


# --- primitives ---------------------------------------------------------------


def encode_complex(z):
    return [float(z.real), float(z.imag)]


def decode_complex(v):
    if not (isinstance(v, list) and len(v) == 2 and all(_is_number(x) for x in v)):
        raise SchemaError(f"expected [re, im], got {v!r}")
    return complex(v[0], v[1])


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def encode_matrix(M):
    return [[encode_complex(z) for z in row] for row in np.asarray(M)]


def decode_matrix(rows, shape=None):
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SchemaError("matrix must be a non-empty list of rows")
    try:
        M = np.array([[decode_complex(z) for z in row] for row in rows], dtype=np.complex128)
    except ValueError as exc:
        raise SchemaError("matrix rows must have equal length") from exc
    if M.ndim != 2 or (shape is not None and M.shape != shape):
        raise SchemaError(f"matrix has shape {M.shape}, expected {shape}")
    return M


def _real_array(values, shape, what):
    try:
        arr = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{what} must contain numbers") from exc
    if arr.shape != shape:
        raise SchemaError(f"{what} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{what} must be finite")
    return arr


def _field(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing field {key!r}")
    value = obj[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool) or value < 1):
        raise SchemaError(f"{key!r} must be a positive integer")
    return value


# --- schemas ----------------------------------------------------------------------


def ensemble_to_dict(ens):
    return {
        "d": ens.d,
        "weights": [float(w) for w in ens.weights],
        "states": [[encode_complex(z) for z in psi] for psi in ens.states],
    }


def ensemble_from_dict(obj):
    d = _field(obj, "d", int)
    states = _field(obj, "states")
    if not isinstance(states, list) or not states:
        raise SchemaError("'states' must be a non-empty list")
    vecs = []
    for psi in states:
        if not isinstance(psi, list) or len(psi) != d:
            raise SchemaError(f"each state must be a list of {d} amplitudes")
        vecs.append([decode_complex(z) for z in psi])
    vecs = np.array(vecs, dtype=np.complex128)
    weights = _real_array(_field(obj, "weights"), (len(states),), "weights")
    try:
        return WeightedEnsemble(d, vecs, weights)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def device_to_dict(dev):
    return {
        "d": dev.d,
        "n": dev.n,
        "effects": [encode_matrix(e) for e in dev.effects],
        "states": [encode_matrix(s) for s in dev.states],
        "P": dev.P.tolist(),
        "phi": dev.phi.tolist(),
        "phi_method": dev.phi_method,
    }


def device_from_dict(obj):
    d = _field(obj, "d", int)
    n = _field(obj, "n", int)
    effects = _field(obj, "effects")
    states = _field(obj, "states")
    if not (isinstance(effects, list) and isinstance(states, list)) or len(effects) != n or len(states) != n:
        raise SchemaError(f"'effects' and 'states' must each hold {n} matrices")
    E = np.array([decode_matrix(m, (d, d)) for m in effects])
    S = np.array([decode_matrix(m, (d, d)) for m in states])
    P = _real_array(_field(obj, "P"), (n, n), "P")
    phi = _real_array(_field(obj, "phi"), (n, n), "phi")
    method = _field(obj, "phi_method")
    if method not in PHI_METHODS:
        raise SchemaError(f"unknown phi_method {method!r}")
    return ReferenceDevice(d, E, S, P, phi, method)


def probs_to_dict(p):
    p = np.asarray(p, dtype=np.float64)
    return {"n": int(p.size), "p": [float(v) for v in p]}


def probs_from_dict(obj):
    n = _field(obj, "n", int)
    return _real_array(_field(obj, "p"), (n,), "p")


def operator_to_dict(M):
    M = np.asarray(M)
    return {"d": int(M.shape[0]), "matrix": encode_matrix(M)}


def operator_from_dict(obj):
    d = _field(obj, "d", int)
    return decode_matrix(_field(obj, "matrix"), (d, d))


def tensor_to_dict(T: TripleTensor):
    return {"n": T.n, "method": T.method, "entries": np.asarray(T.entries).tolist()}


def tensor_from_dict(obj):
    n = _field(obj, "n", int)
    entries = _real_array(_field(obj, "entries"), (n, n, n), "entries")
    return TripleTensor(n, entries, str(_field(obj, "method")))


def report_to_dict(report):
    return report.to_dict()


def read_ensemble(path):
    return ensemble_from_dict(load(path))


def read_device(path):
    return device_from_dict(load(path))


def read_probs(path):
    return probs_from_dict(load(path))


def read_operator(path):
    return operator_from_dict(load(path))
