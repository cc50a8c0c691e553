"""Command-line interface.

Every command writes machine-readable JSON to stdout (or to ``-o``) and
human diagnostics to stderr. Exit codes: 0 the certificate holds, 1 it
fails, 2 usage, I/O or schema errors.

``REFPROB_SEED`` sets the default ``--seed`` of commands that sample.
"""
import argparse
import os
import sys

from . import io, statespace
from .designs import CATALOGUE, is_t_design, stabilizer_states
from .exceptions import RefprobError, UnsupportedConfiguration, ValidationError
from .operators import random_state
from .refdevice import (
    CLOSED_FORM,
    PSEUDOINVERSE,
    device_from_design,
    operator_of_probs,
    probs_of_state,
)

PHI_CHOICES = {"auto": "auto", "pseudoinverse": PSEUDOINVERSE, "closed-form": CLOSED_FORM}
SATURATION_TOL = 1e-9


class UsageError(RefprobError):
    pass


def _emit(obj, out=None):
    io.dump(obj, out)
    if out not in (None, "-"):
        io.dump({"written": out})


def _load_device(path):
    dev = io.read_device(path)
    try:
        dev.check_invariants()
    except ValidationError as exc:
        raise io.SchemaError(f"{path}: {exc}") from exc
    return dev


def _load_probs(dev, path):
    p = io.read_probs(path)
    if p.size != dev.n:
        raise UsageError(f"{path}: probability vector has n={p.size}, device has n={dev.n}")
    return p


# --- commands ---------------------------------------------------------------------


def cmd_design(args):
    if args.kind == "stabilizer":
        if args.qubits is None:
            raise UsageError("--qubits is required for --kind stabilizer")
        try:
            ens = stabilizer_states(args.qubits)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        ens = CATALOGUE[args.kind]()
    _emit(io.ensemble_to_dict(ens), args.output)
    return 0


def cmd_verify(args):
    ens = io.read_ensemble(args.ensemble)
    cert = is_t_design(ens, args.t, args.tol)
    out = cert.to_dict()
    out["frame_potential_excess"] = cert.frame_excess
    out["frame_check_passed"] = bool(cert.frame_excess <= args.tol)
    io.dump(out)
    return 0 if cert.passed else 1


def cmd_device(args):
    ens = io.read_ensemble(args.ensemble)
    try:
        dev = device_from_design(ens, PHI_CHOICES[args.phi])
        residuals = dev.check_invariants()
    except (UnsupportedConfiguration, ValidationError) as exc:
        io.dump({"error": str(exc), "phi_method": args.phi})
        print(f"refprob: {exc}", file=sys.stderr)
        return 1
    _emit(io.device_to_dict(dev), args.output)
    print(f"device d={dev.d} n={dev.n} phi={dev.phi_method} residuals={residuals}", file=sys.stderr)
    return 0


def cmd_check(args):
    dev = _load_device(args.device)
    p = _load_probs(dev, args.probs)
    report = statespace.validity_check(dev, p, args.tol)
    io.dump(report.to_dict())
    holds = report.pure if args.pure else report.valid
    return 0 if holds else 1


def cmd_encode(args):
    dev = _load_device(args.device)
    rho = io.read_operator(args.input)
    p = probs_of_state(dev, rho)
    _emit(io.probs_to_dict(p), args.output)
    return 0


def cmd_decode(args):
    dev = _load_device(args.device)
    p = _load_probs(dev, args.input)
    _emit(io.operator_to_dict(operator_of_probs(dev, p)), args.output)
    return 0


def cmd_jordan(args):
    dev = _load_device(args.device)
    tensor = statespace.triple_tensor(dev, args.method)
    _emit(io.tensor_to_dict(tensor), args.output)
    return 0


def _saturation(value, lower, upper):
    if abs(value - lower) <= SATURATION_TOL:
        return "lower"
    if abs(value - upper) <= SATURATION_TOL:
        return "upper"
    return None


def cmd_agreement(args):
    dev = _load_device(args.device)
    probs = [_load_probs(dev, path) for path in args.probs]
    if len(probs) < 2:
        raise UsageError("agreement needs at least two probability files")
    t = len(probs)
    value = statespace.agreement_probability(dev, probs)
    out = {"t": t, "value": value, "lower": None, "upper": None, "saturates": None}
    if t in (2, 3) and dev.design_order >= t:
        lower, upper = statespace.agreement_bounds(dev.d, dev.n, t)
        out.update(lower=lower, upper=upper, saturates=_saturation(value, lower, upper))
    io.dump(out)
    return 0


def cmd_entropy(args):
    dev = _load_device(args.device)
    p = _load_probs(dev, args.probs)
    out = {"t": args.t, "entropy": statespace.renyi_entropy(p, args.t), "pure_state_minimum": None}
    if args.t in (2, 3) and dev.design_order >= args.t:
        out["pure_state_minimum"] = statespace.pure_state_entropy(dev.d, dev.n, args.t)
    io.dump(out)
    return 0


def cmd_bounds(args):
    dev = _load_device(args.device)
    dev.require_design(args.t, f"order-{args.t} agreement bounds")
    lower, upper = statespace.agreement_bounds(dev.d, dev.n, args.t)
    out = {"d": dev.d, "n": dev.n, "t": args.t, "lower": lower, "upper": upper}
    if args.probs:
        probs = [_load_probs(dev, path) for path in args.probs]
        if len(probs) == 1:
            probs = probs * args.t
        if len(probs) != args.t:
            raise UsageError(f"give 1 or {args.t} probability files")
        value = statespace.agreement_probability(dev, probs)
        out.update(value=value, saturates=_saturation(value, lower, upper))
    io.dump(out)
    return 0


def cmd_state(args):
    rank = args.rank if args.rank is not None else args.dim
    rho = random_state(args.dim, rank, seed=args.seed)
    _emit(io.operator_to_dict(rho), args.output)
    return 0


# --- parser -------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="refprob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="write a catalogued design ensemble")
    p.add_argument("--kind", required=True, choices=["mub-qubit", "sic-qubit", "stabilizer"])
    p.add_argument("--qubits", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("verify", help="certify the t-design property of an ensemble")
    p.add_argument("ensemble")
    p.add_argument("-t", "--t", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("device", help="build a reference device from an ensemble")
    p.add_argument("ensemble")
    p.add_argument("--phi", choices=sorted(PHI_CHOICES), default="auto")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_device)

    p = sub.add_parser("check", help="certify a probability vector as a (pure) state")
    p.add_argument("device")
    p.add_argument("probs")
    p.add_argument("--pure", action="store_true")
    p.add_argument("--tol", type=float, default=statespace.DEFAULT_TOL)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("encode", help="density matrix -> probability vector")
    p.add_argument("device")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="probability vector -> operator")
    p.add_argument("device")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("jordan", help="export the triple-product tensor")
    p.add_argument("device")
    p.add_argument("--method", choices=[statespace.DIRECT, statespace.FROM_P], default=statespace.DIRECT)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_jordan)

    p = sub.add_parser("agreement", help="agreement probability of several preparations")
    p.add_argument("device")
    p.add_argument("probs", nargs="+")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("entropy", help="Renyi entropy of a probability vector")
    p.add_argument("device")
    p.add_argument("probs")
    p.add_argument("-t", "--t", type=float, required=True)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("bounds", help="agreement bounds of a device")
    p.add_argument("device")
    p.add_argument("-t", "--t", type=int, required=True)
    p.add_argument("--probs", nargs="+")
    p.set_defaults(func=cmd_bounds)

    default_seed = os.environ.get("REFPROB_SEED")
    p = sub.add_parser("state", help="sample a random density matrix")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--seed", type=int, default=int(default_seed) if default_seed else 0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_state)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "t", None) is not None and args.command == "entropy" and float(args.t).is_integer():
        args.t = int(args.t)
    try:
        return args.func(args)
    except (RefprobError, ValueError) as exc:
        print(f"refprob {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
