"""Command-line front end.

Exit codes: 0 success / predicate true, 1 predicate false or conversion
impossible, 2 unreadable input or usage error, 3 invalid state or unitary,
4 Choi matrix that is not CPTP. Verdicts go to stdout, diagnostics to
stderr.
"""
import argparse
import sys

import numpy as np

from . import matrixfile
from .channels import (
    Channel,
    apply,
    is_completely_rng,
    is_free_unitary,
    is_rng,
    is_transposition_covariant,
    sample_channel,
    sample_real_choi_channel,
)
from .core import (
    DimensionError,
    InvalidStateError,
    NotCPTPError,
    NotUnitaryError,
    Tolerance,
    as_matrix,
    is_unitary,
    partial_transpose_a,
)
from .matrixfile import MatrixFileError
from .measures import measure_m, robustness
from .states import canonical_pure_form, density_matrix, projector, pure_state
from .transforms import NotConvertibleError, fidelity, synthesize

EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_INVALID, EXIT_NOT_CPTP = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt12(value, tol):
    return "0" if abs(value) <= tol.atol else f"{value:#.12g}"


def _read(path, kinds):
    mf = matrixfile.read(path)
    if mf.kind not in kinds:
        raise MatrixFileError(f"{path}: expected kind {' or '.join(kinds)}, got {mf.kind!r}")
    return mf


def _load_state(path, tol):
    mf = _read(path, ("state", "pure"))
    if mf.kind == "pure":
        return projector(_load_pure_from(mf, tol))
    return density_matrix(mf.matrix, tol)


def _load_pure_from(mf, tol):
    if mf.dims[1] != 1:
        raise MatrixFileError("pure state must have dims [d, 1]")
    return pure_state(mf.matrix[:, 0], tol)


def _load_pure(path, tol):
    return _load_pure_from(_read(path, ("pure",)), tol)


def _load_channel(path, tol):
    mf = _read(path, ("choi",))
    return Channel(mf.matrix, mf.dims[0], mf.dims[1])


def _write_or_print(mf, path):
    if path:
        matrixfile.write(path, mf)
    else:
        print(mf.to_json())


def cmd_measure(args, tol):
    rho = _load_state(args.state, tol)
    if args.robustness:
        report = robustness(rho, tol)
        value = report.value
        print("R = 0" if value <= tol.atol else f"R = {value:.6f}")
    else:
        print(f"M = {fmt12(measure_m(rho).value, tol)}")
    return EXIT_OK


def cmd_check(args, tol):
    if (args.choi is None) == (args.unitary is None):
        raise CliError("give exactly one of --choi or --unitary", EXIT_PARSE)
    if args.unitary is not None:
        if args.predicate != "free-unitary":
            raise CliError("--unitary only supports --predicate free-unitary", EXIT_PARSE)
        u = as_matrix(_read(args.unitary, ("unitary",)).matrix)
        if u.shape[0] != u.shape[1] or not is_unitary(u, tol):
            raise NotUnitaryError("matrix is not unitary")
        fac = is_free_unitary(u, tol)
        print("true" if fac else "false")
        if fac:
            print(f"theta = {fmt12(fac.theta, tol)}")
        print(f"q_extracted = {'true' if fac else 'false'}")
        return EXIT_OK if fac else EXIT_FALSE
    if args.predicate == "free-unitary":
        raise CliError("--predicate free-unitary needs --unitary", EXIT_PARSE)
    ch = _load_channel(args.choi, tol)
    j = ch.choi
    if args.predicate == "rng":
        verdict = is_rng(ch, tol)
        d = j - partial_transpose_a(j, ch.dim_out, ch.dim_in)
        witness = ("asymmetry", float(np.max(np.abs(d - d.T))))
    elif args.predicate == "real":
        verdict = is_completely_rng(ch, tol)
        witness = ("max_imag", float(np.max(np.abs(j.imag))))
    else:
        verdict = is_transposition_covariant(ch, tol)
        witness = ("asymmetry", float(np.max(np.abs(j - j.T))))
    print("true" if verdict else "false")
    print(f"{witness[0]} = {witness[1]:.3e}")
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_canonicalize(args, tol):
    psi = _load_pure(args.pure, tol)
    cf = canonical_pure_form(psi, tol)
    print(f"theta = {fmt12(cf.theta, tol)}")
    print(f"phase = {fmt12(cf.phase, tol)}")
    matrixfile.write(args.output, matrixfile.from_unitary(cf.u_free, theta=cf.theta, phase=cf.phase))
    return EXIT_OK


def cmd_synth(args, tol):
    psi = _load_pure(args.source, tol)
    phi = _load_pure(args.target, tol)
    try:
        plan = synthesize(psi, phi, tol)
    except NotConvertibleError as exc:
        print(str(exc))
        return EXIT_FALSE
    matrixfile.write(args.output, matrixfile.from_channel(plan.total))
    print(f"theta = {fmt12(plan.theta, tol)}")
    print(f"theta_prime = {fmt12(plan.theta_prime, tol)}")
    print(f"fidelity = {fidelity(plan.total, psi, phi):#.12g}")
    return EXIT_OK


def cmd_apply(args, tol):
    ch = _load_channel(args.choi, tol)
    rho = _load_state(args.state, tol)
    if rho.shape[0] != ch.dim_in:
        raise DimensionError(f"state has dimension {rho.shape[0]}, channel expects {ch.dim_in}")
    _write_or_print(matrixfile.from_state(apply(ch, rho)), args.output)
    return EXIT_OK


def cmd_sample(args, tol):
    sampler = sample_real_choi_channel if args.real else sample_channel
    _write_or_print(matrixfile.from_channel(sampler(args.dim, args.seed)), args.output)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="absolute tolerance (default 1e-9)")

    parser = argparse.ArgumentParser(prog="imaginarity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[common], help="imaginarity of a state")
    p.add_argument("state")
    p.add_argument("--robustness", action="store_true", help="robustness instead of trace distance")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("check", parents=[common], help="free-operation predicates")
    p.add_argument("--choi")
    p.add_argument("--unitary")
    p.add_argument("--predicate", required=True, choices=["rng", "real", "covariant", "free-unitary"])
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("canonicalize", parents=[common], help="standard form of a pure state")
    p.add_argument("pure")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("synth", parents=[common], help="free channel between pure states")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("apply", parents=[common], help="apply a channel to a state")
    p.add_argument("--choi", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("sample", parents=[common], help="random channel")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--real", action="store_true", help="sample a real-Choi (free) channel")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerance(args.tol, args.tol)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, tol)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (MatrixFileError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidStateError, NotUnitaryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NotCPTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CPTP


if __name__ == "__main__":
    sys.exit(main())
