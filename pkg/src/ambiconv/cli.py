"""Command-line front end: generators, solvers, verification, the built-in
reference reproduction, and seeded Monte-Carlo property campaigns.

All commands read and write the JSON wire formats of the library (signals as
``{"len": d, "entries": [...]}``, matrices as ``{"m": m, "n": n, "entries":
[[row], ...]}``).  Output is deterministic for a fixed configuration: JSON is
dumped with sorted keys, and timing is excluded unless requested.

Exit codes: 0 success, 1 property or check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import reference
from . import trials as trials_mod
from ._kernels import BACKEND
from .ambiguity import (
    AmbiguousPair,
    AttackSearchError,
    attack,
    shift_ambiguity,
    verify_pair,
)
from .core import (
    ToleranceProfile,
    convolve,
    hankel_basis,
    lift_apply,
    matrix_from_json,
    matrix_to_json,
    signal_from_json,
    signal_to_json,
)
from .nullspace import (
    M2Certificate,
    certificate_to_json,
    classify,
    kernel_basis,
    m2_element,
    n0_element,
    n2_generate,
)
from .quotient import RootFindingError, quotient_decompose, reconstruct

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class InputError(Exception):
    def __init__(self, code: str, message: str, path: str = ""):
        super().__init__(message)
        self.code = code
        self.path = path


def _structured_error(code: str, message: str, path: str = "") -> None:
    payload = {"error": {"code": code, "message": message, "path": path}}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError("missing-file", str(exc), path) from exc
    except json.JSONDecodeError as exc:
        raise InputError("malformed-json", str(exc), path) from exc


def _load_signal(path: str):
    try:
        return signal_from_json(_load_json(path))
    except ValueError as exc:
        raise InputError("bad-signal", str(exc), path) from exc


def _load_matrix(path: str):
    try:
        return matrix_from_json(_load_json(path))
    except ValueError as exc:
        raise InputError("bad-matrix", str(exc), path) from exc


def _tol(args) -> ToleranceProfile:
    rel = args.tol if getattr(args, "tol", None) is not None else args.tol_rel
    return ToleranceProfile(abs_tol=args.tol_abs, rel_tol=rel)


def _emit(payload, args, csv_rows=None, csv_header=None) -> None:
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    try:
        if args.format == "json":
            out.write(json.dumps(payload, indent=2, sort_keys=True))
            out.write("\n")
        else:
            if csv_rows is None:
                raise InputError(
                    "no-csv", "this command only supports --format json"
                )
            writer = csv.writer(out, lineterminator="\n")
            if csv_header:
                writer.writerow(csv_header)
            writer.writerows(csv_rows)
    finally:
        if args.out is not None:
            out.close()


# --- command handlers --------------------------------------------------------


def _cmd_convolve(args) -> int:
    z = convolve(_load_signal(args.x), _load_signal(args.y))
    _emit(signal_to_json(z), args, csv_rows=[list(map(float, z))])
    return EXIT_OK


def _cmd_lift(args) -> int:
    z = lift_apply(_load_matrix(args.matrix))
    _emit(signal_to_json(z), args, csv_rows=[list(map(float, z))])
    return EXIT_OK


def _cmd_basis(args) -> int:
    basis = hankel_basis(args.m, args.n)
    if args.j is not None:
        if not 1 <= args.j <= len(basis):
            raise InputError("bad-index", f"--j must be in [1, {len(basis)}]")
        _emit(matrix_to_json(basis[args.j - 1]), args)
    else:
        _emit({"count": len(basis), "elements": [matrix_to_json(s) for s in basis]}, args)
    return EXIT_OK


def _cmd_n0(args) -> int:
    q = n0_element(_load_signal(args.u), _load_signal(args.v))
    _emit(matrix_to_json(q), args)
    return EXIT_OK


def _cmd_n2(args) -> int:
    matrix, cert = n2_generate(args.m, args.n, seed=args.seed, tol=_tol(args))
    _emit(
        {"matrix": matrix_to_json(matrix), "certificate": certificate_to_json(cert)},
        args,
    )
    return EXIT_OK


def _cmd_m2(args) -> int:
    u = _load_signal(args.u)
    q = m2_element(u, args.lam)
    cert = M2Certificate(u=u, lam=args.lam)
    _emit({"matrix": matrix_to_json(q), "certificate": certificate_to_json(cert)}, args)
    return EXIT_OK


def _cmd_kernel(args) -> int:
    basis = kernel_basis(args.m, args.n)
    _emit({"count": len(basis), "elements": [matrix_to_json(q) for q in basis]}, args)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    w = _load_signal(args.input)
    elements = quotient_decompose(w, _tol(args))
    payload = []
    csv_rows = []
    for e in elements:
        residual = float(np.max(np.abs(reconstruct(e.w_star, e.gamma) - w)))
        payload.append(
            {
                "w_star": signal_to_json(e.w_star),
                "gamma": float(e.gamma),
                "residual": residual,
            }
        )
        csv_rows.append([float(e.gamma), residual] + list(map(float, e.w_star)))
    _emit(payload, args, csv_rows=csv_rows, csv_header=["gamma", "residual", "w_star..."])
    return EXIT_OK


def _cmd_classify(args) -> int:
    result = classify(_load_matrix(args.matrix), _tol(args))
    _emit(
        {
            "kind": result.certificate.kind,
            "certificate": certificate_to_json(result.certificate),
            "refactorization_residual": result.refactorization_residual,
        },
        args,
    )
    return EXIT_OK


def _cmd_attack(args) -> int:
    pair = attack(_load_signal(args.x), _load_signal(args.y), _tol(args))
    _emit(pair.to_json(), args)
    return EXIT_OK


def _cmd_shift(args) -> int:
    pair = shift_ambiguity(_load_signal(args.x), _load_signal(args.y))
    _emit(pair.to_json(), args)
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        pair = AmbiguousPair.from_json(_load_json(args.pair))
    except ValueError as exc:
        raise InputError("bad-pair", str(exc), args.pair) from exc
    report = verify_pair(pair, _tol(args))
    _emit(
        report.to_json(),
        args,
        csv_rows=[
            [report.residual, report.collinearity, int(report.certifies_unidentifiability)]
        ],
        csv_header=["residual", "collinearity", "certifies"],
    )
    return EXIT_OK if report.certifies_unidentifiability else EXIT_CHECK_FAILED


def _cmd_reproduce(args) -> int:
    overrides = {}
    for name in ("x1", "y1", "x2", "y2"):
        path = getattr(args, name)
        if path is not None:
            overrides[name] = _load_signal(path)
    checks = reference.run_reference_checks(**overrides)
    ok = all(c.ok for c in checks)
    payload = {"ok": ok, "checks": [c.to_json() for c in checks]}
    csv_rows = [
        [c.name, int(c.ok), c.detail, "" if c.first_bad_index is None else c.first_bad_index]
        for c in checks
    ]
    _emit(payload, args, csv_rows=csv_rows, csv_header=["check", "ok", "detail", "first_bad_index"])
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_trials(args) -> int:
    if args.n < 1:
        raise InputError("bad-count", "--n must be >= 1")
    report = trials_mod.run_suite(
        args.suite,
        n_trials=args.n,
        seed=args.seed,
        mmax=args.mmax,
        nmax=args.nmax,
        tol=_tol(args),
    )
    _emit(
        report.to_json(include_timing=args.timing),
        args,
        csv_rows=report.to_csv_rows(),
        csv_header=list(report.CSV_COLUMNS),
    )
    return EXIT_OK if report.all_ok else EXIT_CHECK_FAILED


def _cmd_backend(args) -> int:
    _emit({"backend": BACKEND}, args)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ambiconv",
        description="Ambiguity-space toolkit for blind linear deconvolution",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    common.add_argument("--tol-abs", type=float, default=1e-12, help="absolute tolerance")
    common.add_argument("--tol-rel", type=float, default=1e-9, help="relative tolerance")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, **kwargs):
        p = sub.add_parser(name, parents=[common], help=help_text, **kwargs)
        p.set_defaults(func=func)
        return p

    p = add("convolve", _cmd_convolve, "linear convolution of two signals")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    p = add("lift", _cmd_lift, "anti-diagonal sums of a matrix")
    p.add_argument("--matrix", required=True)

    p = add("basis", _cmd_basis, "Hankel decomposition matrices of the lifted operator")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, default=None, help="emit only matrix j (1-based)")

    p = add("n0", _cmd_n0, "bordered-product kernel element from (u, v)")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)

    p = add("n2", _cmd_n2, "seeded random recursive kernel element with certificate")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("m2", _cmd_m2, "skew-symmetric square kernel element from (u, lambda)")
    p.add_argument("--u", required=True)
    p.add_argument("--lam", type=float, required=True)

    p = add("kernel", _cmd_kernel, "basis of the full kernel of the lifted operator")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("decompose", _cmd_decompose, "bordered-rotation factor pairs of a vector")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=None, help="alias for --tol-rel")

    p = add("classify", _cmd_classify, "structural certificate of a kernel element")
    p.add_argument("--matrix", required=True)

    p = add("attack", _cmd_attack, "adversarial certificate pair for a signal pair")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--tol", type=float, default=None, help="alias for --tol-rel")

    p = add("shift", _cmd_shift, "shifted certificate pair for border zero patterns")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    p = add("verify", _cmd_verify, "verify an ambiguous pair and certify (or not)")
    p.add_argument("--pair", required=True)

    p = add("reproduce-paper", _cmd_reproduce, "re-run the built-in reference example checks")
    for name in ("x1", "y1", "x2", "y2"):
        p.add_argument(f"--{name}", default=None, help=f"override the built-in {name}")

    p = add("trials", _cmd_trials, "seeded Monte-Carlo property campaigns")
    p.add_argument("--suite", choices=trials_mod.SUITES, required=True)
    p.add_argument("--n", type=int, default=100, help="trial count (or draws per grid cell)")
    p.add_argument("--mmax", type=int, default=10)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument(
        "--timing",
        action="store_true",
        help="include wall times (breaks byte-for-byte determinism)",
    )

    add("backend", _cmd_backend, "report which kernel backend is active")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        _structured_error(exc.code, str(exc), exc.path)
        return EXIT_USAGE
    except AttackSearchError as exc:
        _structured_error("attack-search-failed", str(exc))
        return EXIT_CHECK_FAILED
    except RootFindingError as exc:
        _structured_error("root-finding-failed", str(exc))
        return EXIT_CHECK_FAILED
    except ValueError as exc:
        _structured_error("invalid-input", str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
