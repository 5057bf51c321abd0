"""Command-line entry points.

Exit codes: 0 all checks pass, 1 a check failed, 2 input error,
3 resource envelope exceeded.  The cache directory resolves, in order:
--cache-dir flag, CQGLAB_CACHE environment variable, no caching.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, hopf, suites
from .blocks import (QData, adelta_dual_norm, adelta_norm,
                     fourier_algebra_norm, load_block)
from .errors import EnvelopeError, StructureError
from .report import Report
from .tlrep import DEFAULT_ENVELOPE, IrrepCategory, chebyshev_dims

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE = 3


def _resolve_cache(args) -> str | None:
    if getattr(args, "cache_dir", None):
        return args.cache_dir
    return os.environ.get("CQGLAB_CACHE") or None


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None,
                        help="override the default tolerance")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for all randomized checks")
    parser.add_argument("--cache-dir", default=None,
                        help="projector/fusion cache directory (or $CQGLAB_CACHE)")
    parser.add_argument("--report", default=None,
                        help="write the finalized JSON report here")
    parser.add_argument("--envelope", type=int, default=DEFAULT_ENVELOPE,
                        help="largest allowed tensor-power size N^k")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker pool size for independent sweeps")


def _jsonl_path(args) -> str | None:
    path = getattr(args, "report", None)
    return path + ".partial" if path else None


def _emit(report: Report, args) -> int:
    report.metadata["version"] = __version__
    for line in report.summary_lines():
        print(line)
    if getattr(args, "report", None):
        report.finalize(args.report)
        print(f"report written to {args.report}")
    print("overall:", "PASS" if report.passed else "FAIL")
    return EXIT_PASS if report.passed else EXIT_CHECK_FAILED


def _cmd_fqg(args) -> int:
    try:
        G = hopf.load(args.input)
    except FileNotFoundError:
        print(f"error: no such file: {args.input}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    tol = args.tol if args.tol is not None else hopf.DEFAULT_TOL
    report = suites.fqg_suite(G, tol=tol, seed=args.seed, jsonl_path=_jsonl_path(args))
    return _emit(report, args)


def _cmd_dims(args) -> int:
    dims = chebyshev_dims(args.N, args.max)
    print(" ".join(str(d) for d in dims))
    return EXIT_PASS


def _cmd_jw(args) -> int:
    cat = IrrepCategory(args.N, envelope=args.envelope, cache_dir=_resolve_cache(args))
    p = cat.jones_wenzl(args.n)
    d = cat.dim(args.n)
    idem = float(np.abs(p @ p - p).max())
    trace_defect = abs(float(np.trace(p).real) - d)
    print(f"N={args.N} n={args.n}: size {p.shape[0]}, rank {d}, "
          f"idempotency residual {idem:.3e}, trace defect {trace_defect:.3e}, "
          f"cache hits {cat.cache_hits}")
    ok = idem < 1e-8 and trace_defect < 1e-7
    return EXIT_PASS if ok else EXIT_CHECK_FAILED


def _load_qdata(path: str) -> QData:
    try:
        with open(path) as fh:
            raw = json.load(fh)
        entries = {int(k): (int(v["n"]), float(v["d"]), np.asarray(v["q"], dtype=float))
                   for k, v in raw["labels"].items()}
    except (OSError, KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
        raise StructureError(f"bad Q-data file {path}: {exc}") from exc
    q = QData(entries)
    resid = q.trace_condition_residual()
    if resid > 1e-8:
        raise StructureError(f"Q-data violates the trace condition (residual {resid:.3e})")
    return q


def _cmd_norms(args) -> int:
    try:
        X = load_block(args.infile)
        q = _load_qdata(args.qdata) if args.qdata else None
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    which = {"fourier": fourier_algebra_norm,
             "adelta": adelta_norm,
             "adelta-dual": adelta_dual_norm}[args.which]
    print(f"{which.__name__}: {which(X, q):.12g}")
    return EXIT_PASS


def _cmd_derivation(args) -> int:
    try:
        report = suites.derivation_suite(
            args.N, args.nmax, seed=args.seed, cache_dir=_resolve_cache(args),
            envelope=args.envelope, workers=args.workers,
            jsonl_path=_jsonl_path(args))
    except EnvelopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return _emit(report, args)


def _cmd_witness(args) -> int:
    report = suites.witness_suite(args.N, trials=args.trials, seed=args.seed,
                                  jsonl_path=_jsonl_path(args))
    return _emit(report, args)


def _cmd_category(args) -> int:
    try:
        report = suites.category_suite(
            args.N, args.nmax, args.bgmax, cache_dir=_resolve_cache(args),
            envelope=args.envelope, jsonl_path=_jsonl_path(args))
    except EnvelopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return _emit(report, args)


def _cmd_unitary(args) -> int:
    try:
        report = suites.unitary_suite(args.N, cache_dir=_resolve_cache(args),
                                      envelope=args.envelope,
                                      jsonl_path=_jsonl_path(args))
    except EnvelopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return _emit(report, args)


def _cmd_algebra(args) -> int:
    try:
        report = suites.algebra_suite(args.N, trials=args.trials, seed=args.seed,
                                      cache_dir=_resolve_cache(args),
                                      envelope=args.envelope,
                                      jsonl_path=_jsonl_path(args))
    except EnvelopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return _emit(report, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqglab",
        description="numerical checks for finite CQG algebras and the free "
                    "orthogonal category")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    fqg = sub.add_parser("fqg", help="verify a structure-constant file")
    fqg.add_argument("input", help="JSON structure-constant document")
    _common_flags(fqg)
    fqg.set_defaults(func=_cmd_fqg)

    onplus = sub.add_parser("onplus", help="free orthogonal category suites")
    add_onplus_subcommands(onplus)
    return parser


def add_onplus_subcommands(onplus: argparse.ArgumentParser) -> None:
    osub = onplus.add_subparsers(dest="onplus_command", required=True)

    dims = osub.add_parser("dims", help="print the dimension recursion")
    dims.add_argument("--N", type=int, required=True)
    dims.add_argument("--max", type=int, required=True)
    dims.set_defaults(func=_cmd_dims)

    jw = osub.add_parser("jw", help="compute and cache one projector")
    jw.add_argument("--N", type=int, required=True)
    jw.add_argument("--n", type=int, required=True)
    _common_flags(jw)
    jw.set_defaults(func=_cmd_jw)

    norms = osub.add_parser("norms", help="norms of a block-element file")
    norms.add_argument("--in", dest="infile", required=True)
    norms.add_argument("--which", choices=("fourier", "adelta", "adelta-dual"),
                       required=True)
    norms.add_argument("--qdata", default=None,
                       help="optional per-label (n, d, Q) data for non-tracial mode")
    norms.set_defaults(func=_cmd_norms)

    derivation = osub.add_parser("derivation", help="derivation identity sweeps")
    derivation.add_argument("--N", type=int, required=True)
    derivation.add_argument("--nmax", type=int, required=True)
    _common_flags(derivation)
    derivation.set_defaults(func=_cmd_derivation)

    witness = osub.add_parser("witness", help="non-innerness witness")
    witness.add_argument("--N", type=int, required=True)
    witness.add_argument("--trials", type=int, default=100)
    _common_flags(witness)
    witness.set_defaults(func=_cmd_witness)

    category = osub.add_parser("category", help="projector and fusion suites")
    category.add_argument("--N", type=int, required=True)
    category.add_argument("--nmax", type=int, default=4)
    category.add_argument("--bgmax", type=int, default=4)
    _common_flags(category)
    category.set_defaults(func=_cmd_category)

    unitary = osub.add_parser("unitary", help="explicit pair-unitary suite")
    unitary.add_argument("--N", type=int, required=True)
    _common_flags(unitary)
    unitary.set_defaults(func=_cmd_unitary)

    algebra = osub.add_parser("algebra", help="norm and product suites")
    algebra.add_argument("--N", type=int, required=True)
    algebra.add_argument("--trials", type=int, default=100)
    _common_flags(algebra)
    algebra.set_defaults(func=_cmd_algebra)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnvelopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def fqg_entry(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    return main(["fqg", *argv])


def onplus_entry(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    return main(["onplus", *argv])


if __name__ == "__main__":
    sys.exit(main())
