"""Command line interface: ``cpdgevd decompose|generate|selftest|verify``.

Exit status is 0 on success, 1 on I/O, format or argument errors and 2 when
the decomposition itself fails a diagnostic check.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .cpdalg import cpd
from .datasets import make_random_cpd
from .exceptions import CPDError, FormatError, NoBijectionError
from .io import format_float, read_factors, read_tensor, write_factors, write_tensor
from .multiindex import binom
from .tensor import residual
from .tolerance import ToleranceConfig
from .verify import match_factors

EXIT_OK, EXIT_IO, EXIT_DIAG = 0, 1, 2


def _err(msg):
    sys.stdout.flush()
    print(f"cpdgevd: {msg}", file=sys.stderr)


def _kind(exc):
    name = type(exc).__name__
    return name[:-5] if name.endswith("Error") else name


def _parse_dims(text):
    try:
        dims = tuple(int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like IxJxK, got {text!r}") from None
    if len(dims) != 3 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"dims must be three positive sizes, got {text!r}")
    return dims


def _print_report(rep):
    print(f"kernel_dim_found {rep.kernel_dim_found} expected {rep.kernel_dim_expected}")
    if rep.kc_verdict is not None:
        print(f"kc_verdict {rep.kc_verdict.value}")
    if rep.m is not None:
        print(f"m {rep.m}  K_reduced {rep.K_reduced}  K_used {rep.K_used}"
              f"  mixture {'yes' if rep.mixture_applied else 'no'}")
    if rep.algorithm:
        print(f"algorithm {rep.algorithm}")
    if rep.pair_count is not None:
        print(f"pairs {rep.pair_count} of {rep.pairs_scanned} scanned"
              f"  ambiguous {rep.ambiguous_pairs}  clusters {rep.cluster_sizes}")
    if rep.residual is not None:
        print(f"residual {rep.residual!r}")
        if rep.polished:
            print(f"algebraic_residual {rep.algebraic_residual!r} (polished)")
    if rep.timings:
        print("timing " + "  ".join(f"{k}={v:.3f}s" for k, v in rep.timings.items()))


def cmd_decompose(args) -> int:
    try:
        T = read_tensor(args.input)
    except (OSError, FormatError) as exc:
        _err(str(exc))
        return EXIT_IO
    tol = ToleranceConfig() if args.tol is None else ToleranceConfig(residual=args.tol)
    try:
        est, rep = cpd(T, args.rank, args.algorithm, tol=tol, seed=args.seed, kc=args.kc)
    except CPDError as exc:
        rep = getattr(exc, "report", None)
        if rep is not None:
            _print_report(rep)
        verdict = rep.kc_verdict.value if rep is not None and rep.kc_verdict else "n/a"
        _err(f"{_kind(exc)}: {exc} [kc_verdict {verdict}]")
        return EXIT_DIAG
    _print_report(rep)
    try:
        write_factors(args.output, est)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    return EXIT_OK


def generation_feasible(dims, R: int) -> bool:
    """Whether a generic problem of this size has a unique algebraic CPD.

    With ``K' = min(K, R)`` and ``m = R - K' + 2`` the test is
    ``m <= min(I, J)`` and ``C(I, m) C(J, m) >= C(R, m)``.
    """
    I, J, K = dims
    if R < 1:
        return False
    m = R - min(K, R) + 2
    return m <= min(I, J) and binom(I, m) * binom(J, m) >= binom(R, m)


def cmd_generate(args) -> int:
    if not generation_feasible(args.dims, args.rank):
        _err(f"rank {args.rank} is not generically identifiable for dims "
             f"{'x'.join(map(str, args.dims))}")
        return EXIT_IO
    try:
        prob = make_random_cpd(args.dims, args.rank, kc=args.kc, rng_seed=args.seed)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_IO
    try:
        write_tensor(args.output, prob.tensor)
        if args.factors:
            write_factors(args.factors, prob.cpd)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(f"wrote {prob.tensor.size} values to {args.output}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok, _ = run_selftest(args.suite)
    print("all suites passed" if ok else "some suites FAILED")
    return EXIT_OK if ok else EXIT_DIAG


def cmd_verify(args) -> int:
    try:
        T = read_tensor(args.tensor)
        est = read_factors(args.factors)
        ref = read_factors(args.reference) if args.reference else None
        if est.dims != T.shape:
            raise FormatError(f"factor dims {est.dims} do not match tensor {T.shape}")
        print(f"residual {residual(T, est)!r}")
        if ref is None:
            return EXIT_OK
        res = match_factors(est, ref, tol=args.match_tol)
    except (OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_IO
    except NoBijectionError as exc:
        _err(f"NoBijection: {exc}")
        return EXIT_DIAG
    print("permutation " + " ".join(str(p + 1) for p in res.permutation))
    for name, row in zip("ABC", res.scalings):
        print(f"scaling_{name} " + " ".join(f"{x:.6g}" for x in row))
    print(f"max_column_error {format_float(res.max_column_error)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cpdgevd", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="decompose a tensor file")
    d.add_argument("--input", required=True)
    d.add_argument("--rank", type=int, required=True)
    d.add_argument("--algorithm", choices=("auto", "alg1", "alg2"), default="auto")
    d.add_argument("--kc", type=int, default=None, help="declared k-rank of the third factor")
    d.add_argument("--tol", type=float, default=None, help="residual tolerance (default 1e-8)")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--output", required=True)
    d.set_defaults(func=cmd_decompose)

    g = sub.add_parser("generate", help="write a seeded random problem")
    g.add_argument("--dims", type=_parse_dims, required=True)
    g.add_argument("--rank", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kc", type=int, default=None)
    g.add_argument("--output", required=True)
    g.add_argument("--factors", default=None, help="also write the true factors here")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("selftest", help="run the property suites")
    s.add_argument("--suite", choices=("quick", "full"), default="quick")
    s.set_defaults(func=cmd_selftest)

    v = sub.add_parser("verify", help="residual and factor matching")
    v.add_argument("--tensor", required=True)
    v.add_argument("--factors", required=True)
    v.add_argument("--reference", default=None)
    v.add_argument("--match-tol", type=float, default=1e-2, dest="match_tol")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; those count as argument errors here
        return EXIT_OK if exc.code == 0 else EXIT_IO
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
