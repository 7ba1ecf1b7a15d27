"""Command-line front end operating on JSON system files.

Exit status: 0 when the question was decided (either way), 1 on usage
errors, 2 on numerical failures, 3 on unsupported system structure
(defective system matrix, or an operation that needs a different spectrum).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .control import optimal_controller
from .exceptions import (
    Defective,
    Infeasible,
    LtisymError,
    MinimalityError,
    NotSymmetrizable,
    ParseError,
    PatternLimitExceeded,
    PreconditionFailed,
    SingularityError,
    SolverFailure,
    WrongStructure,
)
from .spectral import eig_structure, kernel, khatri_rao, matrix_rank
from .statespace import (
    StateSpace,
    TankParams,
    dump_system,
    load_system,
    quadruple_tank,
    random_symmetric_system,
    system_matrix,
)
from .symmetrizability import (
    NecessaryVerdict,
    achievable_signatures,
    certificate_to_json,
    decide_distinct_real,
    necessary_test,
    solution_subspace,
    symmetrize,
)
from .symmetry import check_external_symmetry, check_internal_symmetry

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_STRUCTURE = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit with status 1
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ltisym", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ltisym {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_system=True):
        if with_system:
            p.add_argument("system", help="path to a JSON system file")
        p.add_argument("--tol", type=float, default=None,
                       help="override the decision tolerances (relative)")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument("--format", choices=["json", "text"], default="text",
                       help="report format (default: text)")

    p = sub.add_parser("analyze", help="symmetry and symmetrizability report")
    common(p)

    p = sub.add_parser("symmetrize", help="compute gains and the transformed system")
    common(p)
    p.add_argument("--signature", type=int, default=None,
                   help="target signature of the symmetrized system")
    p.add_argument("--complete", action="store_true",
                   help="require a positive definite certificate (identity signature)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches")

    p = sub.add_parser("signatures", help="enumerate achievable signatures")
    common(p)
    p.add_argument("--cap", type=int, default=12, help="enumeration size cap on n+m")

    p = sub.add_parser("controller", help="closed-form optimal output feedback")
    common(p)
    p.add_argument("--alpha", type=float, default=1.0,
                   help="control effort weight (positive)")

    p = sub.add_parser("tank", help="emit a quadruple-tank system as JSON")
    for name, default in (
        ("T1", 10.0), ("T2", 10.0), ("T3", 5.0), ("T4", 5.0),
        ("A1", 1.0), ("A2", 1.0), ("A3", 1.0), ("A4", 1.0),
        ("k1", 1.0), ("k2", 1.0), ("kc", 1.0),
        ("gamma1", 0.7), ("gamma2", 0.6),
    ):
        p.add_argument(f"--{name}", type=float, default=default)
    p.add_argument("--out", default=None)

    p = sub.add_parser("random", help="emit a random internally symmetric system")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sigma", default=None,
                   help="comma-separated +/-1 entries of the signature diagonal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    return parser


def _emit(text: str, out_path) -> None:
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load(path: str) -> StateSpace:
    p = Path(path)
    if not p.exists():
        raise _UsageError(f"no such file: {path}")
    return load_system(p.read_text())


def _fmt_sig(diag) -> str:
    return "[" + " ".join(f"{int(s):+d}" for s in diag) + "]"


def _cmd_analyze(args) -> int:
    ss = _load(args.system)
    sym_tol = args.tol if args.tol is not None else 1e-9
    rank_tol = args.tol if args.tol is not None else 1e-10

    report: dict = {"n": ss.n, "m": ss.m}
    sig_e = check_external_symmetry(ss, sym_tol)
    report["external"] = {
        "symmetric": sig_e is not None,
        "sigma_e": None if sig_e is None else [int(s) for s in sig_e.diag],
    }
    P = system_matrix(ss)
    sig = check_internal_symmetry(P, sym_tol)
    report["internal"] = {
        "symmetric": sig is not None,
        "sigma": None if sig is None else [int(s) for s in sig.diag],
    }
    es = eig_structure(P)
    kr = khatri_rao(es.Z, es.W, es.t)
    verdict = necessary_test(P, rank_tol)
    report["eigenvalue_groups"] = {
        "sizes": list(es.t),
        "real_distinct": es.is_real_distinct,
    }
    report["rank_test"] = {
        "verdict": verdict.value,
        "rank": matrix_rank(kr, rank_tol),
        "columns": kr.shape[1],
    }
    if es.is_real_distinct:
        dim = kernel(kr, rank_tol).shape[1]
        report["kernel_dimension"] = dim
        try:
            sigs = sorted(achievable_signatures(P, tol=rank_tol))
            report["symmetrizable"] = bool(sigs)
        except PatternLimitExceeded:
            sigs = None
            try:  # above the cap, decide existence without enumerating
                decide_distinct_real(P, tol=rank_tol)
                report["symmetrizable"] = True
            except NotSymmetrizable:
                report["symmetrizable"] = False
            except PatternLimitExceeded:
                report["symmetrizable"] = None
        report["signatures"] = sigs
    else:
        sub = solution_subspace(P, rank_tol)
        report["kernel_dimension"] = sub.dim
        report["signatures"] = None
        if sub.dim == 0:
            report["symmetrizable"] = False
        else:
            rng = np.random.default_rng(0)
            best = 0.0
            for _ in range(32):
                Q = sum(float(c) * Qk for c, Qk in zip(rng.standard_normal(sub.dim), sub.basis))
                sv = np.linalg.svd(Q, compute_uv=False)
                best = max(best, sv[-1] / sv[0] if sv[0] > 0 else 0.0)
            report["symmetrizable"] = bool(best > 1e-8)

    if args.format == "json":
        _emit(json.dumps(report), args.out)
    else:
        lines = [f"system: n={ss.n} m={ss.m}"]
        ext = report["external"]
        lines.append(
            "external symmetry: "
            + (f"yes, sigma_e={_fmt_sig(ext['sigma_e'])}" if ext["symmetric"] else "no")
        )
        internal = report["internal"]
        lines.append(
            "internal symmetry: "
            + (f"yes, sigma={_fmt_sig(internal['sigma'])}" if internal["symmetric"] else "no")
        )
        eg = report["eigenvalue_groups"]
        kind = "all real distinct" if eg["real_distinct"] else "with repeats or complex pairs"
        lines.append(f"eigenvalue groups: sizes {eg['sizes']} ({kind})")
        rt = report["rank_test"]
        lines.append(f"rank test: {rt['verdict']} (rank {rt['rank']} of {rt['columns']} columns)")
        lines.append(f"kernel dimension: {report['kernel_dimension']}")
        if report["symmetrizable"] is None:
            lines.append("symmetrizable: undecided (enumeration cap)")
        else:
            lines.append("symmetrizable: " + ("yes" if report["symmetrizable"] else "no"))
        if report["signatures"]:
            lines.append("achievable signatures: " + " ".join(str(s) for s in report["signatures"]))
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _cmd_symmetrize(args) -> int:
    ss = _load(args.system)
    if args.signature is not None:
        size = ss.n + ss.m
        if abs(args.signature) > size or (size - args.signature) % 2 != 0:
            raise _UsageError(
                f"--signature {args.signature} is incompatible with n+m={size} "
                "(must match its parity and magnitude bound)"
            )
    tol = args.tol if args.tol is not None else 1e-10
    try:
        transformed, cert = symmetrize(
            ss, target_signature=args.signature, complete=args.complete,
            tol=tol, seed=args.seed,
        )
    except (NotSymmetrizable, Infeasible) as exc:
        _emit(json.dumps({"symmetrizable": False, "reason": str(exc)}), args.out)
        return EXIT_OK
    doc = {
        "symmetrizable": True,
        "certificate": json.loads(certificate_to_json(cert)),
        "system": json.loads(dump_system(transformed)),
    }
    _emit(json.dumps(doc), args.out)
    return EXIT_OK


def _cmd_signatures(args) -> int:
    ss = _load(args.system)
    tol = args.tol if args.tol is not None else 1e-10
    sigs = sorted(achievable_signatures(system_matrix(ss), cap=args.cap, tol=tol))
    if args.format == "json":
        _emit(json.dumps({"signatures": sigs}), args.out)
    else:
        _emit("achievable signatures: " + (" ".join(str(s) for s in sigs) if sigs else "none"),
              args.out)
    return EXIT_OK


def _cmd_controller(args) -> int:
    ss = _load(args.system)
    if args.alpha <= 0:
        raise _UsageError("--alpha must be positive")
    try:
        result = optimal_controller(ss, alpha=args.alpha)
    except PreconditionFailed as exc:
        _emit(json.dumps({"controller": None, "reason": str(exc)}), args.out)
        return EXIT_OK
    doc = {
        "gain": result.gain.tolist(),
        "alpha": result.alpha,
        "R": result.R.tolist(),
        "S": result.S.tolist(),
    }
    if args.format == "json":
        _emit(json.dumps(doc), args.out)
    else:
        lines = [f"alpha: {result.alpha!r}", "gain:"]
        lines += ["  " + " ".join(repr(v) for v in row) for row in result.gain.tolist()]
        lines.append("R:")
        lines += ["  " + " ".join(repr(v) for v in row) for row in result.R.tolist()]
        lines.append("S:")
        lines += ["  " + " ".join(repr(v) for v in row) for row in result.S.tolist()]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _cmd_tank(args) -> int:
    params = TankParams(
        T1=args.T1, T2=args.T2, T3=args.T3, T4=args.T4,
        A1=args.A1, A2=args.A2, A3=args.A3, A4=args.A4,
        k1=args.k1, k2=args.k2, kc=args.kc,
        gamma1=args.gamma1, gamma2=args.gamma2,
    )
    _emit(dump_system(quadruple_tank(params)), args.out)
    return EXIT_OK


def _cmd_random(args) -> int:
    sigma = None
    if args.sigma is not None:
        try:
            sigma = [int(v) for v in args.sigma.split(",")]
        except ValueError:
            raise _UsageError("--sigma must be comma-separated +/-1") from None
    _emit(dump_system(random_symmetric_system(args.n, args.m, sigma, seed=args.seed)),
          args.out)
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "symmetrize": _cmd_symmetrize,
    "signatures": _cmd_signatures,
    "controller": _cmd_controller,
    "tank": _cmd_tank,
    "random": _cmd_random,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (_UsageError, ParseError, ValueError, MinimalityError, PatternLimitExceeded) as exc:
        print(f"ltisym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Defective, WrongStructure) as exc:
        print(f"ltisym: unsupported structure: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except (SolverFailure, SingularityError, np.linalg.LinAlgError) as exc:
        print(f"ltisym: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except LtisymError as exc:
        print(f"ltisym: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
