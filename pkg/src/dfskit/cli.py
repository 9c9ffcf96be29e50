"""Command line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad usage.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import algebra, encoding, gates, noise, search
from .serialize import dumps, matrix_to_json

log = logging.getLogger("dfskit")

DEFAULT_TOL = 1e-10


@dataclass
class RunConfig:
    d: int = 3
    n: int = 3
    tolerance: float = DEFAULT_TOL
    seed: int = 0
    out: str | None = None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_complex(text: str) -> complex:
    """Accept ``re:im`` or a Python complex literal such as ``0.6+0.8j``."""
    text = text.strip()
    try:
        if ":" in text:
            re_, im = text.split(":")
            return complex(float(re_), float(im))
        return complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _parse_gauge(text: str) -> np.ndarray:
    values = [_parse_complex(x) for x in text.split(",") if x.strip()]
    if len(values) != 8:
        raise argparse.ArgumentTypeError(f"gauge needs 8 comma-separated entries, got {len(values)}")
    return np.array(values)


def cmd_basis(args, cfg: RunConfig) -> int:
    basis = algebra.generate_basis(cfg.d)
    tensors = algebra.structure_constants(basis)
    doc = {"basis": algebra.basis_to_json(basis), "tensors": algebra.tensors_to_json(tensors)}
    _emit(dumps(doc) + "\n", cfg.out)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    basis = algebra.generate_basis(cfg.d)
    tensors = algebra.structure_constants(basis)
    ident = algebra.verify_algebra_identities(tensors, cfg.tolerance, basis)
    table = gates.commutation_table(basis)
    compat = noise.verify_n_qudit_compat(basis, cfg.n, cfg.tolerance)
    ok_table = all(v <= cfg.tolerance for v in table.values())
    passed = ident.passed and ok_table and compat.passed
    doc = {
        "d": cfg.d, "n": cfg.n, "tolerance": cfg.tolerance, "pass": passed,
        "identities": ident.residuals,
        "commutation_table": table,
        "informational": gates.printed_eD_residuals(basis),
        "n_qudit_compat": compat.residuals,
    }
    _emit(dumps(doc) + "\n", cfg.out)
    return 0 if passed else 1


def cmd_search(args, cfg: RunConfig) -> int:
    mode = args.mode
    if mode == "auto":
        mode = "full" if (cfg.d**2) ** cfg.n <= 729 else "verify"
    if mode == "full":
        report = search.exhaustive_search_report(cfg.d, cfg.n, args.threshold)
    else:
        report = search.verification_report(cfg.d, cfg.n)
    report["mode"] = mode
    residuals = report.get("residuals", [])
    passed = all(r <= cfg.tolerance for r in residuals)
    report["pass"] = passed
    _emit(dumps(report) + "\n", cfg.out)
    return 0 if passed else 1


def cmd_gate(args, cfg: RunConfig) -> int:
    basis = algebra.generate_basis(cfg.d)
    if args.kind in ("swap", "exchange"):
        n = 2
    else:
        n = 3
    u = gates.gate_matrix(basis, args.kind, args.t, n=n)
    doc = {"kind": args.kind, "d": cfg.d, "n": n,
           "t": args.t if args.t is not None else (np.pi / 4 if args.kind == "swap" else 0.0),
           "matrix": matrix_to_json(u)}
    _emit(dumps(doc) + "\n", cfg.out)
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    if cfg.d != 3 or cfg.n != 3:
        log.error("simulate supports only the three-qutrit encoding (d=3, n=3)")
        return 2
    state = encoding.encode(args.a, args.b, args.gauge)
    traj = noise.run_trajectory(state, args.steps, cfg.seed)
    _emit(traj.to_jsonl(), cfg.out)
    return 0 if traj.max_leak() < cfg.tolerance else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=3, help="qudit dimension (default 3)")
    common.add_argument("--n", type=int, default=3, help="number of qudits (default 3)")
    common.add_argument("--tol", type=float, default=None,
                        help="pass tolerance (default $DFSKIT_TOL or 1e-10)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="dfskit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", parents=[common], help="write Gell-Mann basis and f/d tensors")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify", parents=[common],
                       help="identity suite, commutation table and n-qudit sweep")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="compatible-Hamiltonian search")
    p.add_argument("--mode", choices=("auto", "full", "verify"), default="auto")
    p.add_argument("--threshold", type=float, default=1e-9,
                   help="relative singular-value cutoff for the null space")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gate", parents=[common], help="write a gate matrix")
    p.add_argument("--kind", required=True, choices=("xbar", "zbar", "ybar", "swap", "exchange"))
    p.add_argument("--t", type=float, default=None)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("simulate", parents=[common], help="collective-noise trajectory (JSON lines)")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--a", type=_parse_complex, default=complex(1))
    p.add_argument("--b", type=_parse_complex, default=complex(0))
    p.add_argument("--gauge", type=_parse_gauge, default=None,
                   help="8 comma-separated complex weights, e.g. 1:0,0:0,... or 0.5+0.1j,...")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    tol = args.tol
    if tol is None:
        env = os.environ.get("DFSKIT_TOL")
        try:
            tol = float(env) if env else DEFAULT_TOL
        except ValueError:
            parser.error(f"DFSKIT_TOL is not a number: {env!r}")
    if args.d < 2:
        parser.error("--d must be at least 2")
    if args.n < 2:
        parser.error("--n must be at least 2")
    if tol <= 0:
        parser.error("--tol must be positive")
    if args.command == "verify" and args.d**args.n > 1024:
        parser.error("verify is limited to d**n <= 1024")
    if args.command == "simulate" and args.steps < 0:
        parser.error("--steps must be non-negative")
    cfg = RunConfig(args.d, args.n, tol, args.seed, args.out)
    try:
        return args.func(args, cfg)
    except ValueError as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
