"""``qnet`` command-line entry point.

Every subcommand prints one JSON report to stdout. Exit status is 0 when
all requested checks pass, 1 when a check fails and 2 on rejected input.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from ._config import DEFAULT_TOLERANCE
from .algorithms import grover, qft, shor
from .compiler import exchange_form
from .exceptions import QNetError
from .linalg import load_operator
from .network import count_elements, materialize_network, q_of, save_network
from .report import emit_report
from . import schrodinger as sch
from .utils.validation import as_complex, check_vector
from .verify import SCOPES, run_verify_suite

__all__ = ["build_parser", "main"]


def _global_flags(parser, suppress, seed=True):
    # Sub-parsers use SUPPRESS so a flag given before the subcommand survives.
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    if seed:
        parser.add_argument("--seed", type=int, default=d(0), help="RNG seed (default 0)")
    parser.add_argument("--tolerance", type=float, default=d(DEFAULT_TOLERANCE),
                        help="pass/fail bound for checks (default 1e-10)")
    parser.add_argument("--output", choices=("json", "pretty"), default=d("json"))


def build_parser():
    p = argparse.ArgumentParser(prog="qnet", description="Build, run and verify quantum networks.")
    p.add_argument("--version", action="version", version=f"qnet {__version__}")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help, seed=True):
        sp = sub.add_parser(name, help=help)
        _global_flags(sp, suppress=True, seed=seed)
        return sp

    sp = add("verify", "run the invariant suite")
    sp.add_argument("--scope", choices=SCOPES + ("all",), default="all")

    sp = add("compile", "compile a matrix JSON file into a network JSON file")
    sp.add_argument("input", help="matrix JSON with rows, cols and [re, im] entries")
    sp.add_argument("-o", "--out", required=True, help="network JSON destination")
    sp.add_argument("--form", choices=("natural", "exchange"), default="natural")
    sp.add_argument("--threshold", type=float, default=0.0)

    sp = add("qft", "build the QFT network")
    sp.add_argument("--qubits", type=int, required=True)
    sp.add_argument("--verify", action="store_true", help="diff against the dense matrix")

    sp = add("grover", "run Grover search")
    sp.add_argument("--qubits", type=int, required=True)
    sp.add_argument("--target", type=int, required=True)
    sp.add_argument("--iterations", type=int, default=None, help="default floor(pi sqrt(2^k) / 4)")
    sp.add_argument("--trace", action="store_true", help="include per-iteration probabilities")
    sp.add_argument("--verify", action="store_true", help="diff against the dense oracle")

    sp = add("shor", "factor N with the Shor network", seed=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--qubits", type=int, default=None)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    mode.add_argument("--fixed-m", type=int, default=None)
    mode.add_argument("--distribution", action="store_true")

    sp = add("schrodinger", "Euler-network Schrodinger evolution")
    sp.add_argument("--grid", type=int, required=True)
    sp.add_argument("--length", type=float, required=True)
    sp.add_argument("--mass", type=float, default=1.0)
    sp.add_argument("--potential", default="zero")
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--initial", default=None,
                    help="gaussian:x0,sigma,k0 | basis:m | file:path (default centred gaussian)")
    sp.add_argument("--compare-exact", action="store_true")
    sp.add_argument("--renormalize", action="store_true")
    return p


def _cmd_verify(args):
    rep = run_verify_suite(args.scope, args.seed, args.tolerance)
    # Wall time is left out so identical flags give identical bytes.
    body = {"suite_name": rep.suite_name, "checks": rep.checks, "notes": rep.notes,
            "passed": rep.passed}
    return body, "VerificationReport", rep.passed


def _cmd_compile(args):
    U = load_operator(args.input)
    net = exchange_form(U) if args.form == "exchange" else q_of(U, threshold=args.threshold)
    save_network(net, args.out)
    body = {"input": args.input, "output": args.out, "form": args.form, "dim": net.dim,
            "elements": count_elements(net)}
    return body, "CompileReport", True


def _cmd_qft(args):
    net = qft.qft_network(args.qubits)
    body = {"qubits_k": args.qubits, "dim": net.dim, "elements": count_elements(net)}
    ok = True
    if args.verify:
        err = float(np.abs(materialize_network(net)[net.dim:, :net.dim] - qft.qft_matrix(args.qubits)).max())
        ok = err <= args.tolerance
        body.update(max_abs_error=err, tolerance=args.tolerance, passed=ok)
    return body, "QFTReport", ok


def _cmd_grover(args):
    it = "auto" if args.iterations is None else args.iterations
    rep = grover.grover_run(args.qubits, args.target, it)
    body = {"qubits_k": rep.qubits_k, "target_j": rep.target_j, "iterations": rep.iterations,
            "success_probability": rep.success_probability}
    if args.trace:
        body["per_iteration_probs"] = rep.per_iteration_probs
    ok = True
    if args.verify:
        ref = grover.grover_oracle_probabilities(args.qubits, args.target, rep.iterations)
        err = float(np.abs(np.array(rep.per_iteration_probs) - ref).max())
        ok = err <= args.tolerance
        body.update(max_abs_error=err, tolerance=args.tolerance, passed=ok)
    return body, "GroverReport", ok


def _cmd_shor(args):
    if args.distribution:
        rep = shor.shor_run(args.n, args.a, args.qubits, mode="distribution")
    elif args.fixed_m is not None:
        rep = shor.shor_run(args.n, args.a, args.qubits, mode="fixed", fixed_m=args.fixed_m, seed=args.seed)
    else:
        rep = shor.shor_run(args.n, args.a, args.qubits, mode="sample", seed=args.seed)
    return rep, "ShorReport", True


def _initial_state(g, text):
    if text is None:
        return sch.gaussian_packet(g, g.length_L / 2, 1.0)
    kind, _, arg = text.partition(":")
    try:
        if kind == "gaussian":
            x0, sigma, k0 = (float(v) for v in arg.split(","))
            return sch.gaussian_packet(g, x0, sigma, k0)
        if kind == "basis":
            return sch.basis_state(g, int(arg))
        if kind == "file":
            with open(arg) as fh:
                raw = [as_complex(v, "initial amplitude") for v in json.load(fh)]
            psi = check_vector(raw, dim=g.points_N, name="initial state")
            return psi / np.linalg.norm(psi)
    except ValueError as exc:
        raise QNetError(f"bad initial state {text!r}: {exc}") from exc
    raise QNetError(f"unknown initial state {text!r}")


def _cmd_schrodinger(args):
    g = sch.Grid(args.grid, args.length)
    spec = sch.EvolutionSpec(args.mass, args.dt, args.t, sch.parse_potential(args.potential))
    psi0 = _initial_state(g, args.initial)
    final, norms = sch.run_evolution(g, spec, psi0, renormalize=args.renormalize)
    body = {"grid": args.grid, "length": args.length, "mass": args.mass, "potential": args.potential,
            "dt": args.dt, "total_time": args.t, "steps": spec.steps, "renormalized": args.renormalize,
            "final_state": final, "norm_history": norms}
    if args.compare_exact:
        cmp = sch.compare_exact(g, spec, psi0)
        body.update(global_error=cmp["global_error"], convergence=cmp["convergence"],
                    norm_growth_residual=cmp["norm_growth_residual"])
    return body, "SchrodingerReport", True


_COMMANDS = {
    "verify": _cmd_verify,
    "compile": _cmd_compile,
    "qft": _cmd_qft,
    "grover": _cmd_grover,
    "shor": _cmd_shor,
    "schrodinger": _cmd_schrodinger,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        body, kind, ok = _COMMANDS[args.command](args)
        text = emit_report(body, kind=kind, pretty=args.output == "pretty")
    except (QNetError, OSError, ValueError) as exc:
        print(f"qnet {args.command}: error: {exc}", file=sys.stderr)
        return 2
    print(text)
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
