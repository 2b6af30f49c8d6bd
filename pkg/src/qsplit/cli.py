"""Command-line front end.

Results go to stdout (or ``--out``); diagnostics go to stderr as a single
``error: <code>: <message>`` line. Exit codes: 0 success, 2 malformed input,
3 infeasible or linearly dependent verdict where a hard check was requested,
4 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .documents import (
    MalformedDocument,
    dumps,
    encode_complex,
    encode_matrix,
    family_from_doc,
    load_json,
    machine_from_doc,
    machine_to_doc,
    report_to_doc,
)
from .errors import (
    AngleOutOfRange,
    ConvergenceError,
    DimMismatch,
    DuplicateState,
    GramMismatch,
    IndexOutOfRange,
    Infeasible,
    LengthMismatch,
    NotHermitian,
    NotPSD,
    QsplitError,
    RankDeficient,
    ZeroSuperposition,
)
from .feasibility import (
    ProductMode,
    max_uniform_gamma,
    maximize_gammas,
    paper_conditions_report,
    reality_defects,
)
from .gram import build_triple, linear_independence
from .machine import construct_machine, verify_machine
from .numerics import PSD_TOL
from .simulator import nogo_witness, oracle_output_gram, run_split, sample_measurement
from .states import StateFamily

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERDICT = 3
EXIT_NUMERIC = 4

_INPUT_ERRORS = (
    MalformedDocument,
    AngleOutOfRange,
    DuplicateState,
    LengthMismatch,
    DimMismatch,
    IndexOutOfRange,
    ZeroSuperposition,
)
_VERDICT_ERRORS = (Infeasible, RankDeficient, GramMismatch)
_NUMERIC_ERRORS = (NotHermitian, NotPSD, ConvergenceError)

TOL_ENV = "QSPLIT_TOL"


class UsageError(QsplitError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return PSD_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol > 0.0:
        raise UsageError(f"{TOL_ENV} must be positive")
    return tol


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _family(args) -> StateFamily:
    return family_from_doc(load_json(args.family), normalize=args.normalize_angles)


def cmd_analyze(args, tol: float) -> int:
    family = _family(args)
    triple = build_triple(family)
    mode = ProductMode.parse(args.mode)
    if args.gammas is not None:
        gammas = _floats(args.gammas)
        gamma_source = "given"
    else:
        gammas = maximize_gammas(triple, mode, tol)
        gamma_source = "maximized"
    report = paper_conditions_report(triple, gammas, mode, tol)
    extra = {
        "gamma_source": gamma_source,
        "gamma_star": max_uniform_gamma(triple, mode, tol),
        "reality_defects_gamma_free": [float(x) for x in reality_defects(triple)],
    }
    _emit(dumps(report_to_doc(report, family, extra)), args.out)
    if args.require_feasible and not report.feasible:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_gamma(args, tol: float) -> int:
    family = _family(args)
    triple = build_triple(family)
    mode = ProductMode.parse(args.mode)
    doc = {"mode": mode, "tol": tol}
    if args.per_state:
        doc["gammas"] = [float(g) for g in maximize_gammas(triple, mode, tol)]
    else:
        doc["gamma_star"] = max_uniform_gamma(triple, mode, tol)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_construct(args, tol: float) -> int:
    family = _family(args)
    m = construct_machine(family, _floats(args.gammas), args.mode, tol)
    check = verify_machine(m)
    doc = machine_to_doc(m, check)
    doc["tol"] = tol
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_simulate(args, tol: float) -> int:
    m = machine_from_doc(load_json(args.machine))
    outcome = run_split(m, args.state_index)
    doc = {
        "mode": m.mode,
        "state_index": args.state_index,
        "gamma": float(m.gammas[args.state_index]),
        "success_prob": outcome.success_prob,
        "branch_probs": outcome.branch_probs,
        "post_state_defined": outcome.post_state_defined,
        "post_state": None if outcome.post_state is None else [encode_complex(z) for z in outcome.post_state],
        "fidelity_target": outcome.fidelity_target,
    }
    if args.shots is not None:
        doc["shots"] = args.shots
        doc["seed"] = args.seed
        doc["frequency"] = sample_measurement(m, args.state_index, args.shots, args.seed)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_witness(args, tol: float) -> int:
    m = machine_from_doc(load_json(args.machine))
    parts = _floats(args.coeffs)
    if len(parts) != 2 * m.n:
        raise LengthMismatch(f"--coeffs needs {2 * m.n} numbers (re,im per state), got {len(parts)}")
    d = [complex(parts[2 * k], parts[2 * k + 1]) for k in range(m.n)]
    w = nogo_witness(m, d)
    doc = {
        "mode": m.mode,
        "coefficients": w.coefficients,
        "superposition_theta": w.superposition_angles[0],
        "superposition_phi": w.superposition_angles[1],
        "success_amplitude": w.success_amplitude,
        "fidelity": w.fidelity,
        "distance": w.distance,
        "ideal_target": [encode_complex(z) for z in w.ideal_target],
        "propagated": [encode_complex(z) for z in w.propagated],
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK


def scan_rows(theta1: float, phi1: float, theta_steps: int, phi_steps: int, mode, tol: float):
    """Yield ``(theta1, phi1, theta2, phi2, gamma_star)`` in row-major grid order.

    theta2 runs over ``[0, pi]`` inclusive, phi2 over ``[0, 2 pi)``. A cell
    that coincides with the fixed state is reported with gamma_star 0.
    """
    for a in range(theta_steps):
        theta2 = 0.0 if theta_steps == 1 else math.pi * a / (theta_steps - 1)
        for b in range(phi_steps):
            phi2 = 2.0 * math.pi * b / phi_steps
            try:
                family = StateFamily([(theta1, phi1), (theta2, phi2)])
            except DuplicateState:
                yield theta1, phi1, theta2, phi2, 0.0
                continue
            yield theta1, phi1, theta2, phi2, max_uniform_gamma(build_triple(family), mode, tol)


def cmd_scan(args, tol: float) -> int:
    if args.theta2_steps < 1 or args.phi2_steps < 1:
        raise UsageError("grid step counts must be at least 1")
    # Validate the fixed member up front so a bad angle is an input error.
    StateFamily([(args.fixed_theta1, args.fixed_phi1)])
    mode = ProductMode.parse(args.mode)
    rows = scan_rows(args.fixed_theta1, args.fixed_phi1, args.theta2_steps, args.phi2_steps, mode, tol)
    handle = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["theta1", "phi1", "theta2", "phi2", "gamma_star"])
        for row in rows:
            writer.writerow([repr(float(x)) for x in row])
    finally:
        if args.out:
            handle.close()
    return EXIT_OK


def cmd_oracle(args, tol: float) -> int:
    family = _family(args)
    gammas = _floats(args.gammas)
    o = oracle_output_gram(family, gammas, args.mode, tol)
    doc = {
        "mode": ProductMode.parse(args.mode),
        "tol": tol,
        "gammas": gammas,
        "constructed": encode_matrix(o.constructed),
        "matrix_mode_prediction": encode_matrix(o.matrix_mode_prediction),
        "tensor_mode_prediction": encode_matrix(o.tensor_mode_prediction),
        "matrix_mode_deviation": o.matrix_mode_deviation,
        "tensor_mode_deviation": o.tensor_mode_deviation,
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_independence(args, tol: float) -> int:
    family = _family(args)
    ok, lam = linear_independence(family, tol)
    _emit(dumps({"independent": ok, "min_eig_D": lam, "tol": tol}), args.out)
    return EXIT_OK if ok or not args.require_independent else EXIT_VERDICT


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qsplit", description="Probabilistic splitting of qubit information.")
    p.add_argument("--version", action="version", version=f"qsplit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, family=True):
        if family:
            sp.add_argument("family", help="JSON family document")
            sp.add_argument("--normalize-angles", action="store_true",
                            help="wrap out-of-range angles onto the canonical chart")
        sp.add_argument("--mode", default="tensor", choices=["matrix", "tensor"])
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("analyze", help="feasibility report")
    common(sp)
    sp.add_argument("--gammas", default=None, help="g1,g2,... (default: maximized)")
    sp.add_argument("--require-feasible", action="store_true", help="exit 3 when infeasible")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("gamma", help="maximal success probabilities")
    common(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--uniform", action="store_true", default=True)
    g.add_argument("--per-state", action="store_true")
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("construct", help="build and save the splitting machine")
    common(sp)
    sp.add_argument("--gammas", required=True)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("simulate", help="run a saved machine on one input")
    sp.add_argument("machine")
    sp.add_argument("--state-index", type=int, required=True)
    sp.add_argument("--shots", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("witness", help="linearity witness on a superposed input")
    sp.add_argument("machine")
    sp.add_argument("--coeffs", required=True, help="re1,im1,re2,im2,... (use --coeffs=... for negatives)")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("scan", help="uniform gamma over a grid of second states")
    common(sp, family=False)
    sp.add_argument("--theta2-steps", type=int, required=True)
    sp.add_argument("--phi2-steps", type=int, required=True)
    sp.add_argument("--fixed-theta1", type=float, required=True)
    sp.add_argument("--fixed-phi1", type=float, required=True)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("oracle", help="compare kernel predictions with constructed Grams")
    common(sp)
    sp.add_argument("--gammas", required=True)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("independence", help="linear independence of the family")
    common(sp)
    sp.add_argument("--require-independent", action="store_true")
    sp.set_defaults(func=cmd_independence)
    return p


def _fail(code: str, message: str, status: int) -> int:
    first = str(message).splitlines()[0] if str(message) else ""
    sys.stderr.write(f"error: {code}: {first}\n")
    return status


def run_command(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        tol = args.tol if args.tol is not None else _default_tol()
        if not tol > 0.0:
            raise UsageError("--tol must be positive")
        return args.func(args, tol)
    except (UsageError, *_INPUT_ERRORS) as exc:
        return _fail(exc.code, exc, EXIT_INPUT)
    except _VERDICT_ERRORS as exc:
        return _fail(exc.code, exc, EXIT_VERDICT)
    except _NUMERIC_ERRORS as exc:
        return _fail(exc.code, exc, EXIT_NUMERIC)
    except QsplitError as exc:
        return _fail(exc.code, exc, EXIT_INPUT)
    except ValueError as exc:
        return _fail("invalid-value", exc, EXIT_INPUT)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail("numerical-failure", exc, EXIT_NUMERIC)


def main() -> None:
    sys.exit(run_command())
