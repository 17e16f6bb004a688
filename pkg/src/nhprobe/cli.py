"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical/runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import dynamics, sweep
from .errors import (CapacityError, ConfigError, NotPositiveSemidefiniteError,
                     NotTopologicalError, SingularParameterError,
                     TraceUnderflowError)

_NUMERICAL_ERRORS = (NotPositiveSemidefiniteError, NotTopologicalError,
                     TraceUnderflowError, SingularParameterError,
                     np.linalg.LinAlgError, ArithmeticError, ValueError)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            config = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    return config


def _parse_floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _complex_pairs(array) -> list:
    return [[float(np.real(z)), float(np.imag(z))] for z in np.asarray(array).ravel()]


def _cmd_quench(args) -> int:
    result = sweep.run_quench(_load_config(args.config), args.output)
    print(f"steady average over {list(result.window)}: {result.steady_average:.6f}")
    return 0


def _cmd_sweep(args) -> int:
    diagram = sweep.run_sweep(_load_config(args.config), args.output, jobs=args.jobs)
    for warning in diagram.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    finite = np.isfinite(diagram.lbar)
    print(f"{diagram.lbar.size} points ({int(finite.sum())} ok), "
          f"lbar range [{np.nanmin(diagram.lbar):.4f}, {np.nanmax(diagram.lbar):.4f}]")
    return 0


def _cmd_zero_modes(args) -> int:
    print(json.dumps(sweep.describe_zero_modes(_load_config(args.config)),
                     sort_keys=True, indent=1))
    return 0


def _cmd_validate_probe(args) -> int:
    print(json.dumps(sweep.validate_probe(_load_config(args.config)),
                     sort_keys=True, indent=1))
    return 0


def _cmd_oracle(args) -> int:
    if args.kind == "jordan":
        amplitudes = [complex(v) for v in _parse_floats(args.amplitudes)]
        psi = dynamics.jordan_oracle_state(amplitudes, args.lam, args.energy, args.time)
        out = {"kind": "jordan", "psi_re_im": _complex_pairs(psi)}
    elif args.kind == "two-level":
        rho = dynamics.two_level_oracle_rho(args.lam, args.lam_prime, args.time)
        out = {"kind": "two-level", "rho_re_im": _complex_pairs(rho), "dim": 2}
    else:
        energies = _parse_floats(args.energies)
        rho = dynamics.trivial_phase_firstorder(energies, args.lam, args.lam_prime,
                                                args.time)
        out = {"kind": "trivial", "rho_re_im": _complex_pairs(rho),
               "dim": len(energies)}
    print(json.dumps(out, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhprobe",
        description="Loschmidt-echo probes of topological phases under "
                    "non-Hermitian quenches")
    sub = parser.add_subparsers(dest="command", required=True)

    p_quench = sub.add_parser("quench", help="run one quench from a JSON config")
    p_quench.add_argument("config")
    p_quench.add_argument("-o", "--output", default=".", help="output directory")
    p_quench.set_defaults(func=_cmd_quench)

    p_sweep = sub.add_parser("sweep", help="run a 1D/2D parameter sweep")
    p_sweep.add_argument("config")
    p_sweep.add_argument("-o", "--output", default=".", help="output directory")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_zm = sub.add_parser("zero-modes", help="extract BdG zero modes as JSON")
    p_zm.add_argument("config")
    p_zm.set_defaults(func=_cmd_zero_modes)

    p_vp = sub.add_parser("validate-probe",
                          help="Jordan-form report of a probe as JSON")
    p_vp.add_argument("config")
    p_vp.set_defaults(func=_cmd_validate_probe)

    p_or = sub.add_parser("oracle", help="print closed-form oracle values as JSON")
    or_sub = p_or.add_subparsers(dest="kind", required=True)
    p_j = or_sub.add_parser("jordan")
    p_j.add_argument("--amplitudes", required=True,
                     help="comma-separated initial amplitudes")
    p_j.add_argument("--lam", type=float, required=True)
    p_j.add_argument("--energy", type=float, default=0.0)
    p_j.add_argument("--time", type=float, required=True)
    p_t = or_sub.add_parser("two-level")
    p_t.add_argument("--lam", type=float, required=True)
    p_t.add_argument("--lam-prime", type=float, required=True)
    p_t.add_argument("--time", type=float, required=True)
    p_f = or_sub.add_parser("trivial")
    p_f.add_argument("--energies", required=True,
                     help="comma-separated ascending level energies")
    p_f.add_argument("--lam", type=float, required=True)
    p_f.add_argument("--lam-prime", type=float, default=0.0)
    p_f.add_argument("--time", type=float, required=True)
    p_or.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CapacityError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
