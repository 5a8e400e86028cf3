"""Command-line interface: ``forge synth | compare | sweep | converge | tables``.

All outputs are UTF-8 JSON (default) or CSV, deterministic for a given config
and seed.  Exit codes: 0 success, 2 validation error, 3 numerical error
(branch cut, singular channel, or failed convergence).
"""

import argparse
import json
import sys

import numpy as np

from . import analytic
from .errors import (
    BranchCutError,
    ConvergenceError,
    SingularChannelError,
    ValidationError,
)
from .scenarios import (
    SweepSpec,
    angle_sweep,
    compare_methods,
    convergence_study,
    convergence_to_csv,
    precision_sweep,
    run_scenario,
    scenario_from_config,
    sweep_to_csv,
    two_qubit_reference_config,
    amplitude_damping_sweep_config,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

DEFAULT_STRENGTH_GRID = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1]


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _map_csv(m):
    lines = ["label,value"]
    for lab in sorted(m):
        lines.append(f"{lab},{float(m[lab])!r}")
    return "\n".join(lines) + "\n"


def _parse_grid(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad grid {text!r}: {exc}") from exc


def cmd_synth(args):
    cfg = _load_config(args.config)
    outputs = ["fidelities", "pl"]
    for flag in ("channel", "ptm", "breakdown"):
        if getattr(args, flag):
            outputs.append(flag)
    report = run_scenario(
        scenario_from_config(
            cfg, method=args.method, order=args.order, outputs=tuple(outputs)
        )
    )
    _emit(_json(report), args.output)


def cmd_compare(args):
    cfg = _load_config(args.config)
    report = compare_methods(cfg, method=args.method, order=args.order)
    _emit(_json(report), args.output)


def cmd_sweep(args):
    if args.config:
        base = _load_config(args.config)
    elif args.axis == "theta":
        base = two_qubit_reference_config()
    else:
        base = amplitude_damping_sweep_config()
    if args.grid is not None:
        grid = _parse_grid(args.grid)
    elif args.axis == "theta":
        grid = [k * np.pi / 16 for k in range(1, 17)]
    else:
        grid = list(DEFAULT_STRENGTH_GRID)
    spec = SweepSpec(args.axis, grid, base)
    report = angle_sweep(spec) if args.axis == "theta" else precision_sweep(spec)
    _emit(sweep_to_csv(report) if args.csv else _json(report), args.output)


def cmd_converge(args):
    strengths = _parse_grid(args.strengths) if args.strengths else None
    report = convergence_study(
        strengths=strengths, seed=args.seed, theta=args.theta, preset=args.preset
    )
    _emit(convergence_to_csv(report) if args.csv else _json(report), args.output)


def cmd_tables(args):
    th, w = args.theta, args.omega
    if args.scenario == "ad":
        out = analytic.ad_lambdas(args.gate, th, args.beta_down_l, args.beta_down_r, w)
    elif args.scenario == "pd":
        out = analytic.pd_lambdas(args.gate, th, args.beta_phi_l, args.beta_phi_r, w)
    elif args.scenario == "phase":
        out = analytic.phase_lambdas(
            args.gate, th, args.delta_iz, args.delta_zi, args.delta_zz, w
        )
    elif args.scenario == "spectator":
        if args.layout not in analytic.SPECTATOR_LAYOUTS:
            raise ValidationError(
                f"spectator tables need --layout from {analytic.SPECTATOR_LAYOUTS}"
            )
        out = analytic.spectator_lambdas(args.layout, args.gate, th, args.delta, w)
    elif args.scenario == "mirror":
        if args.layout not in analytic.MIRROR_LAYOUTS:
            raise ValidationError(
                f"mirror tables need --layout from {analytic.MIRROR_LAYOUTS}"
            )
        out = analytic.mirror_lambdas(args.layout, th, args.delta, w)
    elif args.scenario == "identity":
        tau = th / w
        out = {
            "weights": analytic.identity_weights(args.beta_down, args.beta_phi, tau),
            "lambdas": analytic.identity_lambdas(args.beta_down, args.beta_phi, tau),
        }
    else:  # xtheta
        out = {
            "lambdas": analytic.xtheta_lambdas(th, args.beta_down, args.beta_phi, w),
            "channel": analytic.xtheta_channel(
                th, args.beta_down, args.beta_phi, w
            ).tolist(),
        }
    if args.csv:
        if args.scenario == "identity":
            flat = {f"w_{k}": v for k, v in out["weights"].items()}
            flat.update(out["lambdas"])
        elif args.scenario == "xtheta":
            flat = out["lambdas"]
        else:
            flat = out
        _emit(_map_csv(flat), args.output)
    else:
        _emit(_json(out), args.output)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="forge",
        description="Synthesize, twirl, and fit gate noise channels from Lindblad models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="run the synthesis pipeline on a config")
    p.add_argument("config", help="path to a model config JSON file")
    p.add_argument("--method", choices=("exact", "magnus", "dyson"), default="exact")
    p.add_argument("--order", type=int, choices=(1, 2, 3, 4), default=4)
    p.add_argument("--channel", action="store_true", help="include channel matrices")
    p.add_argument("--ptm", action="store_true", help="include the noise-channel PTM")
    p.add_argument(
        "--breakdown", action="store_true", help="include per-mechanism analytic terms"
    )
    p.add_argument("--output", help="write to file instead of stdout")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compare", help="perturbative vs exact synthesis")
    p.add_argument("config")
    p.add_argument("--method", choices=("magnus", "dyson"), default="magnus")
    p.add_argument("--order", type=int, choices=(1, 2, 3, 4), default=2)
    p.add_argument("--output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="angle or noise-strength sweep")
    p.add_argument("--axis", choices=("theta", "strength"), required=True)
    p.add_argument(
        "--config",
        help="base config (default: CX reference for theta, damping-only for strength)",
    )
    p.add_argument("--grid", help="comma-separated grid values")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("converge", help="Magnus/Dyson convergence study")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--strengths", help="comma-separated strengths")
    p.add_argument("--theta", type=float, default=np.pi / 2)
    p.add_argument("--preset", default="cx")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("tables", help="print closed-form coefficient tables")
    p.add_argument(
        "scenario",
        choices=("ad", "pd", "phase", "spectator", "mirror", "identity", "xtheta"),
    )
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--gate", choices=analytic.GATES, default="cx")
    p.add_argument("--layout", help="spectator or mirror layout name")
    p.add_argument("--beta-down-l", type=float, default=1e-3)
    p.add_argument("--beta-down-r", type=float, default=1e-3)
    p.add_argument("--beta-phi-l", type=float, default=1e-3)
    p.add_argument("--beta-phi-r", type=float, default=1e-3)
    p.add_argument("--beta-down", type=float, default=1e-3)
    p.add_argument("--beta-phi", type=float, default=1e-3)
    p.add_argument("--delta-iz", type=float, default=1e-3)
    p.add_argument("--delta-zi", type=float, default=1e-3)
    p.add_argument("--delta-zz", type=float, default=1e-3)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_tables)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (BranchCutError, SingularChannelError, ConvergenceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
