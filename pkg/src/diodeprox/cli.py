"""Command-line interface.

Subcommands::

    diodeprox experiment  [--trials 200 --iterations 2000 ... --output mse.csv]
    diodeprox prox-curve  --mode l1|mcp [--start --stop --points ... --output curve.csv]
    diodeprox calibrate   --mode l1 --R 35  |  --mode mcp --Rp 1.04 --k 1.5

Any option can also come from ``--config FILE``, a ``key = value`` file with
``#`` comments whose keys are option names without the leading dashes.
Options given on the command line win over the file.
"""

import argparse
import sys

import numpy as np

from .diode import CircuitParams, DiodeParams, calibrate_l1, calibrate_mcp, v_out
from .harness import EnsembleConfig, run_experiment, standard_solvers, write_curves
from .noise import NoiseConfig, NoiseParams
from .proxops import McpParams, mcp_prox, soft_threshold

PROG = "diodeprox"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _add_diode(p):
    g = p.add_argument_group("diode")
    g.add_argument("--Is", type=float, default=1.4e-14, help="saturation current [A]")
    g.add_argument("--m", type=float, default=1.0, help="emission coefficient")
    g.add_argument("--VT", type=float, default=0.026, help="thermal voltage [V]")


def build_parser():
    parser = _Parser(prog=PROG, description="Diode-based approximate proximal operators for analog compressed sensing.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ex = sub.add_parser("experiment", help="Monte Carlo MSE-vs-iteration curves for the four algorithms")
    ex.add_argument("--config", help="key = value configuration file")
    ex.add_argument("--M", type=int, default=32, help="measurements")
    ex.add_argument("--N", type=int, default=64, help="signal length")
    ex.add_argument("--p", type=float, default=0.1, help="nonzero probability")
    ex.add_argument("--sigma2", type=float, default=1e-5, help="measurement noise variance")
    ex.add_argument("--trials", type=int, default=200)
    ex.add_argument("--iterations", type=int, default=2000)
    ex.add_argument("--seed", type=int, default=0, help="base seed")
    ex.add_argument("--lam", type=float, default=0.15, help="regularization weight")
    ex.add_argument("--epsilon", type=float, default=None, help="step size (default 0.99/lambda_max per problem)")
    ex.add_argument("--alpha", type=float, default=27.0, help="MCP shape for ista-mcp")
    ex.add_argument(
        "--alpha-relative", type=_bool, default=True,
        help="measure --alpha in units of the step size (default true)",
    )
    ex.add_argument("--R", type=float, default=35.0, help="diode-l1 shunt resistance [ohm]")
    ex.add_argument("--Rp", type=float, default=1.04, help="diode-mcp load resistance [ohm]")
    ex.add_argument("--k", type=float, default=1.5, help="diode-mcp fixed point")
    _add_diode(ex)
    ex.add_argument("--noise", type=_bool, default=True, help="circuit noise on/off")
    ex.add_argument("--amplifier-noise", type=_bool, default=True)
    ex.add_argument("--oem-noise", type=_bool, default=True)
    ex.add_argument("--eom-noise", type=_bool, default=True)
    ex.add_argument("--amp-var", type=float, default=3.84e-8, help="optical amplifier noise variance")
    ex.add_argument("--temperature", type=float, default=300.0, help="[K]")
    ex.add_argument("--bandwidth", type=float, default=1e10, help="[Hz]")
    ex.add_argument("--capacitance", type=float, default=None, help="[F], checked against bandwidth")
    ex.add_argument("--combined-resistance", type=float, default=None, help="[ohm]")
    ex.add_argument("--jobs", type=int, default=1, help="worker processes")
    ex.add_argument("--output", default="-", help="CSV path, '-' for stdout")

    pc = sub.add_parser("prox-curve", help="tabulate an ideal prox next to its diode approximation")
    pc.add_argument("--config", help="key = value configuration file")
    pc.add_argument("--mode", choices=("l1", "mcp"), default="l1")
    pc.add_argument("--start", type=float, default=-2.0)
    pc.add_argument("--stop", type=float, default=2.0)
    pc.add_argument("--points", type=int, default=801)
    pc.add_argument("--lam", type=float, default=0.0225)
    pc.add_argument("--epsilon", type=float, default=1.0)
    pc.add_argument("--alpha", type=float, default=27.0)
    pc.add_argument("--R", type=float, default=35.0, help="l1 mode shunt resistance")
    pc.add_argument("--Rp", type=float, default=1.04, help="mcp mode load resistance")
    pc.add_argument("--k", type=float, default=1.5, help="mcp mode fixed point")
    _add_diode(pc)
    pc.add_argument("--output", default="-")

    ca = sub.add_parser("calibrate", help="solve for the resistor pair")
    ca.add_argument("--config", help="key = value configuration file")
    ca.add_argument("--mode", choices=("l1", "mcp"), default="l1")
    ca.add_argument("--R", type=float, default=35.0)
    ca.add_argument("--Rp", type=float, default=1.04)
    ca.add_argument("--k", type=float, default=1.5)
    _add_diode(ca)

    return parser


def _read_config(path):
    entries = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            entries[key.replace("_", "-")] = value
    return entries


def _apply_config(parser, argv):
    """Reparse with defaults taken from ``--config``; explicit flags still win."""
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        entries = _read_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    sub = parser._subparsers._group_actions[0].choices[args.command]
    by_flag = {}
    for action in sub._actions:
        for opt in action.option_strings:
            by_flag[opt.lstrip("-")] = action
    defaults = {}
    for key, value in entries.items():
        action = by_flag.get(key) or by_flag.get(key.replace("-", "_"))
        if action is None or action.dest in ("help", "config"):
            raise UsageError(f"unknown config key: {key}")
        conv = action.type or str
        try:
            defaults[action.dest] = conv(value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"config key {key}: cannot parse {value!r}") from exc
        if action.choices is not None and defaults[action.dest] not in action.choices:
            raise UsageError(f"config key {key}: {value!r} not in {sorted(action.choices)}")
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def parse_args(argv=None):
    """Parse and validate ``argv``; raises :class:`UsageError` on bad input."""
    args = _apply_config(build_parser(), argv)
    args.diode = DiodeParams(args.Is, args.m, args.VT)
    if args.command == "experiment":
        args.ensemble = EnsembleConfig(
            M=args.M, N=args.N, nonzero_probability=args.p, noise_variance=args.sigma2,
            trials=args.trials, base_seed=args.seed,
        )
        args.noise_params = NoiseParams(
            temperature=args.temperature, bandwidth=args.bandwidth, amplifier_variance=args.amp_var,
            capacitance=args.capacitance, combined_resistance=args.combined_resistance,
        )
        args.noise_config = NoiseConfig(
            enabled=args.noise, amplifier=args.amplifier_noise, oem=args.oem_noise,
            eom=args.eom_noise, seed=args.seed,
        )
        args.solvers = standard_solvers(
            lam=args.lam, max_iterations=args.iterations, mcp_alpha=args.alpha,
            l1_series_resistance=args.R, mcp_load_resistance=args.Rp, mcp_fixed_point=args.k,
            diode=args.diode, noise=args.noise_params, noise_config=args.noise_config,
            epsilon=args.epsilon, mcp_alpha_relative=args.alpha_relative,
        )
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
    elif args.command == "prox-curve":
        if args.points < 2 or not args.stop > args.start:
            raise UsageError("prox-curve needs --stop > --start and --points >= 2")
        if args.mode == "l1":
            args.circuit = CircuitParams.for_l1(args.R)
        else:
            args.mcp = McpParams(lam=args.lam, alpha=args.alpha, epsilon=args.epsilon)
            args.circuit = CircuitParams.for_mcp(args.Rp, args.k, args.diode)
    return args


def _open_out(path):
    return sys.stdout if path == "-" else open(path, "w", newline="")


def run_experiment_cmd(args):
    curves = run_experiment(args.ensemble, args.solvers, jobs=args.jobs)
    if args.output == "-":
        write_curves(curves, sys.stdout)
    else:
        write_curves(curves, args.output)


def prox_curve_rows(args):
    """Rows ``(input, ideal_prox, v_out)`` on the requested grid."""
    grid = np.linspace(args.start, args.stop, args.points)
    if args.mode == "l1":
        ideal = soft_threshold(grid, args.epsilon * args.lam)
    else:
        ideal = mcp_prox(grid, args.mcp)
    approx = v_out(grid, args.diode, args.circuit)
    return grid, ideal, approx


def run_prox_curve(args):
    grid, ideal, approx = prox_curve_rows(args)
    out = _open_out(args.output)
    try:
        out.write("input,ideal_prox,v_out\n")
        for a, b, c in zip(grid, ideal, approx):
            out.write(f"{a:.17e},{b:.17e},{c:.17e}\n")
    finally:
        if out is not sys.stdout:
            out.close()


def run_calibrate(args):
    if args.mode == "l1":
        r, rp = args.R, calibrate_l1(args.R)
    else:
        r, rp = calibrate_mcp(args.Rp, args.k, args.diode), args.Rp
    print(f"R = {r!r}")
    print(f"R' = {rp!r}")
    return r, rp


COMMANDS = {
    "experiment": run_experiment_cmd,
    "prox-curve": run_prox_curve,
    "calibrate": run_calibrate,
}


def main(argv=None):
    try:
        args = parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
