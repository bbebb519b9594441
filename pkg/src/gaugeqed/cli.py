"""Command line entry point: one subcommand per experiment plus run/validate."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, GaugeQEDError
from .experiments import EXPERIMENTS, resolve_config, run

EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file; flags given here override it")
    p.add_argument("--output-dir", help="output directory (default: $GAUGEQED_OUTPUT_DIR or ./gaugeqed-out)")
    p.add_argument("--potential", choices=["square-well", "double-well", "harmonic", "flux-cosine"])
    p.add_argument("--beta", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--e-j", type=float, dest="pot_e_j")
    p.add_argument("--e-l", type=float, dest="pot_e_l")
    p.add_argument("--n-levels", type=int)
    p.add_argument("--n-fock", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--g0", type=float, dest="g0_over_wc", help="g0/omega_c for single-point experiments")
    p.add_argument("--sweep", nargs=3, metavar=("START", "STOP", "NUM"), help="sweep grid of the coupling")
    p.add_argument("--values", type=float, nargs="+", help="explicit sweep grid")
    p.add_argument("--n-qubits", type=int)
    p.add_argument("--ej", type=float, help="circuit E_J in GHz")
    p.add_argument("--ecq", type=float, help="circuit E_Cq in GHz")
    p.add_argument("--elq", type=float, help="circuit E_Lq in GHz")
    p.add_argument("--levels", type=int, help="qubit levels of the circuit full model")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaugeqed", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        _add_common(sub.add_parser(name, help=f"run the {name} experiment"))
    p = sub.add_parser("run", help="run the experiment named in a config (or manifest) file")
    _add_common(p)
    p = sub.add_parser("validate", help="check a config and print it with defaults resolved")
    _add_common(p)
    p.add_argument("--experiment", choices=EXPERIMENTS)
    return parser


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None


def config_from_args(args: argparse.Namespace) -> dict:
    cfg = _load(args.config) if args.config else {}
    if isinstance(cfg.get("config"), dict):
        cfg = dict(cfg["config"])
    if args.command in EXPERIMENTS:
        cfg["experiment"] = args.command
    elif getattr(args, "experiment", None):
        cfg["experiment"] = args.experiment
    if args.potential:
        cfg["potential"] = {"shape": args.potential}
    for flag, key in (("beta", "beta"), ("omega", "omega"), ("pot_e_j", "e_j"), ("pot_e_l", "e_l")):
        v = getattr(args, flag)
        if v is not None:
            cfg.setdefault("potential", {})[key] = v
    for key in ("n_levels", "n_fock", "k", "g0_over_wc", "levels"):
        v = getattr(args, key)
        if v is not None:
            cfg[key] = v
    if args.sweep:
        try:
            cfg["sweep"] = {"start": float(args.sweep[0]), "stop": float(args.sweep[1]), "num": int(args.sweep[2])}
        except ValueError:
            raise ConfigError("--sweep expects START STOP NUM") from None
    if args.values:
        cfg["sweep"] = {"values": args.values}
    for flag, key in (("ej", "e_j"), ("ecq", "e_cq"), ("elq", "e_lq"), ("n_qubits", "n_qubits")):
        v = getattr(args, flag)
        if v is not None:
            cfg.setdefault("circuit", {})[key] = v
    if args.output_dir:
        cfg["output_dir"] = args.output_dir
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "validate":
            print(json.dumps(resolve_config(cfg), indent=2, sort_keys=True))
            return 0
        out, manifest = run(cfg)
        for name in sorted(manifest["outputs"]):
            print(out / name)
        print(out / "manifest.json")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GaugeQEDError as exc:
        print(f"convergence error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
