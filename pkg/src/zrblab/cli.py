"""Command-line entry point.

Exit codes: 0 on success/PASS, 1 on a gate failure, 2 on usage or config
errors.  Human-readable output goes to stderr; machine-readable output goes
to files in the run directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (
    ConfigError,
    ExperimentConfig,
    adiabatic_limit_report,
    apply_overrides,
    identity_suite,
    make_plots,
    run,
    save_snapshot,
    theorem1_trend_report,
    theorem2_decay_report,
)

USAGE_ERROR, GATE_ERROR = 2, 1


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_config(args) -> ExperimentConfig:
    data = json.loads(Path(args.config).read_text())
    # resolve defaults first so --set can target any config field
    data = ExperimentConfig.from_dict(data).to_dict()
    if getattr(args, "set", None):
        data = apply_overrides(data, args.set)
    if getattr(args, "kappa_mode", None):
        data["scaling_mode"] = {"paper": "paper", "dynamic": "dynamic"}[args.kappa_mode]
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    return ExperimentConfig.from_dict(data)


def _print_assertions(report: dict) -> None:
    for item in report.get("assertions", []):
        status = "PASS" if item["passed"] else "FAIL"
        _say(f"  [{status}] {item['name']}: {item['value']}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zrblab",
        description="Pseudospectral desk laboratory for the coupled "
        "Schrodinger/acoustic wave-packet system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p, needs_out=True):
        p.add_argument("--config", required=True, help="JSON experiment config")
        if needs_out:
            p.add_argument("--out", required=True, help="output run directory")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="dotted-key config override (repeatable), e.g. params.alpha=0.3",
        )
        p.add_argument("--kappa-mode", choices=["paper", "dynamic"], dest="kappa_mode")
        p.add_argument("--seed", type=int)

    add_config_args(sub.add_parser("simulate", help="run one experiment"))
    add_config_args(sub.add_parser("soliton", help="build solitary-wave data"))
    adiabatic = sub.add_parser("adiabatic", help="run the small-theta limit sweep")
    add_config_args(adiabatic)
    adiabatic.add_argument(
        "--thetas",
        default="0.4,0.2,0.1,0.05",
        help="comma-separated decreasing theta values",
    )
    adiabatic.add_argument("--t-end", type=float, default=1.0)

    for name, help_text in (
        ("verify-identities", "finite-difference identity suite on a run"),
        ("theorem1", "integrability trend report on a run"),
        ("theorem2", "far-field decay report on a run"),
        ("plot", "regenerate SVG plots for a run"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--run", required=True, help="existing run directory")

    p = sub.add_parser("validate-config", help="check a config file")
    p.add_argument("config", help="JSON experiment config")
    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0

    try:
        if args.command == "validate-config":
            try:
                config = ExperimentConfig.load(args.config)
                config.validate()
            except (ConfigError, OSError, json.JSONDecodeError) as exc:
                _say(f"invalid config: {exc}")
                return USAGE_ERROR
            _say("config ok")
            return 0

        if args.command == "simulate":
            config = _load_config(args)
            report = run(config, args.out)
            _print_assertions(report)
            return 0 if report["passed"] else GATE_ERROR

        if args.command == "soliton":
            config = _load_config(args)
            config.validate()
            params = config.model_params()
            grid = config.make_grid()
            spec = config.initial_data
            if spec.get("kind") != "soliton":
                _say("config initial_data.kind must be 'soliton'")
                return USAGE_ERROR
            from .solitons import SolitonError, build_soliton_state

            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            try:
                state, rep = build_soliton_state(
                    grid, params, float(spec["c"]), float(spec["lambda_freq"])
                )
            except SolitonError as exc:
                _say(f"soliton construction refused: {exc}")
                return GATE_ERROR
            save_snapshot(out / "soliton.json", grid, state)
            with open(out / "soliton_report.json", "w") as fh:
                json.dump(
                    {
                        "c": rep.c,
                        "lambda_freq": rep.lambda_freq,
                        "sigma_flag": rep.sigma_flag,
                        "sigma_profile": rep.sigma_profile,
                        "g_profile": rep.g_profile,
                        "amplitude": rep.amplitude,
                        "residuals": [rep.residual_psi, rep.residual_rho, rep.residual_eta],
                        "flag1": rep.coefficients.flag1,
                        "flag1_alternative": rep.coefficients.flag1_alternative,
                    },
                    fh,
                    indent=2,
                    sort_keys=True,
                )
                fh.write("\n")
            _say(f"soliton written; max residual {rep.max_residual:.3e}")
            return 0

        if args.command == "adiabatic":
            config = _load_config(args)
            thetas = [float(v) for v in args.thetas.split(",")]
            report = adiabatic_limit_report(thetas, config, t_end=args.t_end)
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            with open(out / "report_adiabatic.json", "w") as fh:
                json.dump(report, fh, indent=2, sort_keys=True)
                fh.write("\n")
            _say(f"sup errors along theta: {report['sup_errors']}")
            return 0 if report["passed"] else GATE_ERROR

        if args.command == "verify-identities":
            report = identity_suite(args.run)
            for name, res in report["residuals"].items():
                status = "PASS" if res["passed"] else "FAIL"
                _say(
                    f"  [{status}] {name}: residual {res['max_relative_residual']:.3e}"
                    f" (tol {res['tolerance']:.0e}, scale {res['scale']:.3e})"
                )
            return 0 if report["passed"] else GATE_ERROR

        if args.command == "theorem1":
            report = theorem1_trend_report(args.run)
            for name, res in report["windows"].items():
                status = "PASS" if res["passed"] else "FAIL"
                _say(f"  [{status}] {name}: final-half decreasing = {res['final_half_decreasing']}")
            for note in report["notes"]:
                _say(f"  note: {note}")
            return 0 if report["passed"] else GATE_ERROR

        if args.command == "theorem2":
            report = theorem2_decay_report(args.run)
            for name, res in report["window_gates"].items():
                status = "PASS" if res["passed"] else "FAIL"
                _say(f"  [{status}] {name}: max late norm {res['max_late_norm']:.3e}")
            return 0 if report["passed"] else GATE_ERROR

        if args.command == "plot":
            written = make_plots(args.run)
            _say(f"wrote {len(written)} plots")
            return 0

    except ConfigError as exc:
        _say(f"config error: {exc}")
        return USAGE_ERROR
    except json.JSONDecodeError as exc:
        _say(f"malformed config JSON: {exc}")
        return USAGE_ERROR
    except FileNotFoundError as exc:
        _say(f"missing file: {exc}")
        return USAGE_ERROR
    return USAGE_ERROR


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
