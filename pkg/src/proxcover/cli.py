"""Command-line front end: run one experiment or sweep the sensing radius.

`proxcover run` solves a single scenario (centralized, distributed, or the
unconstrained baseline) and writes a trace CSV plus SVG snapshots.
`proxcover sweep` repeats one seeded scenario over several radii, adds the
baseline, and emits a combined objective CSV and chart.

Exit codes: 0 success, 2 validation failure, 3 non-convergence (outputs are
still written), 4 certificate failure.
"""

import argparse
import csv
import math
import sys
from pathlib import Path

from .baseline import run_cmeans
from .distsim import run_distributed
from .errors import CertificateFailure, CoverageError
from .scenario_io import (
    GeneratorSpec,
    generate_scenario,
    load_scenario,
    save_scenario,
)
from .solver import Scenario, SolverConfig, Trace, run, validate_scenario
from .svgplot import final_state_svg, membership_svg, objective_chart_svg

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3
EXIT_CERTIFICATE = 4


def _parse_generate(text: str) -> dict:
    fields = {}
    for chunk in text.split(","):
        key, _, value = chunk.partition("=")
        if not value:
            raise argparse.ArgumentTypeError(
                f"--generate expects n=INT,r=INT,seed=INT, got {text!r}"
            )
        fields[key.strip()] = int(value)
    unknown = set(fields) - {"n", "r", "seed"}
    if unknown or "n" not in fields or "r" not in fields:
        raise argparse.ArgumentTypeError(
            f"--generate expects n=INT,r=INT,seed=INT, got {text!r}"
        )
    return fields


def _parse_rho_list(text: str) -> list[float]:
    values = [float(v) for v in text.split(",") if v.strip()]
    return values


def _add_common(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenario", type=Path, help="scenario JSON file")
    source.add_argument("--generate", type=_parse_generate, metavar="n=INT,r=INT,seed=INT",
                        help="draw a random unit-square scenario")
    parser.add_argument("--theta", type=float, default=None,
                        help="communication threshold (default 2*rho)")
    parser.add_argument("--m", type=int, default=2, help="fuzzifier (integer >= 2)")
    parser.add_argument("--epsilon", type=float, default=1e-6,
                        help="per-agent stopping displacement")
    parser.add_argument("--max-iters", type=int, default=500)
    parser.add_argument("--out-dir", type=Path, default=Path("out"))
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed for any generated randomness")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proxcover")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="solve one scenario")
    _add_common(p_run)
    p_run.add_argument("--rho", type=float, default=None, help="sensing radius")
    p_run.add_argument("--baseline", action="store_true",
                       help="run the unconstrained C-means instead")
    p_run.add_argument("--distributed", action="store_true",
                       help="run the message-passing simulator")

    p_sweep = sub.add_parser("sweep", help="run one scenario over several radii")
    _add_common(p_sweep)
    p_sweep.add_argument("--rho", type=_parse_rho_list, required=True,
                         metavar="FLOAT[,FLOAT...]", help="radii to sweep")
    return parser


def _resolve_scenario(args, validation_rho: float, theta: float | None) -> Scenario:
    if args.scenario is not None:
        loaded = load_scenario(args.scenario)
    else:
        fields = args.generate
        loaded = GeneratorSpec(n=fields["n"], r=fields["r"],
                               seed=fields.get("seed", args.seed))
    if isinstance(loaded, GeneratorSpec):
        theta_for_validation = theta if math.isfinite(validation_rho) else None
        return generate_scenario(loaded, validation_rho, theta_for_validation)
    return loaded


def _write_trace_csv(path: Path, trace: Trace) -> None:
    d = trace.scenario.dimension
    header = ["iter", "agent_id", "x", "y"] + (["z"] if d == 3 else [])
    header += ["objective", "max_displacement"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rec in trace.iterations:
            for j, pos in enumerate(rec.agent_positions):
                row = [rec.iteration, j] + [repr(float(c)) for c in pos]
                row += [repr(rec.objective), repr(rec.max_displacement)]
                writer.writerow(row)


def _write_message_csv(path: Path, trace: Trace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "sender", "receiver", "payload_size"])
        for entry in trace.message_log or []:
            writer.writerow([entry.round, entry.sender, entry.receiver,
                             entry.payload_size])


def _write_snapshots(out_dir: Path, trace: Trace) -> None:
    scenario = trace.scenario
    if not trace.iterations:
        return
    final = trace.iterations[-1]
    positions = final.agent_positions
    U = final.memberships.entries
    rho = trace.config.rho
    (out_dir / "final.svg").write_text(
        final_state_svg(scenario.pois, positions, U, rho))
    for j in range(scenario.n_agents):
        (out_dir / f"membership_a{j}.svg").write_text(
            membership_svg(scenario.pois, positions[j], U[:, j], rho))


def cmd_run(args) -> int:
    baseline = args.baseline
    if not baseline and args.rho is None:
        print("error: --rho is required unless --baseline is given", file=sys.stderr)
        return EXIT_VALIDATION
    rho = math.inf if baseline else args.rho
    try:
        scenario = _resolve_scenario(args, rho, args.theta)
        if baseline:
            config = SolverConfig(rho=math.inf, theta=math.inf, m=args.m,
                                  epsilon=args.epsilon, max_iters=args.max_iters,
                                  seed=args.seed)
        else:
            config = SolverConfig(rho=rho, theta=args.theta, m=args.m,
                                  epsilon=args.epsilon, max_iters=args.max_iters,
                                  seed=args.seed)
        violations = validate_scenario(scenario, config)
        if violations:
            for v in violations:
                print(f"validation: {v!r}", file=sys.stderr)
            return EXIT_VALIDATION

        out_dir = args.out_dir
        out_dir.mkdir(parents=True, exist_ok=True)
        save_scenario(out_dir / "scenario.json", scenario)
        if baseline:
            trace = run_cmeans(scenario, m=args.m, epsilon=args.epsilon,
                               max_iters=args.max_iters, seed=args.seed)
        elif args.distributed:
            trace = run_distributed(scenario, config)
        else:
            trace = run(scenario, config)
    except CertificateFailure as err:
        print(f"certificate failure: {err}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except CoverageError as err:
        print(f"error: {err!r}", file=sys.stderr)
        return EXIT_VALIDATION

    _write_trace_csv(out_dir / "trace.csv", trace)
    _write_snapshots(out_dir, trace)
    if trace.message_log is not None:
        _write_message_csv(out_dir / "messages.csv", trace)
    if not trace.converged:
        print(f"did not converge within {config.max_iters} iterations",
              file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    final = trace.iterations[-1]
    print(f"converged after {len(trace.iterations)} iterations, "
          f"objective {final.objective:.6g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    rhos = args.rho
    if not rhos:
        print("error: --rho needs at least one value", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        scenario = _resolve_scenario(args, min(rhos), args.theta)
        runs: list[tuple[str, Trace]] = []
        for rho in rhos:
            config = SolverConfig(rho=rho, theta=args.theta, m=args.m,
                                  epsilon=args.epsilon, max_iters=args.max_iters,
                                  seed=args.seed)
            violations = validate_scenario(scenario, config)
            if violations:
                for v in violations:
                    print(f"validation (rho={rho:g}): {v!r}", file=sys.stderr)
                return EXIT_VALIDATION
            runs.append((f"rho={rho:g}", run(scenario, config)))
        runs.append(("cmeans", run_cmeans(scenario, m=args.m, epsilon=args.epsilon,
                                          max_iters=args.max_iters, seed=args.seed)))
    except CertificateFailure as err:
        print(f"certificate failure: {err}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except CoverageError as err:
        print(f"error: {err!r}", file=sys.stderr)
        return EXIT_VALIDATION

    out_dir = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    save_scenario(out_dir / "scenario.json", scenario)
    with open(out_dir / "objectives.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run", "iter", "objective"])
        for label, trace in runs:
            for rec in trace.iterations:
                writer.writerow([label, rec.iteration, repr(rec.objective)])
    series = [(label, trace.objective_curve()) for label, trace in runs]
    (out_dir / "fig2.svg").write_text(objective_chart_svg(series))

    for label, trace in runs:
        final = trace.iterations[-1]
        status = "converged" if trace.converged else "max-iters"
        print(f"{label}: {status} after {len(trace.iterations)} iterations, "
              f"objective {final.objective:.6g}")
    if any(not trace.converged for _, trace in runs):
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    if args.command == "run":
        return cmd_run(args)
    return cmd_sweep(args)


def console_entry() -> None:
    sys.exit(main())
