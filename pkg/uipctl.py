"""CLI entry-point: compile HSL programs, run scenarios and fault matrices, compute stakes."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from src.api.harness_api import HarnessResponse, compile_program_file, run_matrix, run_scenario, stake_for
from src.config import configure_logging, get_settings
from src.core.models import Party
from src.core.utils import pretty_json
from src.domain.ports import NullMetrics, ProtocolMetrics
from src.infrastructure.metrics import PrometheusProtocolMetrics, start_metrics_http_server

LOGGER = logging.getLogger("uipctl")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

USAGE_CODES = frozenset({"E_NOT_FOUND", "E_UNKNOWN_PARTY"})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uipctl", description="Deterministic cross-chain session simulator")
    parser.add_argument("--log-level", dest="log_level", default=None, help="Overrides UIP_LOG_LEVEL")
    parser.add_argument(
        "--metrics-port", dest="metrics_port", type=int, default=None, help="Serve Prometheus metrics on this port"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    compile_cmd = commands.add_parser("compile", help="Compile an HSL program into a Tdg file")
    compile_cmd.add_argument("program", type=Path)
    compile_cmd.add_argument("--ifaces", type=Path, required=True, help="Directory holding the interface files")
    compile_cmd.add_argument("-o", "--output", type=Path, required=True, help="Tdg file to write")
    compile_cmd.add_argument("--ves-config", dest="ves_config", type=Path, default=None)

    run_cmd = commands.add_parser("run", help="Run one scenario to settlement")
    run_cmd.add_argument("scenario", type=Path)
    run_cmd.add_argument("--seed", type=int, default=None)
    run_cmd.add_argument("--report", type=Path, default=None, help="Write the JSON run report here")

    matrix_cmd = commands.add_parser("matrix", help="Run the accountability fault matrix of a scenario")
    matrix_cmd.add_argument("scenario", type=Path)
    matrix_cmd.add_argument("--seed", type=int, default=None)
    matrix_cmd.add_argument("--report", type=Path, default=None)

    stake_cmd = commands.add_parser("stake", help="Stake a party must lock for a Tdg")
    stake_cmd.add_argument("tdg", type=Path)
    stake_cmd.add_argument("--party", required=True, choices=[party.value for party in Party])
    return parser


def _metrics(port: int | None) -> ProtocolMetrics:
    chosen = port if port is not None else get_settings().metrics_port
    if chosen is None:
        return NullMetrics()
    exporter_port = start_metrics_http_server(chosen)
    LOGGER.info("Prometheus metrics exporter listening on port %s", exporter_port)
    return PrometheusProtocolMetrics()


def _exit_code(response: HarnessResponse) -> int:
    if response.ok:
        return EXIT_OK
    if response.payload.get("code") in USAGE_CODES:
        return EXIT_USAGE
    return EXIT_FAILED


def _dispatch(args: argparse.Namespace, metrics: ProtocolMetrics) -> HarnessResponse:
    if args.command == "compile":
        return compile_program_file(args.program, args.ifaces, args.output, ves_config=args.ves_config)
    if args.command == "run":
        return run_scenario(args.scenario, seed=args.seed, report=args.report, metrics=metrics)
    if args.command == "matrix":
        return run_matrix(args.scenario, seed=args.seed, report=args.report, metrics=metrics)
    return stake_for(args.tdg, args.party)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    metrics = _metrics(args.metrics_port)

    response = _dispatch(args, metrics)
    if "code" in response.payload and not response.ok:
        LOGGER.error("%s", pretty_json(response.payload).rstrip())
    elif args.command == "matrix":
        sys.stdout.write(response.payload["grid"])
    elif args.command == "run":
        verdict = "passed" if response.ok else "FAILED"
        sys.stdout.write(f"{response.payload['scenario']}: {response.payload['outcome']} {verdict}\n")
        for problem in response.payload["mismatches"]:
            sys.stdout.write(f"  {problem}\n")
    else:
        sys.stdout.write(pretty_json(response.payload))
    return _exit_code(response)


if __name__ == "__main__":
    raise SystemExit(main())
