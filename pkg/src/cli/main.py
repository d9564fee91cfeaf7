"""
Command-line entry point: ``python -m src.cli <verb> [options]``.

Verbs:
    design   run synthesis, verification and export for a config
    verify   re-verify a stored design.json
    figures  write the CSV data behind the standard figures
    schema   print the JSON schema of the experiment config
"""

import argparse
import json
import logging
import sys
from typing import Any, Optional, Sequence

from src.core.config import get_settings
from src.core.errors import CoheqError, ConfigError
from src.core.orchestrator import Orchestrator
from src.core.schemas import DesignRecord, ExperimentConfig, config_schema

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SYNTHESIS = 2
EXIT_VERIFICATION = 3

EPILOG = """exit codes:
  0  success
  1  config or record could not be read or validated
  2  synthesis, interpolation or export failed
  3  verification failed (artifacts are still written)
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coheq",
        description="Passive coherent equalizers for linear quantum channels",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default: settings.log_level)")
    verbs = parser.add_subparsers(dest="verb", required=True)

    design = verbs.add_parser("design", help="Synthesize, verify and export an equalizer", epilog=EPILOG,
                              formatter_class=argparse.RawDescriptionHelpFormatter)
    design.add_argument("--config", required=True, help="Experiment config (JSON)")
    design.add_argument("--out", default=None, help="Output directory")
    design.add_argument("--theta", type=float, default=None, help="Override the config's Theta")
    design.add_argument("--grid-density", type=int, default=None, help="Points of the verification grid")
    design.add_argument("--seed", type=int, default=0, help="Seed of the oracle spot checks")

    verify = verbs.add_parser("verify", help="Re-verify a stored design.json", epilog=EPILOG,
                              formatter_class=argparse.RawDescriptionHelpFormatter)
    verify.add_argument("record", help="Path to design.json")
    verify.add_argument("--grid-density", type=int, default=None, help="Points of the verification grid")
    verify.add_argument("--seed", type=int, default=0, help="Seed of the oracle spot checks")

    figures = verbs.add_parser("figures", help="Write figure data as CSV", epilog=EPILOG,
                               formatter_class=argparse.RawDescriptionHelpFormatter)
    figures.add_argument("--config", required=True, help="Experiment config (JSON)")
    figures.add_argument("--out", default=None, help="Output directory")

    verbs.add_parser("schema", help="Print the experiment config JSON schema")
    return parser


def _emit(payload: dict[str, Any], stream=None) -> None:
    print(json.dumps(payload, indent=2), file=stream or sys.stdout)


def _exit_code(result: dict[str, Any]) -> int:
    if "error" not in result:
        return EXIT_OK
    if result.get("code") == "VerificationFailed":
        return EXIT_VERIFICATION
    if result.get("code") == "ConfigError":
        return EXIT_CONFIG
    return EXIT_SYNTHESIS


def _report(result: dict[str, Any]) -> int:
    code = _exit_code(result)
    if code == EXIT_OK:
        _emit(result)
    else:
        _emit({"error": result["code"], "message": result["error"], "stage": result["stage"],
               "details": result.get("details", {})}, sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=(args.log_level or get_settings().log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if args.verb == "schema":
        _emit(config_schema())
        return EXIT_OK

    try:
        if args.verb == "verify":
            record = DesignRecord.load(args.record)
        else:
            config = ExperimentConfig.load(args.config)
    except ConfigError as exc:
        _emit(exc.to_dict(), sys.stderr)
        return EXIT_CONFIG

    orchestrator = Orchestrator(grid_density=getattr(args, "grid_density", None), seed=getattr(args, "seed", 0))
    try:
        if args.verb == "design":
            result = orchestrator.run(config, output_dir=args.out, theta=args.theta)
            if "record" in result:
                result = {key: value for key, value in result.items() if key != "record"}
        elif args.verb == "verify":
            result = orchestrator.verify_record(record)
        else:
            result = orchestrator.run_figures(config, output_dir=args.out)
    except CoheqError as exc:
        logger.error("Unhandled %s: %s", exc.code, exc.message)
        _emit(exc.to_dict(), sys.stderr)
        return EXIT_SYNTHESIS
    return _report(result)


if __name__ == "__main__":
    sys.exit(main())
