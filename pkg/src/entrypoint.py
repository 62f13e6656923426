"""This is the main entrypoint for the application."""
import sys
from typing import Any, Callable

from loguru import logger
from runners.crossings_run import CrossingsRun
from runners.indices_run import IndicesRun
from runners.profile_run import ProfileRun
from runners.spectrum_run import SpectrumRun
from runners.verify_run import VerifyRun
from utils.basic_config import BasicConfig
from utils.manage_argument_parser import ManageParser
from utils.utilities import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    output_path,
    write_monitoring_log,
)
from waves.errors import InvalidParameter, WaveError

RUNNERS: dict[str, Callable[[dict[str, Any]], Any]] = {
    "profile": ProfileRun,
    "spectrum": SpectrumRun,
    "crossings": CrossingsRun,
    "indices": IndicesRun,
    "verify": VerifyRun,
}


def _setup_logging(basic_config: dict[str, Any]) -> None:
    """Console sink at the requested level, rotating file sink in output_dir."""
    args, config = basic_config["args"], basic_config["config"]
    log_format = f"{{time}} {args.op_type} {{module}} {{level}} {{message}}"
    logger.remove()
    logger.add(sys.stdout, format=log_format, level=args.console_log_level)
    logger.add(
        output_path(basic_config, f"{args.op_type}_{config.log_file}"),
        format=log_format,
        level=config.log_file_level,
        retention=config.log_file_retention,
        rotation=config.log_file_rotation,
    )


def entrypoint() -> None:
    """Simple entrypoint method."""
    args = ManageParser().parse_cli_args()

    basic_config = BasicConfig(args).create_basic_config()
    _setup_logging(basic_config)
    logger.info(f"Starting {args.op_type} ...")
    try:
        RUNNERS[args.op_type](basic_config)
    except InvalidParameter as exc:
        logger.error(f"Invalid parameter: {exc}")
        write_monitoring_log(basic_config, False, args.op_type)
        sys.exit(EXIT_CONFIG)
    except WaveError as exc:
        logger.error(f"Numerical failure: {exc}")
        write_monitoring_log(basic_config, False, args.op_type)
        sys.exit(EXIT_NUMERICAL)
