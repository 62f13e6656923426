"""This module is used for ad-hoc utilities."""
import csv
import json
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from loguru import logger
from waves.profile import WaveParams, WaveProfile, solve_profile

EXIT_OK = 0
EXIT_WRITE_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4


def output_path(basic_config: dict[str, Any], name: str) -> Path:
    """Path of an output file, creating the output directory when needed.

    Parameters
    ----------
    basic_config :
        The basic configuration as per BasicConfig.
    name :
        File name inside the output directory.

    Returns
    -------
    A Path object.
    """
    directory = Path(basic_config["config"].output_dir)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        logger.error("Unable to create output directory:")
        logger.error(exc)
        sys.exit(EXIT_WRITE_FAILURE)
    return directory / name


def write_monitoring_log(
    basic_config: dict[str, Any], run_status: bool, runner: str
) -> None:
    """Write the monitoring log with the run status.

    Parameters
    ----------
    basic_config :
        The basic configuration as per BasicConfig.
    run_status :
        True if the run was a success, False otherwise.
    runner :
        The runner this was called from. This will write a monitoring log file for
        that runner.

    Raises
    ------
    Exception
        Any error should log to STDOUT and exit with failure.
    """
    config = basic_config["config"]
    try:
        output_path(basic_config, f"{runner}_{config.monitoring_log_file}").write_text(
            str(run_status)
        )
    except OSError as exc:
        logger.error("Unable to open file:")
        logger.error(exc)
        sys.exit(EXIT_WRITE_FAILURE)


def format_delta(delta: float) -> str:
    """Amplitude as it appears in file names, e.g. 0.05 -> '0.05'."""
    return f"{delta:g}"


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(float(value))
    return value


def write_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> None:
    """Write a CSV file, floats at full repr precision.

    Raises
    ------
    SystemExit
        With EXIT_WRITE_FAILURE when the file cannot be written.
    """
    try:
        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(value) for value in row])
    except OSError as exc:
        logger.error("Unable to open file:")
        logger.error(exc)
        sys.exit(EXIT_WRITE_FAILURE)
    logger.debug(f"Wrote {path}")


def write_json(path: Path, payload: Any) -> None:
    """Write a JSON document with sorted keys.

    Raises
    ------
    SystemExit
        With EXIT_WRITE_FAILURE when the file cannot be written.
    """
    try:
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    except OSError as exc:
        logger.error("Unable to open file:")
        logger.error(exc)
        sys.exit(EXIT_WRITE_FAILURE)
    logger.debug(f"Wrote {path}")


def build_profile(config: Any, delta: float, N: Optional[int] = None) -> WaveProfile:
    """Solve the configured wave of amplitude delta, Fourier window sized for N.

    Parameters
    ----------
    config :
        The run configuration, a RunConfig.
    delta :
        Amplitude of the wave.
    N :
        Hill truncation the profile must serve, config.N when omitted.

    Returns
    -------
    WaveProfile
    """
    law, V = config.law, config.speed()
    truncation = config.N if N is None else N
    return solve_profile(
        law,
        WaveParams.create(law, delta, V),
        M=config.grid_size,
        n_fourier=4 * truncation,
    )
