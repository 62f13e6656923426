"""This module is used to set up the argument parser."""
from argparse import ArgumentParser
from dataclasses import dataclass
from typing import Any, Dict, Optional

OPERATIONS = {
    "profile": "Construct wave profiles and export them.",
    "spectrum": "Compute Floquet-Bloch spectra by Hill's method.",
    "crossings": "Export the constant-state eigenvalue crossing catalogue.",
    "indices": "Sweep the analytic stability indices over wave speeds.",
    "verify": "Run the acceptance checks and write a pass/fail report.",
}


@dataclass
class ManageArguments:
    """
    The data class for all the arguments.
    """

    config_file: Optional[str]
    console_log_level: str
    op_type: str
    out: Optional[str]
    delta: Optional[list[float]]
    V: Optional[float]
    k0: Optional[float]
    N: Optional[int]
    gamma: Optional[float]
    T: Optional[float]


class ManageParser:
    """
    This class is used to set up the argument parser.
    """

    @staticmethod
    def _add_config_file(parser: ArgumentParser) -> None:
        """Add main configuration file argument."""
        parser.add_argument(
            "--config",
            "--config_file",
            dest="config_file",
            type=str,
            help="Config file. Built-in defaults apply when omitted.",
            default=None,
        )

    @staticmethod
    def _add_console_log_level(parser: ArgumentParser) -> None:
        """Add console log level argument."""
        parser.add_argument(
            "--console_log_level",
            type=str,
            choices=["error", "warning", "info", "debug"],
            default="info",
            help="Console level configuration (default: %(default)s).",
        )

    @staticmethod
    def _add_out(parser: ArgumentParser) -> None:
        """Add output directory override."""
        parser.add_argument(
            "--out",
            type=str,
            default=None,
            help="Output directory, overrides output_dir.",
        )

    @staticmethod
    def _add_overrides(parser: ArgumentParser) -> None:
        """Add the physical and numerical overrides."""
        parser.add_argument(
            "--delta",
            nargs="+",
            type=float,
            default=None,
            help="One or more amplitudes, overrides delta_list.",
        )
        speed = parser.add_mutually_exclusive_group()
        speed.add_argument("--V", type=float, default=None, help="Wave speed.")
        speed.add_argument(
            "--k0", type=float, default=None, help="Base wavenumber, resolves V."
        )
        parser.add_argument(
            "--N", type=int, default=None, help="Hill truncation half-width."
        )
        parser.add_argument(
            "--gamma", type=float, default=None, help="Adiabatic exponent."
        )
        parser.add_argument("--T", type=float, default=None, help="Pressure scale.")

    def _build_parser(self) -> ArgumentParser:
        """Build the argument parser.

        Returns
        -------
        ArgumentParser object with all relevant arguments.
        """
        parser = ArgumentParser()
        subparsers = parser.add_subparsers(
            title="Operational types", required=True, dest="op_type"
        )
        for operation, description in OPERATIONS.items():
            operation_parser = subparsers.add_parser(operation, help=description)
            self._add_config_file(operation_parser)
            self._add_console_log_level(operation_parser)
            self._add_out(operation_parser)
            self._add_overrides(operation_parser)

        return parser

    def parse_cli_args(self) -> ManageArguments:
        """Parse the arguments.

        Returns
        -------
        ManageArguments object with all relevant arguments.
        """
        return self._parse_args()

    def _parse_args(self) -> ManageArguments:
        return self._build_args(vars(self._build_parser().parse_args()))

    @staticmethod
    def _build_args(args: Dict[str, Any]) -> ManageArguments:
        """Build the arguments.

        Returns
        -------
        ManageArguments object with all relevant arguments.
        """
        return ManageArguments(
            config_file=args.get("config_file"),
            console_log_level=str(args.get("console_log_level")).upper(),
            op_type=str(args.get("op_type")),
            out=args.get("out"),
            delta=args.get("delta"),
            V=args.get("V"),
            k0=args.get("k0"),
            N=args.get("N"),
            gamma=args.get("gamma"),
            T=args.get("T"),
        )
