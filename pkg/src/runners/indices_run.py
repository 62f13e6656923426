"""This module is used to sweep the analytic stability indices over wave speeds."""
from typing import Any

import utils.utilities as Utilities
from loguru import logger
from utils.basic_config import RunConfig
from waves.indices import IndexSweep, gamma_asymptotic_fraction, gamma_sweep

ROUTE_TOLERANCE = 1e-9
"""Accepted relative gap between the matrix and the scalar index."""

HEADER = (
    "V",
    "k0",
    "k2",
    "c02",
    "gamma_re",
    "gamma_im",
    "gamma_abs",
    "f_limit",
    "growth_coeff",
)


class IndicesRun:
    """Modulational index and ell = 3 instability index on a geometric speed grid.

    The run fails its status, without stopping, when a sample shows k2 <= 0
    or when the two routes to the index disagree.

    Parameters
    ----------
    basic_config : dict[str, Any]
        A dictionary containing all the basic configuration settings.
    """

    run_status: bool = True
    """The overall run status of the script. Set to false anytime something goes
    wrong."""

    def __init__(self, basic_config: dict[str, Any]) -> None:
        """Initialization of the class."""
        self.basic_config = basic_config
        self.config: RunConfig = basic_config["config"]
        self._main()

    def _check(self, sweep: IndexSweep) -> None:
        for modulation, report in zip(sweep.modulation, sweep.gamma):
            if modulation.k2 <= 0.0:
                logger.warning(f"k2={modulation.k2} is not positive at V={report.V}")
                self.run_status = False
            if report.route_discrepancy > ROUTE_TOLERANCE * (1.0 + report.gamma_abs):
                logger.warning(
                    f"Index routes differ by {report.route_discrepancy:.2e} "
                    f"at V={report.V}"
                )
                self.run_status = False

    def _footer(self, sweep: IndexSweep) -> None:
        """Log the large-speed limit next to the last sample."""
        limit = gamma_asymptotic_fraction(self.config.gamma)
        last = sweep.gamma[-1]
        logger.info(
            f"f(gamma={self.config.gamma}) = {limit * 6144}/6144 = {limit} "
            f"= {float(limit):.6f}"
        )
        logger.info(
            f"Largest speed V={last.V}: Gamma={last.gamma_matrix:.6f}, "
            f"|Gamma - f|={abs(last.gamma_matrix - float(limit)):.3e}"
        )
        logger.info(
            "Largest route discrepancy "
            f"{max(report.route_discrepancy for report in sweep.gamma):.3e}"
        )
        if sweep.breakpoints:
            speeds = [sweep.gamma[index].V for index in sweep.breakpoints]
            logger.info(f"Crossing index j jumps before V in {speeds}")

    def _main(self) -> None:
        """Main function of the class."""
        speeds = self.config.sweep_speeds()
        logger.info(f"Sweeping {len(speeds)} speeds from {speeds[0]} to {speeds[-1]}")
        sweep = gamma_sweep(self.config.law, speeds)
        rows = [
            (
                report.V,
                modulation.k0,
                modulation.k2,
                modulation.c02,
                report.gamma_matrix.real,
                report.gamma_matrix.imag,
                report.gamma_abs,
                report.f_gamma_limit,
                report.growth_coefficient,
            )
            for modulation, report in zip(sweep.modulation, sweep.gamma)
        ]
        Utilities.write_csv(
            Utilities.output_path(self.basic_config, "indices.csv"), HEADER, rows
        )
        self._check(sweep)
        self._footer(sweep)
        Utilities.write_monitoring_log(self.basic_config, self.run_status, "indices")
