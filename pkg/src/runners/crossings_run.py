"""This module is used to export the catalogue of constant-state crossings."""
from typing import Any

import utils.utilities as Utilities
from loguru import logger
from utils.basic_config import RunConfig
from waves.crossings import crossing_catalogue


class CrossingsRun:
    """Write every crossing with gap 2..ell_max and the Krein signatures of the pair.

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

    def _main(self) -> None:
        """Main function of the class."""
        law, V = self.config.law, self.config.speed()
        records = []
        for crossing in crossing_catalogue(law, V, self.config.ell_max):
            record = crossing.to_record(law, V)
            if record["krein_j"] == record["krein_jprime"]:
                logger.warning(f"Crossing ell={crossing.ell} pairs equal signatures")
                self.run_status = False
            records.append(record)
        Utilities.write_json(
            Utilities.output_path(self.basic_config, "crossings.json"), records
        )
        logger.info(f"Wrote {len(records)} crossings at V={V}")
        Utilities.write_monitoring_log(self.basic_config, self.run_status, "crossings")
