"""This module is used to construct the wave profiles and export them."""
from typing import Any

import utils.utilities as Utilities
from loguru import logger
from utils.basic_config import RunConfig
from waves.profile import WaveProfile

INVARIANT_TOLERANCE = 1e-8


class ProfileRun:
    """One profile per configured amplitude, written as plot-ready data.

    - ``profile_delta_<delta>.csv`` holds x, E, E', u and n = k E' on the grid.
    - ``profile_summary.json`` lists k, mu, the crest and trough densities, the
      peakon bound and the residuals of every profile.

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

    def _write_profile(self, profile: WaveProfile) -> None:
        """Write the grid samples of one profile."""
        name = f"profile_delta_{Utilities.format_delta(profile.params.delta)}.csv"
        Utilities.write_csv(
            Utilities.output_path(self.basic_config, name),
            ("x", "E", "dE", "u", "n"),
            zip(
                profile.x.tolist(),
                profile.grid_E.tolist(),
                profile.grid_dE.tolist(),
                profile.grid_u.tolist(),
                profile.grid_n.tolist(),
            ),
        )

    @staticmethod
    def _summary(profile: WaveProfile) -> dict[str, float]:
        return {
            "delta": profile.params.delta,
            "V": profile.params.V,
            "k": profile.k,
            "mu": profile.params.mu,
            "crest_density": profile.crest_density,
            "trough_density": profile.trough_density,
            "rho_max": profile.peakon.rho_max,
            "delta_max": profile.peakon.delta_max,
            "periodicity_residual": profile.periodicity_residual,
            "invariant_residual": profile.invariant_residual,
        }

    def _main(self) -> None:
        """Main function of the class."""
        summaries = []
        for delta in self.config.delta_list:
            logger.info(f"Solving profile delta={delta} at V={self.config.speed()}")
            profile = Utilities.build_profile(self.config, delta)
            self._write_profile(profile)
            summaries.append(self._summary(profile))
            if profile.invariant_residual > INVARIANT_TOLERANCE:
                logger.warning(
                    f"Profile delta={delta} drifts off its invariant by "
                    f"{profile.invariant_residual:.2e}"
                )
                self.run_status = False
        Utilities.write_json(
            Utilities.output_path(self.basic_config, "profile_summary.json"), summaries
        )
        logger.info(f"Wrote {len(summaries)} profiles to {self.config.output_dir}")
        Utilities.write_monitoring_log(self.basic_config, self.run_status, "profile")
