"""This module is used to compute and export the Floquet-Bloch spectra of the waves."""
from typing import Any, Iterator, Sequence

import utils.utilities as Utilities
from loguru import logger
from utils.basic_config import RunConfig
from waves.bloch import (
    Bubble,
    SpectrumSlice,
    bubble_detect,
    bubble_threshold,
    noise_floor,
    refine_crossing,
    scan,
    uniform_grid,
)
from waves.crossings import find_crossing
from waves.profile import WaveProfile

REFINED_GAPS = (3, 4, 5)
"""Frequency gaps whose crossings get a refined window."""


def _rows(slices: Sequence[SpectrumSlice]) -> Iterator[tuple[float, float, float]]:
    for piece in slices:
        for eigenvalue in piece.eigenvalues.tolist():
            yield piece.xi, eigenvalue.real, eigenvalue.imag


class SpectrumRun:
    """Hill's method over the Floquet interval for every configured amplitude.

    Per amplitude the run writes the uniform scan, one refined window around
    each of the first crossings on the + side, and the bubbles found in both.
    Instability is a result: the run succeeds whether bubbles exist or not.

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

    def _write_slices(self, name: str, slices: Sequence[SpectrumSlice]) -> None:
        Utilities.write_csv(
            Utilities.output_path(self.basic_config, name),
            ("xi", "re", "im"),
            _rows(slices),
        )

    def _refine(
        self, profile: WaveProfile, threshold: float, label: str
    ) -> list[dict[str, Any]]:
        """Refined windows around the crossings, one file per gap."""
        config = self.config
        records = []
        for ell in REFINED_GAPS:
            if ell > config.ell_max:
                continue
            crossing = find_crossing(config.law, profile.params.V, ell, "+")
            refinement = refine_crossing(
                profile,
                crossing,
                config.N,
                points=config.refine_points,
                half_width=config.refine_half_width,
                levels=config.refine_levels,
                threshold=threshold,
            )
            name = f"spectrum_delta_{label}_ell{ell}.csv"
            self._write_slices(name, refinement.slices)
            if refinement.bubble is not None:
                logger.info(
                    f"ell={ell} bubble at xi={refinement.bubble.xi_center:.6f}, "
                    f"growth {refinement.bubble.max_growth:.3e}"
                )
                records.append(dict(refinement.bubble.to_record(), window=f"ell{ell}"))
        return records

    @staticmethod
    def _scan_records(bubbles: list[Bubble]) -> list[dict[str, Any]]:
        return [dict(bubble.to_record(), window="full") for bubble in bubbles]

    def _main(self) -> None:
        """Main function of the class."""
        config = self.config
        V = config.speed()
        xi_grid = uniform_grid(config.xi_points)
        floor = noise_floor(config.law, V, xi_grid, config.N, M=config.grid_size)
        threshold = bubble_threshold(floor)
        logger.info(f"Bubble threshold {threshold:.3e} at V={V}, N={config.N}")
        for delta in config.delta_list:
            label = Utilities.format_delta(delta)
            logger.info(f"Scanning {config.xi_points} exponents at delta={delta}")
            profile = Utilities.build_profile(self.config, delta)
            slices = scan(profile, xi_grid, config.N)
            self._write_slices(f"spectrum_delta_{label}.csv", slices)
            records = self._scan_records(bubble_detect(slices, threshold))
            records.extend(self._refine(profile, threshold, label))
            Utilities.write_json(
                Utilities.output_path(self.basic_config, f"bubbles_delta_{label}.json"),
                records,
            )
            logger.info(f"delta={delta}: {len(records)} bubbles")
        Utilities.write_monitoring_log(self.basic_config, self.run_status, "spectrum")
