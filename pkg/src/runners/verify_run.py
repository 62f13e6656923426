"""This module is used to run the acceptance checks end to end and report them."""
import math
import sys
from dataclasses import asdict, dataclass
from typing import Any, Callable, Optional, Sequence

import numpy as np
import utils.utilities as Utilities
from loguru import logger
from utils.basic_config import RunConfig
from waves.bloch import (
    Refinement,
    assemble,
    bubble_threshold,
    interior_mask,
    noise_floor,
    origin_growth,
    refine_crossing,
    scan,
    spectrum,
    uniform_grid,
    wrap_floquet,
)
from waves.crossings import crossing_oracle, find_crossing, lambda_branch
from waves.errors import WaveError
from waves.indices import gamma_asymptotic, gamma_scalar, predicted_growth
from waves.pressure import PressureLaw
from waves.profile import (
    WaveParams,
    WaveProfile,
    asymptotic_coeffs,
    solve_profile,
    speed_for_wavenumber,
    wavenumber,
)

ACCEPTANCE_LAW = PressureLaw(T=0.25, gamma=2.0)
ACCEPTANCE_SPEED = 2.0
"""The wave family every amplitude check runs on, whatever the configuration."""
GROWTH_DELTAS = (0.03, 0.05, 0.08)
OFFSET_REFERENCE_DELTA = 0.03
"""Bubble centre offsets are rescaled by (OFFSET_REFERENCE_DELTA / delta) ** 2."""
EXPANSION_DELTA = 0.02
PROFILE_DELTAS = (0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08)
MODULATION_DELTAS = (0.03, 0.05)
WAVENUMBER_CASES = ((2.0, 0.25, 1.0), (1.0, 1.0, 2.0), (3.0, 1.0, 2.0))
"""(gamma, T, V) triples for the quadratic wavenumber correction."""
CATALOGUE_SPEEDS = (0.72, 1.0, 2.0, 5.0, 10.0)
ROUTE_LAWS = tuple((g, T) for g in (1.0, 1.5, 2.0, 3.0) for T in (0.25, 1.0))
ASYMPTOTIC_GAMMAS = (1.0, 2.0, 3.0)
ASYMPTOTIC_SPEEDS = (10.0, 20.0, 40.0, 80.0)
SYMMETRY_XI = tuple(np.linspace(0.1, 3.0, 8).tolist())


@dataclass(frozen=True)
class Criterion:
    """Outcome of one acceptance check."""

    id: int
    name: str
    passed: bool
    measured: dict[str, Any]
    threshold: dict[str, Any]


def _slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _scaled_offset(refinement: Refinement, delta: float) -> float:
    """Distance of the bubble centre from xi0, rescaled as O(delta**2)."""
    assert refinement.bubble is not None
    offset = abs(wrap_floquet(refinement.bubble.xi_center - refinement.crossing.xi0))
    return offset * (OFFSET_REFERENCE_DELTA / delta) ** 2


class VerifyRun:
    """Acceptance suite at desk scale, one report entry per criterion.

    Checks on waves of finite amplitude run on ACCEPTANCE_LAW at
    ACCEPTANCE_SPEED, the catalogue, the wavenumber expansion and the index
    checks on their own fixed parameter sets. The configuration supplies the
    truncation, the grids and the growth tolerance. A check that raises a
    WaveError is reported as failed. The process exits with EXIT_ACCEPTANCE
    after writing the report when any criterion fails.

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
        self.refinements: dict[tuple[float, int], Refinement] = {}
        self._main()

    def _profile(self, delta: float, N: int) -> WaveProfile:
        return solve_profile(
            ACCEPTANCE_LAW,
            WaveParams.create(ACCEPTANCE_LAW, delta, ACCEPTANCE_SPEED),
            M=self.config.grid_size,
            n_fourier=4 * N,
        )

    def _threshold(self) -> float:
        config = self.config
        floor = noise_floor(
            ACCEPTANCE_LAW,
            ACCEPTANCE_SPEED,
            uniform_grid(64),
            config.N,
            M=config.grid_size,
        )
        return bubble_threshold(floor)

    def _refinement(self, delta: float, ell: int, threshold: float) -> Refinement:
        """Refined window around the + crossing of gap ell, computed once."""
        key = (delta, ell)
        if key not in self.refinements:
            config = self.config
            profile = self._profile(delta, config.N)
            crossing = find_crossing(ACCEPTANCE_LAW, ACCEPTANCE_SPEED, ell, "+")
            self.refinements[key] = refine_crossing(
                profile,
                crossing,
                config.N,
                points=config.refine_points,
                half_width=config.refine_half_width,
                levels=config.refine_levels,
                threshold=threshold,
            )
        return self.refinements[key]

    def _constant_state(self) -> Criterion:
        config = self.config
        law, N = ACCEPTANCE_LAW, config.N
        V = speed_for_wavenumber(law, 1.0)
        flat = solve_profile(
            law, WaveParams.create(law, 0.0, V), M=config.grid_size, n_fourier=4 * N
        )
        modes = np.arange(-N, N + 1)
        inner = np.abs(modes) <= N - 2
        error = 0.0
        for xi in uniform_grid(50).tolist():
            computed = spectrum(assemble(flat, xi, N)).eigenvalues
            branches = [np.asarray(lambda_branch(law, V, b, modes, xi)) for b in "+-"]
            analytic = np.concatenate(branches)
            interior = np.concatenate([branch[inner] for branch in branches])
            distance = np.abs(computed[:, np.newaxis] - analytic[np.newaxis, :])
            error = max(error, float(distance.min(axis=1).max()))
            reverse = np.abs(interior[:, np.newaxis] - computed[np.newaxis, :])
            error = max(error, float(reverse.min(axis=1).max()))
        return Criterion(
            id=1,
            name="constant-state spectrum exactness",
            passed=error < 1e-10,
            measured={"max_error": error, "V": V},
            threshold={"max_error": 1e-10},
        )

    def _catalogue(self) -> Criterion:
        law = ACCEPTANCE_LAW
        worst, mismatches = 0.0, 0
        for V in CATALOGUE_SPEEDS:
            for ell in range(2, 9):
                for sign in ("+", "-"):
                    closed = find_crossing(law, V, ell, sign)
                    found = crossing_oracle(law, V, ell, sign)
                    worst = max(worst, abs(closed.xi0 - found.xi0))
                    if (closed.j, closed.j_prime) != (found.j, found.j_prime):
                        mismatches += 1
        gap_two = find_crossing(law, 1.0, 2, "+")
        exact = (gap_two.j, gap_two.j_prime, gap_two.xi0, gap_two.lambda0) == (
            1,
            -1,
            0.0,
            0j,
        )
        return Criterion(
            id=2,
            name="crossing catalogue against root finding",
            passed=worst < 1e-10 and mismatches == 0 and exact,
            measured={
                "max_xi0_difference": worst,
                "index_mismatches": mismatches,
                "gap_two_exact": exact,
            },
            threshold={"max_xi0_difference": 1e-10, "index_mismatches": 0},
        )

    def _profile_fidelity(self) -> Criterion:
        V = ACCEPTANCE_SPEED
        residual, amplitudes = 0.0, []
        density_remainders, velocity_remainders = [], []
        for delta in PROFILE_DELTAS:
            profile = self._profile(delta, self.config.N)
            harmonic = delta * np.cos(2.0 * math.pi * profile.x)
            residual = max(residual, profile.invariant_residual)
            density_remainders.append(float(np.abs(profile.grid_n - harmonic).max()))
            velocity_remainders.append(
                float(np.abs(profile.grid_u - V * harmonic).max())
            )
            amplitudes.append(0.5 * float(profile.grid_n.max() - profile.grid_n.min()))
        deltas = np.array(PROFILE_DELTAS)
        amplitude_slope = float(np.dot(amplitudes, deltas) / np.dot(deltas, deltas))
        density_order = _slope(PROFILE_DELTAS, density_remainders)
        velocity_order = _slope(PROFILE_DELTAS, velocity_remainders)
        return Criterion(
            id=3,
            name="profile invariant and first-harmonic laws",
            passed=residual < 1e-8
            and min(density_order, velocity_order) >= 1.8
            and abs(amplitude_slope - 1.0) <= 0.02,
            measured={
                "invariant_residual": residual,
                "density_remainder_order": density_order,
                "velocity_remainder_order": velocity_order,
                "amplitude_slope": amplitude_slope,
            },
            threshold={
                "invariant_residual": 1e-8,
                "remainder_order": 1.8,
                "amplitude_slope_deviation": 0.02,
            },
        )

    def _wavenumber_expansion(self) -> Criterion:
        """(k(delta) - k0) / delta**2 at delta and delta / 2, Richardson-combined.

        The quotient is even in delta, so 4 q(delta / 2) - q(delta) over 3
        removes its O(delta**2) part.
        """
        delta = EXPANSION_DELTA
        raw, extrapolated = {}, {}
        for gamma, T, V in WAVENUMBER_CASES:
            law = PressureLaw(T=T, gamma=gamma)
            coefficients = asymptotic_coeffs(law, V)

            def quotient(amplitude: float) -> float:
                shift = wavenumber(law, amplitude, V) - coefficients.k0
                return shift / amplitude**2

            coarse, fine = quotient(delta), quotient(0.5 * delta)
            case = f"{gamma:g},{T:g},{V:g}"
            raw[case] = abs(coarse / coefficients.k2 - 1.0)
            extrapolated[case] = abs(
                (4.0 * fine - coarse) / 3.0 / coefficients.k2 - 1.0
            )
        worst = max(extrapolated.values())
        return Criterion(
            id=4,
            name="quadratic wavenumber correction",
            passed=worst < 0.02,
            measured={
                "max_relative_error": worst,
                "relative_error": extrapolated,
                "relative_error_unextrapolated": raw,
                "delta": delta,
            },
            threshold={"max_relative_error": 0.02},
        )

    def _index_routes(self) -> Criterion:
        worst = 0.0
        for gamma, T in ROUTE_LAWS:
            law = PressureLaw(T=T, gamma=gamma)
            sound = math.sqrt(law.sound_speed_squared)
            for V in np.geomspace(1.05 * sound, 60.0 * sound, 20).tolist():
                report = gamma_scalar(law, V)
                worst = max(
                    worst, report.route_discrepancy / (1.0 + report.gamma_abs)
                )
        return Criterion(
            id=5,
            name="matrix and scalar instability index agree",
            passed=worst < 1e-9,
            measured={"max_relative_discrepancy": worst},
            threshold={"max_relative_discrepancy": 1e-9},
        )

    def _index_asymptotics(self) -> Criterion:
        errors, orders = {}, {}
        for gamma in ASYMPTOTIC_GAMMAS:
            law = PressureLaw(T=1.0, gamma=gamma)
            limit = gamma_asymptotic(gamma)
            far = gamma_scalar(law, 100.0).gamma_matrix
            errors[f"{gamma:g}"] = abs(far - limit) / abs(limit)
            distances = [
                abs(gamma_scalar(law, V).gamma_matrix - limit)
                for V in ASYMPTOTIC_SPEEDS
            ]
            orders[f"{gamma:g}"] = -_slope(ASYMPTOTIC_SPEEDS, distances)
        return Criterion(
            id=6,
            name="instability index approaches its large-speed limit",
            passed=max(errors.values()) < 0.05 and min(orders.values()) >= 0.9,
            measured={"relative_error_at_100": errors, "decay_order": orders},
            threshold={"relative_error_at_100": 0.05, "decay_order": 0.9},
        )

    def _growth(self, threshold: float) -> Criterion:
        tolerance = self.config.growth_rel_tolerance
        growth, errors, offsets = [], [], []
        for delta in GROWTH_DELTAS:
            refinement = self._refinement(delta, 3, threshold)
            if refinement.bubble is None:
                logger.error(f"No ell=3 bubble found at delta={delta}")
                return Criterion(
                    id=7,
                    name="bubble growth against the index prediction",
                    passed=False,
                    measured={"missing_bubble_delta": delta},
                    threshold={"relative_error": tolerance},
                )
            predicted = predicted_growth(ACCEPTANCE_LAW, ACCEPTANCE_SPEED, delta)
            growth.append(refinement.bubble.max_growth)
            errors.append(abs(refinement.bubble.max_growth - predicted) / predicted)
            offsets.append(_scaled_offset(refinement, delta))
        exponent = _slope(GROWTH_DELTAS, growth)
        return Criterion(
            id=7,
            name="bubble growth against the index prediction",
            passed=max(errors) <= tolerance
            and abs(exponent - 3.0) <= 0.3
            and max(offsets) < 0.1,
            measured={
                "max_growth": growth,
                "relative_error": errors,
                "growth_exponent": exponent,
                "max_scaled_center_offset": max(offsets),
            },
            threshold={
                "relative_error": tolerance,
                "growth_exponent_deviation": 0.3,
                "scaled_center_offset": 0.1,
                "offset_reference_delta": OFFSET_REFERENCE_DELTA,
            },
        )

    def _modulation(self) -> Criterion:
        N = self.config.N
        ratios: dict[str, Optional[float]] = {}
        for delta in MODULATION_DELTAS:
            slices = scan(self._profile(delta, N), np.linspace(-0.3, 0.3, 61), N)
            growth = origin_growth(slices, 0.2)
            ratios[f"{delta:g}"] = None if math.isnan(growth) else growth / delta
        measured = [ratio for ratio in ratios.values() if ratio is not None]
        return Criterion(
            id=8,
            name="no modulational instability near the origin",
            passed=len(measured) == len(ratios) and max(measured) < 0.01,
            measured={"growth_over_delta": ratios},
            threshold={"growth_over_delta": 0.01},
        )

    @staticmethod
    def _pairing(profile: WaveProfile, N: int) -> float:
        worst = 0.0
        for xi in SYMMETRY_XI:
            eigenvalues = spectrum(assemble(profile, xi, N)).eigenvalues
            interior = eigenvalues[interior_mask(eigenvalues, profile, N)]
            gaps = np.abs(interior[:, np.newaxis] + np.conj(eigenvalues)[np.newaxis, :])
            worst = max(worst, float(gaps.min(axis=1).max()))
        return worst

    def _symmetry(self) -> Criterion:
        N, wide = self.config.N, self.config.N + 16
        profile = self._profile(0.05, wide)
        conjugation = 0.0
        for xi in SYMMETRY_XI:
            ahead = spectrum(assemble(profile, xi, N)).eigenvalues
            behind = spectrum(assemble(profile, -xi, N)).eigenvalues
            gaps = np.abs(np.conj(ahead)[:, np.newaxis] - behind[np.newaxis, :])
            conjugation = max(
                conjugation,
                float(gaps.min(axis=1).max()),
                float(gaps.min(axis=0).max()),
            )
        pairing = self._pairing(profile, N)
        pairing_wide = self._pairing(profile, wide)
        return Criterion(
            id=9,
            name="conjugation and Hamiltonian symmetry",
            passed=conjugation < 1e-10
            and pairing < 1e-6
            and (pairing_wide < pairing or pairing_wide < 1e-9),
            measured={
                "conjugation_residual": conjugation,
                "pairing_residual": pairing,
                "pairing_residual_wide": pairing_wide,
                "N_wide": wide,
            },
            threshold={"conjugation_residual": 1e-10, "pairing_residual": 1e-6},
        )

    def _bubble_ordering(self, threshold: float) -> Criterion:
        delta = max(GROWTH_DELTAS)
        growth: dict[str, Any] = {}
        offsets = []
        for ell in (3, 4, 5):
            bubble = self._refinement(delta, ell, threshold).bubble
            growth[str(ell)] = None if bubble is None else bubble.max_growth
            if bubble is not None:
                offsets.append(_scaled_offset(self.refinements[(delta, ell)], delta))
        values = list(growth.values())
        found = all(value is not None for value in values)
        ordered = found and values[0] > values[1] > values[2]
        return Criterion(
            id=10,
            name="first three bubbles with decreasing growth",
            passed=bool(ordered) and max(offsets, default=1.0) < 0.1,
            measured={
                "delta": delta,
                "max_growth": growth,
                "scaled_center_offset": offsets,
            },
            threshold={
                "scaled_center_offset": 0.1,
                "offset_reference_delta": OFFSET_REFERENCE_DELTA,
            },
        )

    def _main(self) -> None:
        """Main function of the class."""
        threshold = self._threshold()
        checks: list[Callable[[], Criterion]] = [
            self._constant_state,
            self._catalogue,
            self._profile_fidelity,
            self._wavenumber_expansion,
            self._index_routes,
            self._index_asymptotics,
            lambda: self._growth(threshold),
            self._modulation,
            self._symmetry,
            lambda: self._bubble_ordering(threshold),
        ]
        criteria = []
        for identifier, check in enumerate(checks, start=1):
            try:
                criterion = check()
            except WaveError as exc:
                criterion = Criterion(
                    id=identifier,
                    name="check raised before measuring",
                    passed=False,
                    measured={"error": f"{type(exc).__name__}: {exc}"},
                    threshold={},
                )
            criteria.append(criterion)
            if criterion.passed:
                logger.info(f"Criterion {criterion.id} ({criterion.name}) passed")
            else:
                logger.error(
                    f"Criterion {criterion.id} ({criterion.name}) FAILED: "
                    f"{criterion.measured}"
                )
                self.run_status = False
        Utilities.write_json(
            Utilities.output_path(self.basic_config, "verify_report.json"),
            {
                "passed": self.run_status,
                "criteria": [asdict(criterion) for criterion in criteria],
            },
        )
        Utilities.write_monitoring_log(self.basic_config, self.run_status, "verify")
        if not self.run_status:
            sys.exit(Utilities.EXIT_ACCEPTANCE)
