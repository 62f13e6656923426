"""This module is used to construct the small-amplitude periodic traveling waves."""
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from loguru import logger
from numpy.polynomial.legendre import leggauss
from numpy.typing import ArrayLike
from scipy.optimize import brentq

from waves.errors import (
    InsufficientFourier,
    InvalidParameter,
    NoConvergence,
    NoRoot,
    NonPeriodic,
    PeakonProximity,
)
from waves.pressure import PressureLaw

TWO_PI = 2.0 * math.pi

GAUSS_LEGENDRE_NODES = 32
"""Quadrature order for the potential W."""
PERIOD_NODES = 256
"""Trapezoid nodes for the period integral."""
PEAKON_MARGIN = 1e-6
"""Closest admissible distance between the crest density and rho_max."""

_nodes, _weights = leggauss(GAUSS_LEGENDRE_NODES)
_UNIT_NODES = 0.5 * (_nodes + 1.0)
_MOMENT_WEIGHTS = 0.5 * _weights * _UNIT_NODES


def _require_supersonic(law: PressureLaw, V: float) -> None:
    if not law.is_supersonic(V):
        raise InvalidParameter(
            f"Wave speed V={V} is not supersonic: V**2 must exceed "
            f"P'(1)={law.sound_speed_squared}"
        )


def _as_output(value: Any) -> Any:
    if np.ndim(value) == 0:
        return float(value)
    return value


def base_wavenumber(law: PressureLaw, V: float) -> float:
    """Wavenumber of the vanishing-amplitude wave, 1 / (2 pi sqrt(h(1; V)))."""
    _require_supersonic(law, V)
    return 1.0 / (math.sqrt(law.h_deriv(1.0, V, 0)) * TWO_PI)


def speed_for_wavenumber(law: PressureLaw, k0: float) -> float:
    """Invert the base wavenumber formula.

    Parameters
    ----------
    law :
        The pressure law.
    k0 :
        Target base wavenumber, positive.

    Returns
    -------
    float
        V = sqrt(P'(1) + 1 / (4 pi**2 k0**2)).

    Examples
    --------
    >>> speed_for_wavenumber(PressureLaw(T=0.25, gamma=2.0), 1.0)
    0.7247972...
    """
    if not k0 > 0.0:
        raise InvalidParameter(f"Base wavenumber k0 must be positive, got {k0}")
    return math.sqrt(law.sound_speed_squared + 1.0 / (TWO_PI * k0) ** 2)


def _moment(law: PressureLaw, offset: ArrayLike, V: float) -> Any:
    """Integral over t in [0, 1] of t h(1 + offset t; V)."""
    offset_array = np.asarray(offset, dtype=float)
    densities = 1.0 + offset_array[..., np.newaxis] * _UNIT_NODES
    return law.h_deriv(densities, V, 0) @ _MOMENT_WEIGHTS


def w_potential(law: PressureLaw, rho: ArrayLike, V: float) -> Any:
    """Profile potential W(rho; V), the integral of (r - 1) h(r; V) from 1 to rho.

    The substitution r = 1 + (rho - 1) t gives W = (rho - 1)**2 times the first
    moment of h along the segment, which keeps W(1; V) = 0 exact.

    Parameters
    ----------
    law :
        The pressure law.
    rho :
        Density, scalar or array, positive.
    V :
        Wave speed.

    Returns
    -------
    float or numpy.ndarray
    """
    rho_array = np.asarray(rho, dtype=float)
    if np.any(rho_array <= 0.0):
        raise InvalidParameter(f"Density must be positive, got {rho}")
    offset = rho_array - 1.0
    return _as_output(offset * offset * _moment(law, offset, V))


def w_dagger(
    law: PressureLaw,
    zeta: ArrayLike,
    V: float,
    max_iterations: int = 50,
    tolerance: float = 1e-13,
) -> Any:
    """Root n near 1 of W(1 + zeta n; V) = zeta**2 h(1; V) / 2.

    Newton iteration on the equation divided by zeta**2, which stays regular at
    zeta = 0, seeded with the first-order expansion of the root. Accepts arrays
    and iterates them together.

    Raises
    ------
    NoConvergence
        When Newton leaves the admissible densities or does not converge in
        max_iterations steps, which happens close to the peakon bound.
    """
    _require_supersonic(law, V)
    zeta_array = np.asarray(zeta, dtype=float)
    h_one = law.h_deriv(1.0, V, 0)
    n = 1.0 - zeta_array * law.h_deriv(1.0, V, 1) / (3.0 * h_one)
    scale = max(1.0, abs(h_one))
    for iteration in range(max_iterations):
        density = 1.0 + zeta_array * n
        if np.any(density <= 0.0):
            raise NoConvergence(f"W-dagger Newton left positive densities at {zeta}")
        residual = n * n * _moment(law, zeta_array * n, V) - 0.5 * h_one
        if np.max(np.abs(residual)) < tolerance * scale:
            logger.debug(f"W-dagger converged after {iteration} Newton steps")
            return _as_output(np.where(zeta_array == 0.0, 1.0, n))
        slope = n * law.h_deriv(density, V, 0)
        if np.any(slope <= 0.0):
            raise NoConvergence(f"W-dagger Newton crossed the peakon bound at {zeta}")
        n = n - residual / slope
    raise NoConvergence(
        f"W-dagger Newton did not converge in {max_iterations} steps at {zeta}"
    )


def _check_amplitude(delta: float) -> None:
    if not delta >= 0.0:
        raise InvalidParameter(f"Amplitude delta must be >= 0, got {delta}")


def wavenumber(
    law: PressureLaw, delta: float, V: float, nodes: int = PERIOD_NODES
) -> float:
    """Wavenumber k of the wave of amplitude delta and speed V.

    1/k = sqrt(h(1; V)) times the integral over [-pi, pi] of
    1 / W-dagger(delta cos(theta); V), by the trapezoid rule.
    """
    _check_amplitude(delta)
    _require_supersonic(law, V)
    theta = -math.pi + TWO_PI * np.arange(nodes) / nodes
    roots = w_dagger(law, delta * np.cos(theta), V)
    integral = (TWO_PI / nodes) * float(np.sum(1.0 / roots))
    return 1.0 / (math.sqrt(law.h_deriv(1.0, V, 0)) * integral)


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Leading coefficients of the small-amplitude expansion at speed V."""

    k0: float
    """Base wavenumber."""
    k2: float
    """Coefficient of delta**2 in the wavenumber."""
    E1_amp: float
    """sin(2 pi x) amplitude of k0 E1."""
    E2_amp: float
    """sin(4 pi x) amplitude of k0 E2."""
    E3_amp6: float
    """sin(6 pi x) amplitude of k0 E3."""
    dW_dagger: float
    """First zeta-derivative of W-dagger at 0."""
    d2W_dagger: float
    """Second zeta-derivative of W-dagger at 0."""


def asymptotic_coeffs(law: PressureLaw, V: float) -> AsymptoticCoefficients:
    """Expansion coefficients of the wave family in terms of h and its derivatives at 1.

    Examples
    --------
    >>> coefficients = asymptotic_coeffs(PressureLaw(T=0.25, gamma=2.0), 1.0)
    >>> coefficients.k2 / coefficients.k0
    1.5
    """
    k0 = base_wavenumber(law, V)
    h_one = law.h_deriv(1.0, V, 0)
    ratio_one = law.h_deriv(1.0, V, 1) / h_one
    ratio_two = law.h_deriv(1.0, V, 2) / h_one
    return AsymptoticCoefficients(
        k0=k0,
        k2=k0 * (ratio_one**2 / 12.0 - ratio_two / 16.0),
        E1_amp=1.0 / TWO_PI,
        E2_amp=-ratio_one / 3.0 / (2.0 * TWO_PI),
        E3_amp6=(3.0 / 16.0) * (ratio_one**2 - 0.25 * ratio_two) / (3.0 * TWO_PI),
        dW_dagger=-ratio_one / 3.0,
        d2W_dagger=(5.0 / 9.0) * ratio_one**2 - 0.25 * ratio_two,
    )


@dataclass(frozen=True)
class PeakonBound:
    """Largest admissible density and amplitude at speed V."""

    rho_max: float
    delta_max: float


def rho_max(law: PressureLaw, V: float) -> PeakonBound:
    """Locate the root of h(.; V) above 1 and the amplitude that reaches it.

    Raises
    ------
    NoRoot
        If h keeps its sign on the searched bracket.
    """
    _require_supersonic(law, V)

    def profile_function(rho: float) -> float:
        return float(law.h_deriv(rho, V, 0))

    upper = 2.0
    while profile_function(upper) > 0.0:
        upper *= 2.0
        if upper > 1e12:
            raise NoRoot(f"h(.; V={V}) has no sign change on (1, {upper})")
    root = float(brentq(profile_function, 1.0, upper, xtol=1e-12))
    delta_max = math.sqrt(2.0 * w_potential(law, root, V) / law.h_deriv(1.0, V, 0))
    logger.debug(f"Peakon bound at V={V}: rho_max={root}, delta_max={delta_max}")
    return PeakonBound(rho_max=root, delta_max=delta_max)


@dataclass(frozen=True)
class WaveParams:
    """Amplitude, speed and invariant level of one wave.

    Use ``WaveParams.create`` so that mu and the admissibility checks are
    derived from the law.
    """

    delta: float
    V: float
    mu: float

    @classmethod
    def create(cls, law: PressureLaw, delta: float, V: float) -> "WaveParams":
        """Validate (delta, V) against the law and derive mu = h(1; V) delta**2 / 2."""
        _check_amplitude(delta)
        _require_supersonic(law, V)
        bound = rho_max(law, V)
        if not delta < bound.delta_max:
            raise InvalidParameter(
                f"Amplitude delta={delta} must stay below the peakon bound "
                f"delta_max={bound.delta_max} at V={V}"
            )
        return cls(delta=delta, V=V, mu=0.5 * law.h_deriv(1.0, V, 0) * delta * delta)


FOURIER_FIELDS = ("v_minus_u", "density", "f2", "f3_curvature", "k_du", "u", "n")
"""Coefficient functions whose Fourier coefficients a profile carries."""


@dataclass(frozen=True)
class WaveProfile:
    """A solved periodic wave sampled on a uniform grid of [0, 1).

    Fourier coefficients are stored for indices -n_fourier..n_fourier, entry r
    at position r + n_fourier, with the convention
    c_r = (1/M) sum_m f(x_m) exp(-2 pi i r x_m).
    """

    law: PressureLaw
    params: WaveParams
    k: float
    k0: float
    x: np.ndarray
    grid_E: np.ndarray
    grid_dE: np.ndarray
    grid_ddE: np.ndarray
    grid_u: np.ndarray
    grid_n: np.ndarray
    n_fourier: int
    periodicity_residual: float
    invariant_residual: float
    symmetry_residual: float
    peakon: PeakonBound
    fourier: dict[str, np.ndarray] = field(repr=False)

    @property
    def M(self) -> int:
        return int(self.x.size)

    @property
    def crest_density(self) -> float:
        return float(1.0 + self.grid_n.max())

    @property
    def trough_density(self) -> float:
        return float(1.0 + self.grid_n.min())

    def coefficients(self, name: str, max_index: int) -> np.ndarray:
        """Fourier coefficients of name for indices -max_index to max_index.

        Raises
        ------
        InsufficientFourier
            When max_index exceeds the stored window.
        """
        if max_index > self.n_fourier:
            raise InsufficientFourier(
                f"Profile carries Fourier indices up to {self.n_fourier}, "
                f"{max_index} requested"
            )
        centre = self.n_fourier
        return self.fourier[name][centre - max_index : centre + max_index + 1]


def _fourier_window(samples: np.ndarray, n_fourier: int) -> np.ndarray:
    """Coefficients -n_fourier..n_fourier of a real periodic sample vector."""
    positive = np.fft.rfft(samples) / samples.size
    return np.concatenate(
        (np.conj(positive[n_fourier:0:-1]), positive[: n_fourier + 1])
    )


def solve_profile(
    law: PressureLaw,
    params: WaveParams,
    M: int = 2048,
    n_fourier: int = 128,
    periodicity_tolerance: float = 1e-8,
) -> WaveProfile:
    """Integrate the profile ODE over one period and sample everything bloch needs.

    E'' = -E / (k**2 h(1 + k E'; V)) with E(0) = 0 and
    E'(0) = delta W-dagger(delta; V) / k, by fixed-step classical Runge-Kutta.

    Parameters
    ----------
    law :
        The pressure law.
    params :
        Validated wave parameters.
    M :
        Number of grid points, a power of two >= 512.
    n_fourier :
        Largest Fourier index kept, below M / 2.
    periodicity_tolerance :
        Largest accepted mismatch of (E, E') after one period.

    Returns
    -------
    WaveProfile

    Raises
    ------
    InvalidParameter
        If params fail the checks of ``WaveParams.create`` or carry another mu.
    PeakonProximity
        If the density gets within 1e-6 of rho_max.
    NonPeriodic
        If the orbit does not close up to periodicity_tolerance.
    """
    if M < 512 or M & (M - 1):
        raise InvalidParameter(f"Grid size M must be a power of two >= 512, got {M}")
    if not 0 < n_fourier < M // 2:
        raise InvalidParameter(f"n_fourier must lie in (0, {M // 2}), got {n_fourier}")
    delta, V = params.delta, params.V
    checked = WaveParams.create(law, delta, V)
    if not math.isclose(params.mu, checked.mu, rel_tol=1e-12, abs_tol=1e-300):
        raise InvalidParameter(
            f"Invariant level mu={params.mu} does not match h(1; V) delta**2 / 2 "
            f"= {checked.mu} (delta={delta}, V={V})"
        )
    peakon = rho_max(law, V)
    k = wavenumber(law, delta, V)
    k0 = base_wavenumber(law, V)
    k_squared = k * k

    def slope(E: float, dE: float) -> tuple[float, float]:
        density = 1.0 + k * dE
        if peakon.rho_max - density < PEAKON_MARGIN or density <= 0.0:
            raise PeakonProximity(
                f"Density {density} reached the peakon bound {peakon.rho_max} "
                f"(delta={delta}, V={V})"
            )
        return dE, -E / (k_squared * law.h_deriv(density, V, 0))

    step = 1.0 / M
    states = np.empty((M + 1, 2))
    states[0] = (0.0, delta * w_dagger(law, delta, V) / k)
    for index in range(M):
        E, dE = states[index]
        a_E, a_dE = slope(E, dE)
        b_E, b_dE = slope(E + 0.5 * step * a_E, dE + 0.5 * step * a_dE)
        c_E, c_dE = slope(E + 0.5 * step * b_E, dE + 0.5 * step * b_dE)
        d_E, d_dE = slope(E + step * c_E, dE + step * c_dE)
        states[index + 1, 0] = E + step * (a_E + 2.0 * b_E + 2.0 * c_E + d_E) / 6.0
        states[index + 1, 1] = dE + step * (
            a_dE + 2.0 * b_dE + 2.0 * c_dE + d_dE
        ) / 6.0

    periodicity = float(np.hypot(*(states[M] - states[0])))
    if periodicity > periodicity_tolerance:
        raise NonPeriodic(
            f"Profile orbit misses closure by {periodicity:.3e} > "
            f"{periodicity_tolerance:.1e} (delta={delta}, V={V}, M={M})"
        )

    grid_E = states[:M, 0].copy()
    grid_dE = states[:M, 1].copy()
    grid_n = k * grid_dE
    density = 1.0 + grid_n
    grid_u = V * grid_n / density
    grid_ddE = -grid_E / (k_squared * law.h_deriv(density, V, 0))
    invariant = 0.5 * grid_E**2 + w_potential(law, density, V) - params.mu
    symmetry = max(
        float(np.max(np.abs(grid_E[1:] + grid_E[:0:-1]))),
        float(np.max(np.abs(grid_u[1:] - grid_u[:0:-1]))),
    )
    samples = {
        "v_minus_u": V - grid_u,
        "density": density,
        "f2": law.f_deriv(density, 2),
        "f3_curvature": law.f_deriv(density, 3) * k_squared * grid_ddE,
        "k_du": V * k_squared * grid_ddE / density**2,
        "u": grid_u,
        "n": grid_n,
    }
    fourier = {
        name: _fourier_window(np.asarray(samples[name], dtype=float), n_fourier)
        for name in FOURIER_FIELDS
    }
    logger.debug(
        f"Profile delta={delta} V={V}: k={k}, periodicity={periodicity:.2e}, "
        f"invariant={float(np.max(np.abs(invariant))):.2e}"
    )
    return WaveProfile(
        law=law,
        params=params,
        k=k,
        k0=k0,
        x=np.arange(M) / M,
        grid_E=grid_E,
        grid_dE=grid_dE,
        grid_ddE=grid_ddE,
        grid_u=grid_u,
        grid_n=grid_n,
        n_fourier=n_fourier,
        periodicity_residual=periodicity,
        invariant_residual=float(np.max(np.abs(invariant))),
        symmetry_residual=symmetry,
        peakon=peakon,
        fourier=fourier,
    )
