"""This module is used to evaluate the analytic stability indices of the wave family."""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np
from loguru import logger

from waves.crossings import J_MATRIX, Crossing, find_crossing, krein_form
from waves.errors import InvalidParameter
from waves.pressure import PressureLaw
from waves.profile import TWO_PI, asymptotic_coeffs

Classification = Literal["side-band-stable", "side-band-unstable"]

NILPOTENT = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class ModulationReport:
    """Sign information of the modulational (side-band) problem at speed V."""

    V: float
    k0: float
    k2: float
    c02: float
    classification: Classification


def modulational_index(law: PressureLaw, V: float) -> ModulationReport:
    """Classify side-band stability through the sign of k2.

    c02 = -k2 (V**2 - P'(1)) / V; the wave family is side-band stable
    near the origin when k2 > 0.
    """
    coefficients = asymptotic_coeffs(law, V)
    k2 = coefficients.k2
    return ModulationReport(
        V=V,
        k0=coefficients.k0,
        k2=k2,
        c02=-k2 * (V * V - law.sound_speed_squared) / V,
        classification="side-band-stable" if k2 > 0.0 else "side-band-unstable",
    )


@dataclass(frozen=True)
class CrossingAlgebra:
    """Reduced 2x2 algebra at the ell = 3, + crossing.

    Blocks are indexed by p, the distance of the input Fourier mode j - p to
    the upper mode j of the crossing; a(p) = 3/2 - p + s is the scaled
    frequency of that mode, so that a(0) belongs to omega_j and a(3) to
    omega_j'. Every constant is evaluated at density 1 and Floquet exponent xi0.
    """

    V: float
    crossing: Crossing
    s: float
    kappa0: float
    sound: float
    h_ratio: float
    """h'(1) / (3 h(1))."""
    f3: float
    sigma: tuple[float, float, float, float, float]

    @classmethod
    def create(cls, law: PressureLaw, V: float) -> "CrossingAlgebra":
        crossing = find_crossing(law, V, 3, "+")
        h_one = law.h_deriv(1.0, V, 0)
        ratio_one = law.h_deriv(1.0, V, 1) / h_one
        ratio_two = law.h_deriv(1.0, V, 2) / h_one
        f3, f4, f5 = (law.f_deriv(1.0, order) for order in (3, 4, 5))
        third = ratio_one / 3.0
        sigma2 = (3.0 / 16.0) * (ratio_one**2 - 0.25 * ratio_two)
        sigma = (
            V * (0.5 + third),
            f3 * third - 0.25 * f4,
            sigma2,
            V * (sigma2 + 0.25 + third),
            f3 * sigma2 - f4 * ratio_one / 6.0 + f5 / 24.0,
        )
        return cls(
            V=V,
            crossing=crossing,
            s=crossing.j + crossing.xi0 / TWO_PI - 1.5,
            kappa0=TWO_PI * asymptotic_coeffs(law, V).k0,
            sound=law.sound_speed_squared,
            h_ratio=third,
            f3=f3,
            sigma=sigma,
        )

    @property
    def omega_j(self) -> float:
        return self.crossing.omega_j

    @property
    def omega_jprime(self) -> float:
        return self.crossing.omega_jprime

    @property
    def lambda0(self) -> complex:
        return self.crossing.lambda0

    def frequency(self, p: int) -> float:
        return 1.5 - p + self.s

    def omega(self, p: int) -> float:
        scaled = self.kappa0 * self.frequency(p)
        return math.sqrt(1.0 + self.sound * scaled * scaled)

    def chi(self, p: int) -> complex:
        return self.lambda0 - 1j * self.kappa0 * self.V * self.frequency(p)

    def d(self, p: int) -> complex:
        chi = self.chi(p)
        return 1.0 / (chi * chi + self.omega(p) ** 2)

    def constant_block(self, p: int) -> np.ndarray:
        """Constant-state symbol on mode j - p."""
        a, kappa = self.frequency(p), self.kappa0
        return np.array(
            [
                [1j * kappa * self.V * a, -1.0],
                [1.0 + self.sound * kappa**2 * a**2, 1j * kappa * self.V * a],
            ]
        )

    def resolvent(self, p: int) -> np.ndarray:
        """(lambda0 - constant_block(p))^-1 as nilpotent plus rank one."""
        chi = self.chi(p)
        return NILPOTENT + self.d(p) * np.outer([1.0, -chi], [chi, -1.0])

    def first_order_block(self, p: int) -> np.ndarray:
        """Shift -1 block acting on mode j - p."""
        a, kappa, V = self.frequency(p), self.kappa0, self.V
        return -0.5 * np.array(
            [
                [1j * kappa * V * a, 1.0],
                [-self.f3 * kappa**2 * a * (a - 1.0), 1j * kappa * V * (a - 1.0)],
            ]
        )

    def second_order_block(self, p: int) -> np.ndarray:
        """Shift -2 block acting on mode j - p."""
        a, kappa = self.frequency(p), self.kappa0
        sigma0, sigma1 = self.sigma[0], self.sigma[1]
        return 0.5 * np.array(
            [
                [1j * kappa * sigma0 * a, self.h_ratio],
                [-(kappa**2) * sigma1 * a * (a - 2.0), 1j * kappa * sigma0 * (a - 2.0)],
            ]
        )

    def third_order_block(self) -> np.ndarray:
        """Shift -3 block acting on mode j."""
        a, kappa = self.frequency(0), self.kappa0
        sigma2, sigma3, sigma4 = self.sigma[2], self.sigma[3], self.sigma[4]
        return -0.5 * np.array(
            [
                [1j * kappa * sigma3 * a, sigma2],
                [-(kappa**2) * sigma4 * a * (a - 3.0), 1j * kappa * sigma3 * (a - 3.0)],
            ]
        )

    def coupling(self) -> np.ndarray:
        """Third-order coupling from mode j down to mode j - 3."""
        one = self.first_order_block
        return (
            self.third_order_block()
            + one(2) @ self.resolvent(2) @ self.second_order_block(0)
            + self.second_order_block(1) @ self.resolvent(1) @ one(0)
            + one(2) @ self.resolvent(2) @ one(1) @ self.resolvent(1) @ one(0)
        )

    def alphas(self) -> tuple[complex, complex, complex, complex, complex, complex]:
        kappa, V, s = self.kappa0, self.V, self.s
        sigma0, sigma1 = self.sigma[0], self.sigma[1]
        chi1, chi2 = self.chi(1), self.chi(2)
        q = self.h_ratio
        return (
            1j * kappa * V * chi2 + self.f3 * kappa**2 * (s - 0.5),
            1j * kappa * sigma0 * chi2 + kappa**2 * sigma1 * (s - 0.5),
            -q * chi2 + 1j * kappa * sigma0 * (s - 0.5),
            1j * kappa * sigma0 * (0.5 + s) - chi1 * q,
            kappa**2 * sigma1 * (0.5 + s) + 1j * kappa * sigma0 * chi1,
            1j * kappa * V * chi1 + self.f3 * kappa**2 * (0.5 + s),
        )

    def scalar_terms(self) -> tuple[complex, complex, complex, complex]:
        """The four closed-form contributions whose sum is the index."""
        kappa, V, s, q = self.kappa0, self.V, self.s, self.h_ratio
        sigma0, _, sigma2, sigma3, sigma4 = self.sigma
        w, wp = self.omega_j, self.omega_jprime
        chi1, chi2 = self.chi(1), self.chi(2)
        d1, d2 = self.d(1), self.d(2)
        a1, a2, a3, a4, a5, a6 = self.alphas()
        kv = kappa * V

        first = (
            0.5
            * (
                kappa * sigma3 * (s * (w - wp) - 1.5 * (wp + w))
                - sigma2 * w * wp
                + kappa**2 * sigma4 * (s * s - 2.25)
            )
            + 0.25 * (-wp + kv * (s - 1.5)) * (kappa * sigma0 * (1.5 + s) + w * q)
            + 0.25 * (-wp * q + kappa * sigma0 * (s - 1.5)) * (kv * (1.5 + s) + w)
            + 0.125 * (-wp + kv * (s - 1.5)) * (kv * (1.5 + s) + w)
        )
        second = (
            d2
            / 8.0
            * (-wp * (1j * kv * (s - 0.5) - chi2) + 1j * a1 * (s - 1.5))
            * (
                -2.0 * (1j * a2 * (1.5 + s) + w * a3)
                + (chi2 - 1j * kv * (s - 0.5)) * (kv * (1.5 + s) + w)
            )
        )
        third = (
            d1
            / 8.0
            * (-1j * a6 * (1.5 + s) + w * (chi1 - 1j * kv * (0.5 + s)))
            * (
                2.0 * (-wp * a4 + 1j * a5 * (s - 1.5))
                + (1j * kv * (0.5 + s) - chi1) * (-wp + kv * (s - 1.5))
            )
        )
        fourth = (
            d1
            * d2
            / 8.0
            * (a1 * (0.5 + s) - chi1 * (chi2 - 1j * kv * (s - 0.5)))
            * (1j * wp * (1j * kv * (s - 0.5) - chi2) + a1 * (s - 1.5))
            * (a6 * (1.5 + s) + 1j * w * (chi1 - 1j * kv * (0.5 + s)))
        )
        return complex(first), complex(second), complex(third), complex(fourth)


def gamma_matrix(law: PressureLaw, V: float) -> complex:
    """Index from the reduced 2x2 linear algebra.

    Gamma = <J V+, N V->, with V+ = (1, -i omega_j'), V- = (1, i omega_j),
    N the third-order coupling, and the product conjugate-linear in its first
    slot.
    """
    algebra = CrossingAlgebra.create(law, V)
    upper = np.array([1.0, -1j * algebra.omega_jprime])
    lower = np.array([1.0, 1j * algebra.omega_j])
    return complex(np.vdot(J_MATRIX @ upper, algebra.coupling() @ lower))


@dataclass(frozen=True)
class GammaReport:
    """Instability index at the ell = 3 crossing and every ingredient of it."""

    V: float
    crossing: Crossing
    gamma_matrix: complex
    gamma_scalar: complex
    gamma_abs: float
    f_gamma_limit: float
    growth_coefficient: float
    s: float
    kappa0: float
    sigma: tuple[float, float, float, float, float]
    alphas: tuple[complex, complex, complex, complex, complex, complex]
    chi: tuple[complex, complex]
    """chi_{j-1}, chi_{j-2}."""
    d: tuple[complex, complex]
    """d_{j-1}, d_{j-2}."""
    terms: tuple[complex, complex, complex, complex]
    krein_plus: complex
    """<J^-1 q+, q+> = 2i omega_j'."""
    krein_minus: complex
    """<J^-1 q-, q-> = -2i omega_j."""

    @property
    def imag_ratio(self) -> float:
        if self.gamma_abs == 0.0:
            return 0.0
        return abs(self.gamma_matrix.imag) / self.gamma_abs

    @property
    def route_discrepancy(self) -> float:
        return abs(self.gamma_matrix - self.gamma_scalar)


def gamma_scalar(law: PressureLaw, V: float) -> GammaReport:
    """Index from the closed-form scalar expansion, next to the matrix route.

    The scalar terms cancel against each other as V grows, so the two routes
    drift apart in relative terms: about 1e-11 up to V = 100 c, about 1e-8 at
    V = 500 c, with c the sound speed. Trust the matrix route far out.
    """
    algebra = CrossingAlgebra.create(law, V)
    terms = algebra.scalar_terms()
    matrix_value = gamma_matrix(law, V)
    crossing = algebra.crossing
    report = GammaReport(
        V=V,
        crossing=crossing,
        gamma_matrix=matrix_value,
        gamma_scalar=sum(terms, 0j),
        gamma_abs=abs(matrix_value),
        f_gamma_limit=gamma_asymptotic(law.gamma),
        growth_coefficient=abs(matrix_value)
        / (2.0 * math.sqrt(crossing.omega_jprime * crossing.omega_j)),
        s=algebra.s,
        kappa0=algebra.kappa0,
        sigma=algebra.sigma,
        alphas=algebra.alphas(),
        chi=(algebra.chi(1), algebra.chi(2)),
        d=(algebra.d(1), algebra.d(2)),
        terms=terms,
        krein_plus=krein_form(law, V, "+", crossing.j_prime, crossing.xi0),
        krein_minus=krein_form(law, V, "-", crossing.j, crossing.xi0),
    )
    logger.debug(
        f"Gamma at V={V}: {report.gamma_matrix} (routes differ by "
        f"{report.route_discrepancy:.2e})"
    )
    return report


def gamma_asymptotic_fraction(gamma_exponent: float) -> Fraction:
    """Exact large-speed limit -(65 g**3 + 315 g**2 + 115 g - 135) / 6144."""
    if not gamma_exponent >= 1.0:
        raise InvalidParameter(f"gamma must be >= 1, got {gamma_exponent}")
    g = Fraction(gamma_exponent)
    return -(65 * g**3 + 315 * g**2 + 115 * g - 135) / 6144


def gamma_asymptotic(gamma_exponent: float) -> float:
    """Large-speed limit of the index for the power law with this exponent.

    Examples
    --------
    >>> gamma_asymptotic(3.0)
    -0.78125
    """
    return float(gamma_asymptotic_fraction(gamma_exponent))


def predicted_growth(law: PressureLaw, V: float, delta: float) -> float:
    """Leading growth rate of the ell = 3 bubble.

    |Gamma| delta**3 / (2 sqrt(omega_j' omega_j)), with both frequencies at xi0.
    """
    if not delta >= 0.0:
        raise InvalidParameter(f"Amplitude delta must be >= 0, got {delta}")
    return gamma_scalar(law, V).growth_coefficient * delta**3


@dataclass(frozen=True)
class IndexSweep:
    """Indices along a list of speeds."""

    modulation: list[ModulationReport]
    gamma: list[GammaReport]
    breakpoints: list[int]
    """Positions where the integer part j of the ell = 3 crossing changes."""


def gamma_sweep(law: PressureLaw, V_values: Sequence[float]) -> IndexSweep:
    """Evaluate both indices on every speed and flag the jumps of j."""
    modulation = [modulational_index(law, V) for V in V_values]
    gamma = [gamma_scalar(law, V) for V in V_values]
    breakpoints = [
        index
        for index in range(1, len(gamma))
        if gamma[index].crossing.j != gamma[index - 1].crossing.j
    ]
    return IndexSweep(modulation=modulation, gamma=gamma, breakpoints=breakpoints)
