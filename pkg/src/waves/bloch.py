"""This module is used to compute Floquet-Bloch spectra by Hill's method."""
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.linalg import LinAlgError, eigvals

from waves.crossings import Crossing
from waves.errors import EigensolverFailure, InvalidParameter
from waves.pressure import PressureLaw
from waves.profile import TWO_PI, WaveParams, WaveProfile, solve_profile

MIN_TRUNCATION = 4
NOISE_FLOOR_MINIMUM = 1e-11
"""Absolute floor below which real parts are treated as zero."""
RESOLVED_BUBBLE_SLICES = 25
"""Refinement stops once a bubble spans this many samples."""
MAX_WINDOW_SLIDES = 4
"""Window moves allowed while a collision sits beyond the window edge."""


@dataclass(frozen=True)
class BlochOperator:
    """Fourier truncation of the Bloch symbol at one Floquet exponent.

    Rows and columns are ordered as (j, component) with j from -N to N and the
    component E before u, so entry (2 (j + N) + a, 2 (m + N) + b).
    """

    xi: float
    N: int
    matrix: np.ndarray


@dataclass(frozen=True)
class SpectrumSlice:
    """Eigenvalues of one truncated Bloch operator."""

    xi: float
    eigenvalues: np.ndarray
    max_real: float


@dataclass(frozen=True)
class Bubble:
    """A run of Floquet exponents where the spectrum leaves the imaginary axis."""

    xi_center: float
    xi_extent: float
    max_growth: float
    lambda_at_max: complex

    def to_record(self) -> dict[str, float]:
        return {
            "xi_center": self.xi_center,
            "xi_extent": self.xi_extent,
            "max_growth": self.max_growth,
            "lambda_re": self.lambda_at_max.real,
            "lambda_im": self.lambda_at_max.imag,
        }


@dataclass(frozen=True)
class Refinement:
    """Samples taken around one crossing and the bubble found there, if any."""

    crossing: Crossing
    slices: list[SpectrumSlice]
    bubble: Optional[Bubble]


def wrap_floquet(xi: float) -> float:
    """Map a Floquet exponent to [-pi, pi)."""
    wrapped = math.fmod(xi + math.pi, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    return wrapped - math.pi


def uniform_grid(points: int) -> np.ndarray:
    """points equally spaced Floquet exponents on [-pi, pi)."""
    return -math.pi + TWO_PI * np.arange(points) / points


def assemble(profile: WaveProfile, xi: float, N: int) -> BlochOperator:
    """Build the 2(2N+1) square Hill matrix of the Bloch symbol at xi.

    With D_m = i k (2 pi m + xi), the block of row j and column m is
    [[c(V-u) D_m, -c(1+kE')], [delta_jm - c(F'') D_m**2 - c(F''' k**2 E'') D_m,
    c(V-u) D_m - c(k u')]], every coefficient c taken at index j - m and
    multiplying the derivative from the left.

    Raises
    ------
    InvalidParameter
        If xi lies outside [-pi, pi) or N < 4.
    InsufficientFourier
        If the profile does not reach Fourier index 2N.
    """
    if N < MIN_TRUNCATION:
        raise InvalidParameter(f"Truncation N must be >= {MIN_TRUNCATION}, got {N}")
    if not -math.pi <= xi < math.pi:
        raise InvalidParameter(f"Floquet exponent must lie in [-pi, pi), got {xi}")
    reach = 2 * N
    transport = profile.coefficients("v_minus_u", reach)
    density = profile.coefficients("density", reach)
    stiffness = profile.coefficients("f2", reach)
    curvature = profile.coefficients("f3_curvature", reach)
    shear = profile.coefficients("k_du", reach)

    modes = np.arange(-N, N + 1)
    offsets = modes[:, np.newaxis] - modes[np.newaxis, :] + reach
    derivative = 1j * profile.k * (TWO_PI * modes + xi)
    advection = transport[offsets] * derivative

    size = 2 * modes.size
    matrix = np.empty((size, size), dtype=complex)
    matrix[0::2, 0::2] = advection
    matrix[0::2, 1::2] = -density[offsets]
    matrix[1::2, 0::2] = (
        np.eye(modes.size)
        - stiffness[offsets] * derivative**2
        - curvature[offsets] * derivative
    )
    matrix[1::2, 1::2] = advection - shear[offsets]
    return BlochOperator(xi=xi, N=N, matrix=matrix)


def spectrum(operator: BlochOperator) -> SpectrumSlice:
    """All eigenvalues of a Hill matrix, ordered by imaginary then real part.

    Raises
    ------
    EigensolverFailure
        If LAPACK fails or returns non-finite values.
    """
    try:
        eigenvalues = eigvals(operator.matrix, overwrite_a=False, check_finite=True)
    except (LinAlgError, ValueError) as exc:
        raise EigensolverFailure(f"Eigensolver failed at xi={operator.xi}: {exc}")
    if not np.all(np.isfinite(eigenvalues)):
        raise EigensolverFailure(f"Non-finite eigenvalues at xi={operator.xi}")
    eigenvalues = eigenvalues[np.lexsort((eigenvalues.real, eigenvalues.imag))]
    return SpectrumSlice(
        xi=operator.xi,
        eigenvalues=eigenvalues,
        max_real=float(eigenvalues.real.max()),
    )


def scan(profile: WaveProfile, xi_grid: Sequence[float], N: int) -> list[SpectrumSlice]:
    """One spectrum slice per Floquet exponent, in the order given."""
    slices = [spectrum(assemble(profile, float(xi), N)) for xi in xi_grid]
    logger.debug(
        f"Scanned {len(slices)} Floquet exponents at delta={profile.params.delta}, "
        f"N={N}"
    )
    return slices


def interior_mask(eigenvalues: np.ndarray, profile: WaveProfile, N: int) -> Any:
    """True for eigenvalues inside the resolved window |Im| < V k0 2 pi N / 2."""
    bound = profile.params.V * profile.k0 * TWO_PI * N / 2.0
    return np.abs(eigenvalues.imag) < bound


def origin_growth(slices: Sequence[SpectrumSlice], radius: float) -> float:
    """Largest real part among eigenvalues within radius of the origin.

    NaN when no eigenvalue lies that close, so the result never reads as
    stable by default.
    """
    nearby = [
        eigenvalue.real
        for piece in slices
        for eigenvalue in piece.eigenvalues
        if abs(eigenvalue) < radius
    ]
    if not nearby:
        logger.warning(f"No eigenvalue within {radius} of the origin")
        return math.nan
    return float(max(nearby))


def noise_floor(
    law: PressureLaw,
    V: float,
    xi_grid: Sequence[float],
    N: int,
    M: int = 2048,
) -> float:
    """Largest |Re| over a constant-state scan, the eigensolver's noise level."""
    flat = solve_profile(law, WaveParams.create(law, 0.0, V), M=M, n_fourier=4 * N)
    level = max(
        float(np.max(np.abs(piece.eigenvalues.real)))
        for piece in scan(flat, xi_grid, N)
    )
    logger.debug(f"Constant-state noise floor at V={V}, N={N}: {level:.3e}")
    return level


def bubble_threshold(floor: float) -> float:
    """Detection threshold for a measured noise floor."""
    return max(10.0 * floor, NOISE_FLOOR_MINIMUM)


def _runs(
    positions: Sequence[float],
    slices: Sequence[SpectrumSlice],
    growth: Sequence[float],
    peak_eigenvalue: Callable[[SpectrumSlice], complex],
    threshold: float,
) -> list[Bubble]:
    bubbles: list[Bubble] = []
    start: Optional[int] = None
    for index in range(len(slices) + 1):
        inside = index < len(slices) and growth[index] > threshold
        if inside and start is None:
            start = index
        elif not inside and start is not None:
            best = max(range(start, index), key=lambda position: growth[position])
            bubbles.append(
                Bubble(
                    xi_center=slices[best].xi,
                    xi_extent=positions[index - 1] - positions[start],
                    max_growth=growth[best],
                    lambda_at_max=peak_eigenvalue(slices[best]),
                )
            )
            start = None
    return bubbles


def _rightmost(piece: SpectrumSlice) -> complex:
    return complex(piece.eigenvalues[np.argmax(piece.eigenvalues.real)])


def bubble_detect(slices: Sequence[SpectrumSlice], threshold: float) -> list[Bubble]:
    """Maximal runs of consecutive slices whose max_real exceeds threshold.

    Parameters
    ----------
    slices :
        Spectrum slices sorted by xi.
    threshold :
        Real-part level separating instability from eigensolver noise.

    Returns
    -------
    list[Bubble]
        One entry per run, reported at its slice of largest growth; empty when
        the spectrum stays on the imaginary axis.
    """
    return _runs(
        [piece.xi for piece in slices],
        slices,
        [piece.max_real for piece in slices],
        _rightmost,
        threshold,
    )


def _colliding_pair(piece: SpectrumSlice, target: float) -> np.ndarray:
    """The two eigenvalues closest to i * target."""
    order = np.argsort(np.abs(piece.eigenvalues - 1j * target))
    return piece.eigenvalues[order[:2]]


def refine_crossing(
    profile: WaveProfile,
    crossing: Crossing,
    N: int,
    points: int = 100,
    half_width: float = 0.25,
    levels: int = 8,
    threshold: float = 1e-10,
) -> Refinement:
    """Zoom onto the instability bubble born at a crossing.

    Each level samples points exponents around the current centre. The pair
    of eigenvalues nearest to lambda0 is followed: before a bubble is seen the
    window recentres on their smallest imaginary gap and shrinks tenfold,
    afterwards it recentres on the largest growth and spans the observed
    bubble. Zooming stops once the bubble covers enough samples.

    The collision drifts from xi0 by O(delta**2). When the smallest gap lies
    on an end of the window, the window slides onto that end at unchanged
    width, up to MAX_WINDOW_SLIDES times, without using up a level.
    """
    target = crossing.lambda0.imag
    centre, width = crossing.xi0, half_width
    samples: dict[float, tuple[SpectrumSlice, float]] = {}
    level, slides = 0, 0
    while level < levels:
        positions = centre + np.linspace(-width, width, points)
        pieces = [spectrum(assemble(profile, wrap_floquet(xi), N)) for xi in positions]
        pairs = [_colliding_pair(piece, target) for piece in pieces]
        growth = np.array([float(pair.real.max()) for pair in pairs])
        gaps = np.array([abs(pair[0].imag - pair[1].imag) for pair in pairs])
        for position, piece, value in zip(positions, pieces, growth):
            samples[float(position)] = (piece, float(value))
        above = growth > threshold
        logger.debug(
            f"Refinement ell={crossing.ell}{crossing.sign} level {level}: "
            f"width={width:.2e}, {int(above.sum())} unstable samples"
        )
        if above.sum() >= RESOLVED_BUBBLE_SLICES:
            break
        spacing = 2.0 * width / (points - 1)
        closest = int(np.argmin(gaps))
        if above.any():
            centre = float(positions[int(np.argmax(growth))])
            width = max(float(np.ptp(positions[above])), 2.0 * spacing)
        elif closest in (0, points - 1) and slides < MAX_WINDOW_SLIDES:
            centre = float(positions[closest])
            slides += 1
            logger.debug(
                f"Refinement ell={crossing.ell}{crossing.sign}: gap minimum on the "
                f"window edge, sliding to xi={centre:.4f}"
            )
            continue
        else:
            centre = float(positions[closest])
            width = 5.0 * spacing
        level += 1

    ordered = sorted(samples)
    slices = [samples[position][0] for position in ordered]
    growth_values = [samples[position][1] for position in ordered]

    def pair_peak(piece: SpectrumSlice) -> complex:
        pair = _colliding_pair(piece, target)
        return complex(pair[np.argmax(pair.real)])

    bubbles = _runs(ordered, slices, growth_values, pair_peak, threshold)
    bubble = max(bubbles, key=lambda found: found.max_growth) if bubbles else None
    return Refinement(crossing=crossing, slices=slices, bubble=bubble)
