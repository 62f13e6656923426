"""This module is used to describe the constant-state spectrum and its crossings."""
import math
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike
from scipy.optimize import bisect

from waves.errors import InvalidParameter, NotFound
from waves.pressure import PressureLaw
from waves.profile import TWO_PI, base_wavenumber

Branch = Literal["+", "-"]

J_MATRIX = np.array([[0.0, -1.0], [1.0, 0.0]])
"""Symplectic structure of the linearized system."""

_BISECT_XTOL = 1e-14


def _branch_sign(branch: str) -> float:
    if branch == "+":
        return 1.0
    if branch == "-":
        return -1.0
    raise InvalidParameter(f"Branch must be '+' or '-', got {branch!r}")


def _as_output(value: Any) -> Any:
    if np.ndim(value) == 0:
        return value.item() if hasattr(value, "item") else value
    return value


def omega(law: PressureLaw, V: float, j: ArrayLike, xi: ArrayLike) -> Any:
    """omega_j(xi) = sqrt(1 + P'(1) k0**2 (2 pi j + xi)**2)."""
    zeta = base_wavenumber(law, V) * (TWO_PI * np.asarray(j) + np.asarray(xi))
    return _as_output(np.sqrt(1.0 + law.sound_speed_squared * zeta * zeta))


def lambda_branch(
    law: PressureLaw, V: float, branch: Branch, j: ArrayLike, xi: ArrayLike
) -> Any:
    """Constant-state eigenvalue i (V zeta +/- omega) at zeta = k0 (2 pi j + xi).

    Examples
    --------
    >>> lambda_branch(PressureLaw(T=0.25, gamma=2.0), 1.0, "+", 0, 0.0)
    1j
    """
    sign = _branch_sign(branch)
    zeta = base_wavenumber(law, V) * (TWO_PI * np.asarray(j) + np.asarray(xi))
    root = np.sqrt(1.0 + law.sound_speed_squared * zeta * zeta)
    return _as_output(1j * (V * zeta + sign * root))


def krein_form(
    law: PressureLaw, V: float, branch: Branch, j: int, xi: float
) -> complex:
    """Gram value <J^-1 phi, phi> of the eigenvector phi = (1, -/+ i omega).

    The product is conjugate-linear in its first slot; the value is
    +2i omega on the + branch and -2i omega on the - branch.
    """
    sign = _branch_sign(branch)
    vector = np.array([1.0, -sign * 1j * omega(law, V, j, xi)])
    return complex(np.vdot(np.linalg.solve(J_MATRIX, vector), vector))


def krein_signature(
    law: PressureLaw, V: float, branch: Branch, j: int, xi: float
) -> int:
    """Sign of <i J^-1 phi, phi> on the constant-state eigenvector of a branch."""
    value = (-1j * krein_form(law, V, branch, j, xi)).real
    return 1 if value > 0.0 else -1


@dataclass(frozen=True)
class Crossing:
    """Double eigenvalue lambda_-^j(xi0) = lambda_+^{j'}(xi0) of the constant state."""

    ell: int
    """Frequency gap j - j'."""
    sign: Branch
    j: int
    j_prime: int
    xi0: float
    lambda0: complex
    omega_j: float
    omega_jprime: float
    at_minus_pi: bool = False
    """True when xi0 falls exactly on the left end of the Floquet interval."""

    @property
    def z(self) -> float:
        """Position j + xi0 / (2 pi) + 1/2 on the continuous index line."""
        return self.j + self.xi0 / TWO_PI + 0.5

    def to_record(self, law: PressureLaw, V: float) -> dict[str, Any]:
        """Flat JSON-ready record, including the Krein signatures of the pair."""
        return {
            "ell": self.ell,
            "sign": self.sign,
            "j": self.j,
            "j_prime": self.j_prime,
            "xi0": self.xi0,
            "lambda0_im": self.lambda0.imag,
            "omega_j": self.omega_j,
            "omega_jprime": self.omega_jprime,
            "at_minus_pi": self.at_minus_pi,
            "krein_j": krein_signature(law, V, "-", self.j, self.xi0),
            "krein_jprime": krein_signature(law, V, "+", self.j_prime, self.xi0),
        }


def _check_gap(ell: int) -> None:
    if ell < 2:
        raise InvalidParameter(f"Frequency gap ell must be >= 2, got {ell}")


def _build_crossing(
    law: PressureLaw, V: float, ell: int, sign: Branch, j: int, xi0: float
) -> Crossing:
    lambda0 = 0j if ell == 2 else complex(lambda_branch(law, V, "-", j, xi0))
    return Crossing(
        ell=ell,
        sign=sign,
        j=j,
        j_prime=j - ell,
        xi0=xi0,
        lambda0=lambda0,
        omega_j=float(omega(law, V, j, xi0)),
        omega_jprime=float(omega(law, V, j - ell, xi0)),
        at_minus_pi=xi0 == -math.pi,
    )


def find_crossing(law: PressureLaw, V: float, ell: int, sign: Branch) -> Crossing:
    """Closed-form location of the crossing with gap ell on the given side.

    z = (ell + 1 +/- sqrt(ell**2 - 4) V / sqrt(P'(1))) / 2 is split once into
    its integer part j and fractional part, xi0 / (2 pi) = frac(z) - 1/2.
    For ell = 2 the sign is ignored and the crossing is (1, -1, 0, 0).
    """
    _check_gap(ell)
    side = _branch_sign(sign)
    if not law.is_supersonic(V):
        raise InvalidParameter(f"Wave speed V={V} is not supersonic")
    if ell == 2:
        return _build_crossing(law, V, 2, sign, 1, 0.0)
    ratio = V / math.sqrt(law.sound_speed_squared)
    z = 0.5 * (ell + 1 + side * math.sqrt(ell * ell - 4) * ratio)
    j = math.floor(z)
    xi0 = TWO_PI * ((z - j) - 0.5)
    return _build_crossing(law, V, ell, sign, j, xi0)


def crossing_catalogue(law: PressureLaw, V: float, ell_max: int) -> list[Crossing]:
    """All crossings with 2 <= ell <= ell_max; ell = 2 appears once."""
    catalogue = [find_crossing(law, V, 2, "+")]
    for ell in range(3, ell_max + 1):
        catalogue.append(find_crossing(law, V, ell, "+"))
        catalogue.append(find_crossing(law, V, ell, "-"))
    return catalogue


def crossing_oracle(law: PressureLaw, V: float, ell: int, sign: Branch) -> Crossing:
    """Locate the crossing by root finding, independently of the closed form.

    For every j in a window, the gap g(xi) = Im(lambda_-^j - lambda_+^{j-ell})
    is concave in xi. Bisection on g' finds its maximum, then bisection on g
    finds the roots on either side. A maximum sitting on zero is a tangential
    root, which is how the ell = 2 crossing appears.

    Raises
    ------
    NotFound
        If no root exists on the requested side.
    """
    _check_gap(ell)
    side = _branch_sign(sign)
    k0 = base_wavenumber(law, V)
    sound = law.sound_speed_squared
    reach = int(math.ceil(ell * (1.0 + V / math.sqrt(sound)))) + 2

    def gap(j: int, xi: float) -> float:
        ahead = k0 * (TWO_PI * j + xi)
        behind = k0 * (TWO_PI * (j - ell) + xi)
        return (
            V * (ahead - behind)
            - math.sqrt(1.0 + sound * ahead * ahead)
            - math.sqrt(1.0 + sound * behind * behind)
        )

    def gap_slope(j: int, xi: float) -> float:
        ahead = k0 * (TWO_PI * j + xi)
        behind = k0 * (TWO_PI * (j - ell) + xi)
        return -k0 * sound * (
            ahead / math.sqrt(1.0 + sound * ahead * ahead)
            + behind / math.sqrt(1.0 + sound * behind * behind)
        )

    for j in range(-reach, reach + 1):
        lower, upper = -math.pi, math.pi
        if gap_slope(j, lower) <= 0.0:
            peak = lower
        elif gap_slope(j, upper) >= 0.0:
            peak = upper
        else:
            peak = bisect(lambda xi: gap_slope(j, xi), lower, upper, xtol=_BISECT_XTOL)
        roots: list[float] = []
        top = gap(j, peak)
        if abs(top) <= 1e-12 * max(1.0, V * k0 * TWO_PI * ell):
            roots.append(peak)
        elif top > 0.0:
            for start, stop in ((lower, peak), (peak, upper)):
                if gap(j, start) == 0.0:
                    roots.append(start)
                elif gap(j, start) * gap(j, stop) < 0.0:
                    roots.append(
                        bisect(lambda xi: gap(j, xi), start, stop, xtol=_BISECT_XTOL)
                    )
        for xi in roots:
            if xi >= math.pi:
                continue
            position = j + xi / TWO_PI - 0.5 * ell
            if ell == 2 or side * position > 0.0:
                logger.debug(f"Oracle crossing ell={ell} sign={sign}: j={j}, xi={xi}")
                return _build_crossing(law, V, ell, sign, j, xi)
    raise NotFound(f"No crossing for ell={ell}, sign={sign} at V={V}")
