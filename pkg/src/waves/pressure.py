"""This module is used to model the pressure law and the functions derived from it."""
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from waves.errors import InvalidParameter


def _falling(base: float, count: int) -> float:
    """Falling factorial base(base-1)...(base-count+1), 1 for count 0."""
    return math.prod(base - i for i in range(count))


def _positive_density(rho: ArrayLike) -> Any:
    rho_array = np.asarray(rho, dtype=float)
    if np.any(rho_array <= 0.0):
        raise InvalidParameter(f"Density must be positive, got {rho}")
    return rho_array


def _as_output(value: Any) -> Any:
    """Return a python float for scalar input, an array otherwise."""
    if np.ndim(value) == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class PressureLaw:
    """Polytropic pressure law P(rho) = T rho**gamma.

    The internal energy F is fixed through F''(rho) = P'(rho) / rho and the
    profile function is h(rho; V) = V**2 / rho**3 - F''(rho).

    Parameters
    ----------
    T : float
        Pressure scale, positive.
    gamma : float
        Adiabatic exponent, at least one.
    """

    T: float
    gamma: float

    def __post_init__(self) -> None:
        if not self.T > 0.0:
            raise InvalidParameter(f"Pressure scale T must be positive, got {self.T}")
        if not self.gamma >= 1.0:
            raise InvalidParameter(
                f"Adiabatic exponent gamma must be >= 1, got {self.gamma}"
            )

    @property
    def sound_speed_squared(self) -> float:
        """P'(1) = T gamma."""
        return self.T * self.gamma

    def is_supersonic(self, V: float) -> bool:
        """True when V**2 > P'(1)."""
        return V * V > self.sound_speed_squared

    def p_deriv(self, rho: ArrayLike, order: int) -> Any:
        """Derivative of P of the requested order.

        Parameters
        ----------
        rho :
            Density, scalar or array, positive.
        order :
            Derivative order between 0 and 5.

        Returns
        -------
        float or numpy.ndarray
            d^order/drho^order [T rho**gamma].

        Raises
        ------
        InvalidParameter
            On a non-positive density or an order out of range.
        """
        if order not in range(6):
            raise InvalidParameter(f"P derivative order must be 0..5, got {order}")
        rho_array = _positive_density(rho)
        coefficient = self.T * _falling(self.gamma, order)
        if coefficient == 0.0:
            return _as_output(np.zeros_like(rho_array))
        return _as_output(coefficient * rho_array ** (self.gamma - order))

    def f_deriv(self, rho: ArrayLike, order: int) -> Any:
        """Derivative of the internal energy F, orders 2 to 5.

        F'' = T gamma rho**(gamma - 2) and the higher orders follow by
        differentiation.
        """
        if order not in range(2, 6):
            raise InvalidParameter(f"F derivative order must be 2..5, got {order}")
        rho_array = _positive_density(rho)
        coefficient = self.T * self.gamma * _falling(self.gamma - 2.0, order - 2)
        if coefficient == 0.0:
            return _as_output(np.zeros_like(rho_array))
        return _as_output(coefficient * rho_array ** (self.gamma - order))

    def h_deriv(self, rho: ArrayLike, V: float, order: int) -> Any:
        """Derivative of h(rho; V) = V**2 / rho**3 - F''(rho), orders 0 to 3.

        Examples
        --------
        >>> PressureLaw(T=0.25, gamma=2.0).h_deriv(1.0, 1.0, 1)
        -3.0
        """
        if order not in range(4):
            raise InvalidParameter(f"h derivative order must be 0..3, got {order}")
        rho_array = _positive_density(rho)
        kinetic = V * V * _falling(-3.0, order) * rho_array ** (-3.0 - order)
        return _as_output(kinetic - self.f_deriv(rho_array, order + 2))
