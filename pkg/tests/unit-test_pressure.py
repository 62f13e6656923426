# type: ignore
import numpy as np
import pytest
from waves.errors import InvalidParameter
from waves.pressure import PressureLaw

RHO_GRID = np.linspace(0.5, 2.0, 7)


class TestPressureLaw:
    @classmethod
    def setup_class(self):
        self.law = PressureLaw(T=0.25, gamma=2.0)
        self.linear = PressureLaw(T=1.0, gamma=1.0)
        self.cubic = PressureLaw(T=1.0, gamma=3.0)

    def test_rejects_bad_parameters(self) -> None:
        with pytest.raises(InvalidParameter):
            PressureLaw(T=0.0, gamma=2.0)
        with pytest.raises(InvalidParameter):
            PressureLaw(T=1.0, gamma=0.5)

    def test_p_deriv_values(self) -> None:
        assert self.law.p_deriv(1.0, 1) == pytest.approx(0.5)
        assert self.law.p_deriv(1.0, 0) == pytest.approx(0.25)
        assert self.linear.p_deriv(2.0, 2) == 0.0

    def test_f_deriv_values(self) -> None:
        assert self.law.f_deriv(1.0, 2) == pytest.approx(0.5)
        assert self.law.f_deriv(1.0, 3) == 0.0
        assert self.cubic.f_deriv(1.0, 3) == pytest.approx(3.0)

    def test_h_deriv_closed_forms_at_one(self) -> None:
        assert self.law.h_deriv(1.0, 1.0, 0) == pytest.approx(0.5)
        assert self.law.h_deriv(1.0, 1.0, 1) == pytest.approx(-3.0)
        assert self.law.h_deriv(1.0, 1.0, 2) == pytest.approx(12.0)
        for gamma in (1.0, 1.5, 3.0):
            law = PressureLaw(T=0.7, gamma=gamma)
            V, sound = 1.9, law.sound_speed_squared
            assert law.h_deriv(1.0, V, 0) == pytest.approx(V * V - sound)
            assert law.h_deriv(1.0, V, 1) == pytest.approx(
                -3.0 * V * V - sound * (gamma - 2.0)
            )
            assert law.h_deriv(1.0, V, 2) == pytest.approx(
                12.0 * V * V - sound * (gamma - 2.0) * (gamma - 3.0)
            )

    @pytest.mark.parametrize("gamma", [1.0, 1.5, 2.0, 3.0])
    def test_h_deriv_matches_finite_differences(self, gamma) -> None:
        law = PressureLaw(T=0.4, gamma=gamma)
        step = 1e-5
        for order in range(1, 4):
            exact = law.h_deriv(RHO_GRID, 1.3, order)
            numeric = (
                law.h_deriv(RHO_GRID + step, 1.3, order - 1)
                - law.h_deriv(RHO_GRID - step, 1.3, order - 1)
            ) / (2.0 * step)
            np.testing.assert_allclose(numeric, exact, rtol=1e-6, atol=1e-8)

    @pytest.mark.parametrize("gamma", [1.0, 2.5, 3.0])
    def test_f_deriv_matches_finite_differences(self, gamma) -> None:
        law = PressureLaw(T=1.0, gamma=gamma)
        step = 1e-5
        for order in range(3, 6):
            exact = law.f_deriv(RHO_GRID, order)
            numeric = (
                law.f_deriv(RHO_GRID + step, order - 1)
                - law.f_deriv(RHO_GRID - step, order - 1)
            ) / (2.0 * step)
            np.testing.assert_allclose(numeric, exact, rtol=1e-6, atol=1e-8)

    def test_supersonic_iff_h_positive(self) -> None:
        for V in np.linspace(0.1, 3.0, 30):
            assert self.law.is_supersonic(V) == (self.law.h_deriv(1.0, V, 0) > 0.0)

    def test_rejects_orders_and_densities(self) -> None:
        with pytest.raises(InvalidParameter):
            self.law.p_deriv(1.0, 6)
        with pytest.raises(InvalidParameter):
            self.law.f_deriv(1.0, 1)
        with pytest.raises(InvalidParameter):
            self.law.h_deriv(-1.0, 1.0, 0)

    def test_scalar_in_float_out(self) -> None:
        assert isinstance(self.law.h_deriv(1.0, 1.0, 0), float)
        assert self.law.h_deriv(RHO_GRID, 1.0, 0).shape == RHO_GRID.shape
