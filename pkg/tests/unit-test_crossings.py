# type: ignore
import math

import numpy as np
import pytest
from waves.crossings import (
    crossing_catalogue,
    crossing_oracle,
    find_crossing,
    krein_form,
    krein_signature,
    lambda_branch,
    omega,
)
from waves.errors import InvalidParameter
from waves.pressure import PressureLaw
from waves.profile import speed_for_wavenumber

SPEEDS = [0.72, 1.0, 2.0, 5.0, 10.0]


class TestDispersion:
    @classmethod
    def setup_class(self):
        self.law = PressureLaw(T=0.25, gamma=2.0)
        self.V = speed_for_wavenumber(self.law, 1.0)

    def test_omega_values(self) -> None:
        assert omega(self.law, self.V, 0, 0.0) == 1.0
        assert omega(self.law, self.V, 1, 0.0) == pytest.approx(4.5345, abs=1e-4)
        assert omega(self.law, self.V, -2, -0.7) == pytest.approx(
            omega(self.law, self.V, 2, 0.7)
        )

    def test_lambda_branch_at_origin(self) -> None:
        assert lambda_branch(self.law, self.V, "+", 0, 0.0) == pytest.approx(1j)
        assert lambda_branch(self.law, self.V, "-", 0, 0.0) == pytest.approx(-1j)

    def test_branches_increase_in_xi(self) -> None:
        xi = np.linspace(-math.pi, math.pi, 200)
        for j in (-3, 0, 4):
            for branch in ("+", "-"):
                values = np.asarray(lambda_branch(self.law, 2.0, branch, j, xi)).imag
                assert np.all(np.diff(values) > 0.0)

    def test_branch_reflection(self) -> None:
        for j, xi in ((2, 0.3), (-1, -2.0), (5, 3.0)):
            minus = lambda_branch(self.law, self.V, "-", j, xi)
            plus = lambda_branch(self.law, self.V, "+", -j, -xi)
            assert minus == pytest.approx(-np.conj(plus))

    def test_rejects_unknown_branch(self) -> None:
        with pytest.raises(InvalidParameter):
            lambda_branch(self.law, self.V, "x", 0, 0.0)

    def test_krein_form_and_signature(self) -> None:
        frequency = omega(self.law, 2.0, 3, 0.4)
        assert krein_form(self.law, 2.0, "+", 3, 0.4) == pytest.approx(2j * frequency)
        assert krein_form(self.law, 2.0, "-", 3, 0.4) == pytest.approx(-2j * frequency)
        assert krein_signature(self.law, 2.0, "+", 3, 0.4) == 1
        assert krein_signature(self.law, 2.0, "-", 3, 0.4) == -1


class TestCrossings:
    @classmethod
    def setup_class(self):
        self.law = PressureLaw(T=0.25, gamma=2.0)
        self.V = speed_for_wavenumber(self.law, 1.0)

    def test_gap_two(self) -> None:
        crossing = find_crossing(self.law, self.V, 2, "-")
        assert (crossing.j, crossing.j_prime, crossing.xi0) == (1, -1, 0.0)
        assert crossing.lambda0 == 0j

    def test_gap_three_plus(self) -> None:
        crossing = find_crossing(self.law, self.V, 3, "+")
        z = 0.5 * (4.0 + math.sqrt(5.0) * self.V / math.sqrt(0.5))
        assert (crossing.j, crossing.j_prime) == (3, 0)
        assert crossing.xi0 == pytest.approx(2.0 * math.pi * (z - 3.5), abs=1e-12)
        assert crossing.xi0 == pytest.approx(-2.224, abs=1e-2)
        assert crossing.z == pytest.approx(z, abs=1e-12)

    @pytest.mark.parametrize("V", SPEEDS)
    def test_defining_identity(self, V) -> None:
        for ell in range(3, 9):
            for sign in ("+", "-"):
                crossing = find_crossing(self.law, V, ell, sign)
                upper = lambda_branch(self.law, V, "-", crossing.j, crossing.xi0)
                lower = lambda_branch(
                    self.law, V, "+", crossing.j_prime, crossing.xi0
                )
                assert abs(upper - lower) < 1e-10 * max(1.0, abs(upper))
                assert crossing.lambda0.real == 0.0
                assert abs(crossing.lambda0) > 0.0
                assert -math.pi <= crossing.xi0 < math.pi

    @pytest.mark.parametrize("V", SPEEDS)
    def test_conjugate_pairing(self, V) -> None:
        for ell in range(3, 9):
            plus = find_crossing(self.law, V, ell, "+")
            minus = find_crossing(self.law, V, ell, "-")
            assert plus.j + plus.xi0 / (2.0 * math.pi) == pytest.approx(
                -(minus.j_prime + minus.xi0 / (2.0 * math.pi)), abs=1e-9
            )

    @pytest.mark.parametrize("V", SPEEDS)
    def test_oracle_agrees(self, V) -> None:
        for ell in range(2, 9):
            for sign in ("+", "-"):
                closed = find_crossing(self.law, V, ell, sign)
                found = crossing_oracle(self.law, V, ell, sign)
                assert (found.j, found.j_prime) == (closed.j, closed.j_prime)
                assert abs(found.xi0 - closed.xi0) < 1e-10

    def test_frequency_sum_increases(self) -> None:
        step = 1e-6
        for V in SPEEDS:
            for ell in range(3, 9):
                crossing = find_crossing(self.law, V, ell, "+")

                def total(xi):
                    return omega(self.law, V, crossing.j, xi) + omega(
                        self.law, V, crossing.j_prime, xi
                    )

                slope = (total(crossing.xi0 + step) - total(crossing.xi0 - step)) / (
                    2.0 * step
                )
                assert slope > 0.0

    def test_rejects_small_gap_and_subsonic(self) -> None:
        with pytest.raises(InvalidParameter):
            find_crossing(self.law, self.V, 1, "+")
        with pytest.raises(InvalidParameter):
            find_crossing(self.law, 0.5, 3, "+")

    def test_catalogue(self) -> None:
        catalogue = crossing_catalogue(self.law, 2.0, 6)
        assert len(catalogue) == 9
        assert [(c.ell, c.sign) for c in catalogue[:3]] == [
            (2, "+"),
            (3, "+"),
            (3, "-"),
        ]
        for crossing in catalogue:
            record = crossing.to_record(self.law, 2.0)
            assert record["krein_j"] == -1
            assert record["krein_jprime"] == 1
