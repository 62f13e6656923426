# type: ignore
import json
import logging
import pytest
from loguru import logger
from unittest.mock import MagicMock, patch
from runners.verify_run import (
    ACCEPTANCE_SPEED,
    Criterion,
    VerifyRun,
    _scaled_offset,
    _slope,
)
from utils.basic_config import RunConfig
from waves.bloch import Bubble, Refinement
from waves.errors import InvalidParameter
from _pytest.logging import caplog as _caplog  # noqa

CHECKS = (
    "_constant_state",
    "_catalogue",
    "_profile_fidelity",
    "_wavenumber_expansion",
    "_index_routes",
    "_index_asymptotics",
    "_growth",
    "_modulation",
    "_symmetry",
    "_bubble_ordering",
)


@pytest.fixture
def caplog(_caplog):  # noqa
    class PropagateHandler(logging.Handler):
        def emit(self, record):
            logging.getLogger(record.name).handle(record)

    handler_id = logger.add(PropagateHandler(), format="{message} {extra}")
    yield _caplog
    logger.remove(handler_id)


def criterion(identifier, passed):
    return Criterion(
        id=identifier,
        name=f"check {identifier}",
        passed=passed,
        measured={"value": 0.0},
        threshold={"value": 1.0},
    )


class TestVerifyRun:
    def setup_method(self):
        self.mocked_obj = MagicMock()
        self.mocked_obj._threshold = MagicMock(return_value=1e-11)

    def mock_checks(self, failing=()):
        for identifier, name in enumerate(CHECKS, start=1):
            outcome = criterion(identifier, identifier not in failing)
            setattr(self.mocked_obj, name, MagicMock(return_value=outcome))

    def bare_runner(self, config):
        runner = VerifyRun.__new__(VerifyRun)
        runner.basic_config = {"config": config}
        runner.config = config
        runner.refinements = {}
        return runner

    def test_all_criteria_pass(self, tmp_path) -> None:
        self.mock_checks()
        self.mocked_obj.basic_config = {"config": RunConfig(output_dir=str(tmp_path))}
        self.mocked_obj.run_status = True
        VerifyRun._main(self.mocked_obj)
        report = json.loads((tmp_path / "verify_report.json").read_text())
        assert report["passed"] is True
        assert [entry["id"] for entry in report["criteria"]] == list(range(1, 11))
        self.mocked_obj._growth.assert_called_once_with(1e-11)
        self.mocked_obj._bubble_ordering.assert_called_once_with(1e-11)
        assert (tmp_path / "verify_monitoring.log").read_text() == "True"

    def test_failing_criterion_exits(self, tmp_path, caplog) -> None:
        self.mock_checks(failing=(7,))
        self.mocked_obj.basic_config = {"config": RunConfig(output_dir=str(tmp_path))}
        self.mocked_obj.run_status = True
        with caplog.at_level(logging.ERROR):
            with pytest.raises(SystemExit) as exit_info:
                VerifyRun._main(self.mocked_obj)
        assert exit_info.value.code == 4
        assert "Criterion 7 (check 7) FAILED" in caplog.text
        report = json.loads((tmp_path / "verify_report.json").read_text())
        assert report["passed"] is False
        assert report["criteria"][6]["passed"] is False

    def test_refinement_is_cached(self) -> None:
        self.mocked_obj.refinements = {}
        self.mocked_obj.config = RunConfig(N=8, grid_size=512)
        with patch("runners.verify_run.refine_crossing") as refine:
            first = VerifyRun._refinement(self.mocked_obj, 0.05, 3, 1e-11)
            second = VerifyRun._refinement(self.mocked_obj, 0.05, 3, 1e-11)
        assert first is second
        refine.assert_called_once()
        assert refine.call_args.args[1].ell == 3

    def test_slope(self) -> None:
        x = [1.0, 2.0, 4.0]
        assert _slope(x, [value**3 for value in x]) == pytest.approx(3.0)

    def test_cheap_criteria_pass(self) -> None:
        self.mocked_obj.config = RunConfig(N=8, grid_size=512)
        assert VerifyRun._catalogue(self.mocked_obj).passed
        assert VerifyRun._index_routes(self.mocked_obj).passed
        assert VerifyRun._constant_state(self.mocked_obj).passed
        assert VerifyRun._wavenumber_expansion(self.mocked_obj).passed

    def test_raising_check_is_reported(self, tmp_path, caplog) -> None:
        self.mock_checks()
        self.mocked_obj._growth.side_effect = InvalidParameter("delta too large")
        self.mocked_obj.basic_config = {"config": RunConfig(output_dir=str(tmp_path))}
        self.mocked_obj.run_status = True
        with caplog.at_level(logging.ERROR):
            with pytest.raises(SystemExit) as exit_info:
                VerifyRun._main(self.mocked_obj)
        assert exit_info.value.code == 4
        report = json.loads((tmp_path / "verify_report.json").read_text())
        entry = report["criteria"][6]
        assert entry["id"] == 7
        assert entry["passed"] is False
        assert entry["measured"]["error"] == "InvalidParameter: delta too large"
        assert report["criteria"][7]["passed"] is True

    def test_family_ignores_configured_wave(self) -> None:
        runner = self.bare_runner(RunConfig(V=None, k0=1.0, N=8))
        profile = runner._profile(0.08, 8)
        assert profile.params.V == ACCEPTANCE_SPEED
        assert profile.law.gamma == 2.0
        assert profile.n_fourier == 32

    @patch("runners.verify_run.origin_growth", return_value=float("nan"))
    @patch("runners.verify_run.scan")
    def test_modulation_needs_eigenvalues(self, mock_scan, mock_origin) -> None:
        self.mocked_obj.config = RunConfig(N=8)
        outcome = VerifyRun._modulation(self.mocked_obj)
        assert not outcome.passed
        assert outcome.measured["growth_over_delta"] == {"0.03": None, "0.05": None}

    def test_scaled_offset(self) -> None:
        crossing = MagicMock(xi0=1.0)
        bubble = Bubble(
            xi_center=0.8, xi_extent=0.0, max_growth=1.0, lambda_at_max=0j
        )
        refinement = Refinement(crossing=crossing, slices=[], bubble=bubble)
        expected = 0.2 * (0.03 / 0.08) ** 2
        assert _scaled_offset(refinement, 0.08) == pytest.approx(expected)
        assert _scaled_offset(refinement, 0.03) == pytest.approx(0.2)
