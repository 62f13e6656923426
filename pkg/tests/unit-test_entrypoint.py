# type: ignore
import pytest
from entrypoint import RUNNERS, _setup_logging, entrypoint
from loguru import logger
from unittest.mock import MagicMock, patch
from utils.basic_config import RunConfig
from utils.manage_argument_parser import OPERATIONS
from waves.errors import InsufficientFourier, InvalidParameter, NonPeriodic


class TestEntrypoint:
    @classmethod
    def setup_class(self):
        self.args = MagicMock()

    def setup_method(self):
        self.args.console_log_level = "INFO"
        self.args.op_type = "profile"
        self.basic_config = {"config": RunConfig(), "args": self.args}

    def run(self, runner):
        parse = "entrypoint.ManageParser.parse_cli_args"
        with patch.dict("entrypoint.RUNNERS", {"profile": runner}):
            with patch(parse, return_value=self.args):
                with patch(
                    "entrypoint.BasicConfig.create_basic_config",
                    return_value=self.basic_config,
                ):
                    with patch("entrypoint._setup_logging"):
                        entrypoint()

    def test_every_operation_has_a_runner(self) -> None:
        assert set(RUNNERS) == set(OPERATIONS)

    @patch("entrypoint.write_monitoring_log")
    def test_entrypoint_runs_runner(self, mock_monitoring) -> None:
        runner = MagicMock()
        self.run(runner)
        runner.assert_called_once_with(self.basic_config)
        mock_monitoring.assert_not_called()

    @pytest.mark.parametrize(
        "error, code",
        [
            (InvalidParameter("bad"), 2),
            (NonPeriodic("drift"), 3),
            (InsufficientFourier("short"), 3),
        ],
    )
    @patch("entrypoint.write_monitoring_log")
    def test_entrypoint_exit_codes(self, mock_monitoring, error, code) -> None:
        with pytest.raises(SystemExit) as exit_info:
            self.run(MagicMock(side_effect=error))
        assert exit_info.value.code == code
        mock_monitoring.assert_called_once_with(self.basic_config, False, "profile")

    def test_setup_logging(self, tmp_path) -> None:
        basic_config = {
            "config": RunConfig(output_dir=str(tmp_path), log_file="unit.log"),
            "args": self.args,
        }
        _setup_logging(basic_config)
        logger.info("hello from the test")
        logger.remove()
        assert "hello from the test" in (tmp_path / "profile_unit.log").read_text()
