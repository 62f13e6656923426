# type: ignore
import json
import pathlib
import numpy as np
import pytest
import utils.utilities as Utilities
import logging
from loguru import logger
from unittest.mock import MagicMock, patch
from utils.basic_config import RunConfig
from _pytest.logging import caplog as _caplog  # noqa


@pytest.fixture
def caplog(_caplog):  # noqa
    class PropagateHandler(logging.Handler):
        def emit(self, record):
            logging.getLogger(record.name).handle(record)

    handler_id = logger.add(PropagateHandler(), format="{message} {extra}")
    yield _caplog
    logger.remove(handler_id)


class TestUtilities:
    @classmethod
    def setup_class(self):
        self.args = MagicMock()

    def setup_method(self):
        self.args.console_log_level = "INFO"
        self.args.op_type = "unit-test-profile"

    def basic_config(self, directory):
        config = RunConfig(output_dir=str(directory), N=8, grid_size=512)
        return {"config": config, "args": self.args}

    @staticmethod
    def assert_is_file(path):
        if not pathlib.Path(path).resolve().is_file():
            raise AssertionError("File does not exist: %s" % str(path))

    def test_output_path_creates_directory(self, tmp_path) -> None:
        target = tmp_path / "nested" / "out"
        path = Utilities.output_path(self.basic_config(target), "file.csv")
        assert path == target / "file.csv"
        assert target.is_dir()

    def test_write_monitoring_log_good(self, tmp_path) -> None:
        basic_config = self.basic_config(tmp_path)
        Utilities.write_monitoring_log(basic_config, True, self.args.op_type)
        log_path = tmp_path / f"{self.args.op_type}_monitoring.log"
        self.assert_is_file(log_path)
        assert log_path.read_text() == "True"
        Utilities.write_monitoring_log(basic_config, False, self.args.op_type)
        assert log_path.read_text() == "False"

    def test_write_monitoring_log_bad(self, tmp_path, caplog) -> None:
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        with caplog.at_level(logging.ERROR):
            with pytest.raises(SystemExit) as exit_info:
                Utilities.write_monitoring_log(
                    self.basic_config(blocker / "sub"), False, "some_runner"
                )
        assert exit_info.value.code == Utilities.EXIT_WRITE_FAILURE
        assert len(caplog.text) > 0

    def test_format_delta(self) -> None:
        assert Utilities.format_delta(0.05) == "0.05"
        assert Utilities.format_delta(0.0) == "0"
        assert Utilities.format_delta(0.08) == "0.08"

    def test_write_csv(self, tmp_path) -> None:
        path = tmp_path / "table.csv"
        Utilities.write_csv(path, ["x", "y"], [[0.1, 3], [float("1e-20"), -2]])
        assert path.read_text() == "x,y\n0.1,3\n1e-20,-2\n"

    def test_write_csv_numpy_floats(self, tmp_path) -> None:
        path = tmp_path / "table.csv"
        Utilities.write_csv(path, ["x"], [[np.float64(0.25)]])
        assert path.read_text() == "x\n0.25\n"

    def test_write_csv_failure(self, tmp_path, caplog) -> None:
        with caplog.at_level(logging.ERROR):
            with pytest.raises(SystemExit) as exit_info:
                Utilities.write_csv(tmp_path / "missing" / "t.csv", ["x"], [])
        assert exit_info.value.code == 1
        assert "Unable to open file" in caplog.text

    def test_write_json(self, tmp_path) -> None:
        path = tmp_path / "report.json"
        Utilities.write_json(path, {"b": 1, "a": [0.5]})
        assert json.loads(path.read_text()) == {"a": [0.5], "b": 1}
        assert path.read_text().index('"a"') < path.read_text().index('"b"')

    def test_build_profile(self) -> None:
        config = RunConfig(N=8, grid_size=512)
        with patch("utils.utilities.solve_profile", return_value="wave") as solve:
            assert Utilities.build_profile(config, 0.05) == "wave"
        assert solve.call_args.kwargs == {"M": 512, "n_fourier": 32}
        params = solve.call_args.args[1]
        assert (params.delta, params.V) == (0.05, 2.0)
        with patch("utils.utilities.solve_profile") as solve:
            Utilities.build_profile(config, 0.0, N=16)
        assert solve.call_args.kwargs["n_fourier"] == 64
