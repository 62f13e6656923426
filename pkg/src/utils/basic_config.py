"""This module is used to set up all the basic configuration for later use."""
import sys
from dataclasses import dataclass, fields
from typing import Any, Optional

import yaml
from loguru import logger

from utils.manage_argument_parser import ManageArguments
from utils.utilities import EXIT_CONFIG
from waves.errors import WaveError
from waves.pressure import PressureLaw
from waves.profile import rho_max, speed_for_wavenumber


@dataclass(frozen=True)
class RunConfig:
    """
    The data class for a fully resolved run configuration.

    Exactly one of V and k0 is set; the wave speed of the run is ``speed()``.
    """

    T: float = 0.25
    gamma: float = 2.0
    V: Optional[float] = 2.0
    k0: Optional[float] = None
    delta_list: tuple[float, ...] = (0.0, 0.03, 0.05, 0.08)
    N: int = 32
    xi_points: int = 400
    refine_points: int = 100
    refine_half_width: float = 0.25
    refine_levels: int = 8
    grid_size: int = 2048
    ell_max: int = 8
    V_min: float = 1.0
    V_max: float = 100.0
    V_points: int = 40
    growth_rel_tolerance: float = 0.15
    output_dir: str = "output"
    log_file: str = "ep_wave_stability.log"
    log_file_level: str = "DEBUG"
    log_file_retention: str = "30 days"
    log_file_rotation: str = "10 MB"
    monitoring_log_file: str = "monitoring.log"

    @property
    def law(self) -> PressureLaw:
        return PressureLaw(T=self.T, gamma=self.gamma)

    def speed(self) -> float:
        """The wave speed, solved from k0 when the speed itself is not given."""
        if self.V is not None:
            return self.V
        assert self.k0 is not None
        return speed_for_wavenumber(self.law, self.k0)

    def sweep_speeds(self) -> list[float]:
        """Geometric grid of V_points speeds from V_min to V_max."""
        ratio = (self.V_max / self.V_min) ** (1.0 / (self.V_points - 1))
        return [self.V_min * ratio**index for index in range(self.V_points)]

    def to_mapping(self) -> dict[str, Any]:
        """Flat mapping of every set key, the form the YAML file uses."""
        mapping: dict[str, Any] = {}
        for entry in fields(self):
            value = getattr(self, entry.name)
            if value is None:
                continue
            mapping[entry.name] = list(value) if isinstance(value, tuple) else value
        return mapping

    @classmethod
    def from_mapping(cls, mapping: dict[str, Any]) -> "RunConfig":
        """Build a configuration from a flat mapping, defaults filling the gaps.

        Raises
        ------
        ValueError
            On an unknown key, a value of the wrong type or both V and k0.
        """
        known = {entry.name: entry for entry in fields(cls)}
        unknown = sorted(set(mapping) - set(known))
        if unknown:
            raise ValueError(f"Unknown configuration keys: {', '.join(unknown)}")
        if mapping.get("V") is not None and mapping.get("k0") is not None:
            raise ValueError("Give either V or k0, not both")
        values: dict[str, Any] = {}
        for name, value in mapping.items():
            values[name] = _coerce(name, value, known[name].default)
        if values.get("k0") is not None:
            values["V"] = None
        elif "V" in values and values["V"] is None:
            del values["V"]
        return cls(**values)


def _coerce(name: str, value: Any, default: Any) -> Any:
    """Check one value against the type of its default."""
    if name in ("V", "k0"):
        default = 0.0
    if value is None and name in ("V", "k0"):
        return None
    if isinstance(value, bool):
        raise ValueError(f"Key {name} does not take a boolean")
    if isinstance(default, tuple):
        if not isinstance(value, list) or not all(
            isinstance(item, (int, float)) and not isinstance(item, bool)
            for item in value
        ):
            raise ValueError(f"Key {name} must be a list of numbers, got {value!r}")
        return tuple(float(item) for item in value)
    if isinstance(default, int):
        if not isinstance(value, int):
            raise ValueError(f"Key {name} must be an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if not isinstance(value, (int, float)):
            raise ValueError(f"Key {name} must be a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ValueError(f"Key {name} must be a string, got {value!r}")
    return value


def serialize(config: RunConfig) -> str:
    """YAML text of a configuration."""
    return yaml.safe_dump(config.to_mapping(), sort_keys=True)


def parse(text: str) -> RunConfig:
    """Configuration from YAML text; an empty document gives the defaults."""
    return RunConfig.from_mapping(yaml.safe_load(text) or {})


class BasicConfig:
    """
    This class is used to set up all the basic configuration for later use.
    """

    def __init__(self, args: ManageArguments) -> None:
        """Initialization of the class."""
        self.args = args

    def _load_yaml_file(self, yaml_file: str) -> Any:
        """Load the requested YAML file.

        Parameters
        ----------
        yaml_file :
            The path of the file to load.

        Returns
        -------
        Dictionary of the loaded YAML file.
        """
        try:
            with open(yaml_file, "r") as stream:
                return yaml.safe_load(stream)
        except Exception as exc:
            logger.error("Unable to open file:")
            logger.error(exc)
            sys.exit(EXIT_CONFIG)

    def _load_config_file(self) -> Any:
        """Load the main configuration YAML file.

        Returns
        -------
        Dictionary of the loaded YAML file, empty when no file was given.
        """
        if self.args.config_file is None:
            logger.debug("No config file given, using built-in defaults")
            return {}
        config = self._load_yaml_file(self.args.config_file)
        if config:
            if not isinstance(config, dict):
                logger.error("Config file must hold a flat mapping of keys!!!")
                sys.exit(EXIT_CONFIG)
            return config
        else:
            logger.error("Empty config file!!!")
            sys.exit(EXIT_CONFIG)

    def _apply_overrides(self, mapping: dict[str, Any]) -> dict[str, Any]:
        """Replace file values with the command-line overrides.

        --V and --k0 clear each other, --out replaces output_dir.
        """
        merged = dict(mapping)
        if self.args.delta is not None:
            merged["delta_list"] = list(self.args.delta)
        if self.args.V is not None:
            merged["V"] = self.args.V
            merged.pop("k0", None)
        if self.args.k0 is not None:
            merged["k0"] = self.args.k0
            merged.pop("V", None)
        for name in ("N", "gamma", "T"):
            value = getattr(self.args, name)
            if value is not None:
                merged[name] = value
        if self.args.out is not None:
            merged["output_dir"] = self.args.out
        return merged

    @staticmethod
    def _validate(config: RunConfig) -> None:
        """Check the invariants a run relies on.

        Raises
        ------
        ValueError
            Naming the first violated condition.
        """
        if config.N < 4:
            raise ValueError(f"N must be >= 4, got {config.N}")
        grid = config.grid_size
        if grid < 512 or grid & (grid - 1):
            raise ValueError(f"grid_size must be a power of two >= 512, got {grid}")
        if not 4 * config.N < grid // 2:
            raise ValueError(
                f"grid_size={grid} is too small for N={config.N}: need 4N < grid/2"
            )
        if config.xi_points < 2 or config.refine_points < 3:
            raise ValueError("xi_points must be >= 2 and refine_points >= 3")
        if config.refine_levels < 1 or not config.refine_half_width > 0.0:
            raise ValueError("refine_levels must be >= 1, refine_half_width > 0")
        if config.ell_max < 3:
            raise ValueError(f"ell_max must be >= 3, got {config.ell_max}")
        if config.V_points < 2 or not config.V_min < config.V_max:
            raise ValueError("The speed sweep needs V_points >= 2 and V_min < V_max")
        if not config.growth_rel_tolerance > 0.0:
            raise ValueError("growth_rel_tolerance must be positive")
        law = config.law
        if not law.is_supersonic(config.V_min):
            raise ValueError(f"V_min={config.V_min} is not supersonic")
        V = config.speed()
        if not law.is_supersonic(V):
            raise ValueError(
                f"V={V} is not supersonic: V**2 must exceed P'(1)="
                f"{law.sound_speed_squared}"
            )
        bound = rho_max(law, V)
        for delta in config.delta_list:
            if not 0.0 <= delta < bound.delta_max:
                raise ValueError(
                    f"delta={delta} outside [0, delta_max={bound.delta_max}) at V={V}"
                )

    def _build_config(self, mapping: dict[str, Any]) -> RunConfig:
        """Turn the merged mapping into a validated configuration."""
        try:
            config = RunConfig.from_mapping(mapping)
            self._validate(config)
        except (ValueError, WaveError) as exc:
            logger.error("Invalid configuration:")
            logger.error(exc)
            sys.exit(EXIT_CONFIG)
        return config

    def create_basic_config(self) -> dict[str, Any]:
        """Main function of the class."""
        mapping = self._apply_overrides(self._load_config_file())
        config = self._build_config(mapping)
        if config.k0 is not None:
            logger.info(f"Resolved V={config.speed()} from k0={config.k0}")
        return {"config": config, "args": self.args}
