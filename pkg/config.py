import logging
import os
from dataclasses import asdict
from dataclasses import dataclass
from typing import Any

from errors import ConfigError

CONFIG_ENV_VAR = "SEACALC_CONFIG"

OUTPUT_FORMATS = ("text", "json", "latex")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

DEFAULT_CONFIG = {
    "default_order_pk": 6,
    "default_order_b": 3,
    "route_order_b": 5,
    "output_format": "text",
    "golden_path": "golden/order3_expansions.tsv",
    "max_workers": 4,
    "log_level": "WARNING",
    "color": False,
}


@dataclass(frozen=True)
class CliConfig:
    default_order_pk: int = 6
    default_order_b: int = 3
    route_order_b: int = 5
    output_format: str = "text"
    golden_path: str = "golden/order3_expansions.tsv"
    max_workers: int = 4
    log_level: str = "WARNING"
    color: bool = False

    def __post_init__(self) -> None:
        for name in ("default_order_pk", "default_order_b", "route_order_b"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.max_workers < 1:
            raise ConfigError(f"max_workers must be >= 1, got {self.max_workers}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(
                f"output_format must be one of {', '.join(OUTPUT_FORMATS)}, "
                f"got {self.output_format!r}",
            )
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(f"unknown log_level {self.log_level!r}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def with_overrides(self, **overrides: Any) -> "CliConfig":
        """Copy with the non-None overrides applied (CLI flags win over the file)."""
        values = self.to_dict()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return CliConfig(**values)


def _convert(key: str, raw: str) -> Any:
    default = DEFAULT_CONFIG[key]
    if isinstance(default, bool):
        lowered = raw.lower()
        if lowered in ("true", "yes", "on", "1"):
            return True
        if lowered in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    if isinstance(default, int):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
    if key == "log_level":
        return raw.upper()
    return raw


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse `key = value` lines; '#' starts a comment."""
    values: dict[str, Any] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{line_number}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULT_CONFIG:
            raise ConfigError(f"{source}:{line_number}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


def load_config(path: str | None = None) -> CliConfig:
    """Defaults updated from the config file, if one is named and exists."""
    config = DEFAULT_CONFIG.copy()
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if path:
        try:
            with open(path, encoding="utf-8") as f:
                config.update(parse_config_text(f.read(), source=path))
            logging.info(f"Loaded configuration from {path}")
        except FileNotFoundError:
            logging.warning(f"Config file {path} not found, using defaults")
    return CliConfig(**config)
