import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import tomlkit
from dotenv import load_dotenv

from internal.custom_types.charge import RuleVariant
from internal.utils.rational import parse_fraction

logger = logging.getLogger(__name__)


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(float(raw))
    except ValueError as e:
        raise ValueError(f"{name} must be a number, got {raw!r}") from e


@dataclass(frozen=True)
class Settings:
    """Process-wide knobs read from the environment (and a .env file)."""
    threads: int = 1
    vertex_cap: int = 10_000
    node_budget: int = 100_000_000
    progress_every: int = 1_000_000
    log_level: str = "WARNING"
    config_path: str = "crlab.toml"
    file_values: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_env(cls) -> 'Settings':
        load_dotenv()
        config_path = os.getenv("CRLAB_CONFIG", "crlab.toml")
        return cls(
            threads=max(1, _env_int("CRLAB_THREADS", 1)),
            vertex_cap=_env_int("CRLAB_VERTEX_CAP", 10_000),
            node_budget=_env_int("CRLAB_NODE_BUDGET", 100_000_000),
            progress_every=max(1, _env_int("CRLAB_PROGRESS_EVERY", 1_000_000)),
            log_level=os.getenv("CRLAB_LOG_LEVEL", "WARNING").upper(),
            config_path=config_path,
            file_values=load_config_file(config_path),
        )

    def section(self, name: str) -> Dict[str, Any]:
        return dict(self.file_values.get(name, {}))


def load_config_file(path: str) -> Dict[str, Any]:
    """Read an optional TOML file; a missing file yields no overrides.

    Raises:
        ValueError: If the file exists but is not valid TOML
    """
    config_file = Path(path)
    if not config_file.is_file():
        return {}
    try:
        document = tomlkit.parse(config_file.read_text(encoding="utf-8"))
    except Exception as e:
        logger.error(f"Failed to parse config file {path}: {str(e)}")
        raise ValueError(f"Invalid config file {path}: {str(e)}") from e
    logger.info(f"Loaded configuration from {path}")
    return document.unwrap()


def fraction_setting(values: Dict[str, Any], key: str, default: Fraction) -> Fraction:
    raw: Optional[Any] = values.get(key)
    if raw is None:
        return default
    return parse_fraction(str(raw))


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Forget the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None


def load_rule_variant(name: str) -> RuleVariant:
    """Rule variant by name, with amounts from the [discharging] config table when present."""
    values = get_settings().section("discharging")
    defaults = RuleVariant()
    return RuleVariant.named(
        name,
        r1_amount=fraction_setting(values, "r1_amount", defaults.r1_amount),
        r2_amount=fraction_setting(values, "r2_amount", defaults.r2_amount),
        r3_amount=fraction_setting(values, "r3_amount", defaults.r3_amount),
    )
