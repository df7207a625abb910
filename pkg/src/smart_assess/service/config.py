"""Service configuration: one JSON config file plus environment overrides.

Precedence (highest wins): explicit overrides (CLI flags) > environment
variables SMART_ADDR / SMART_DATA_DIR / SMART_TOKEN / SMART_PACK > config
file > built-in defaults. An empty token disables authentication.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

from ..errors import MalformedDocument

DEFAULT_CONFIG_FILE = "smart.config.json"

ENV_ADDR = "SMART_ADDR"
ENV_DATA_DIR = "SMART_DATA_DIR"
ENV_TOKEN = "SMART_TOKEN"
ENV_PACK = "SMART_PACK"

_CONFIG_KEYS = {"addr", "data_dir", "token", "pack", "session_idle_days", "follow_up_days"}


@dataclass(frozen=True)
class ServiceConfig:
    addr: str = "127.0.0.1:8421"
    data_dir: str = "./smart-data"
    token: str = ""
    pack: str = ""
    session_idle_days: int = 30
    follow_up_days: int = 90

    @property
    def host(self) -> str:
        return self.addr.rsplit(":", 1)[0] if ":" in self.addr else self.addr

    @property
    def port(self) -> int:
        return int(self.addr.rsplit(":", 1)[1]) if ":" in self.addr else 8421

    def data_path(self) -> Path:
        return Path(self.data_dir)


def _from_file(path: Path) -> dict:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"config file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedDocument(f"config file {path}: must be a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise MalformedDocument(f"config file {path}: unknown keys {sorted(unknown)}")
    return raw


def load_config(
    config_file: str | Path | None = None,
    environ: dict[str, str] | None = None,
    **overrides: object,
) -> ServiceConfig:
    env = os.environ if environ is None else environ
    values: dict = {}

    path = Path(config_file) if config_file else Path(DEFAULT_CONFIG_FILE)
    if path.exists():
        values.update(_from_file(path))
    elif config_file:
        raise MalformedDocument(f"config file {path} does not exist")

    env_map = {
        "addr": env.get(ENV_ADDR),
        "data_dir": env.get(ENV_DATA_DIR),
        "token": env.get(ENV_TOKEN),
        "pack": env.get(ENV_PACK),
    }
    values.update({k: v for k, v in env_map.items() if v})
    values.update({k: v for k, v in overrides.items() if v is not None})

    config = ServiceConfig()
    known = {k: v for k, v in values.items() if k in _CONFIG_KEYS}
    if known:
        config = replace(config, **known)  # type: ignore[arg-type]
    return config
