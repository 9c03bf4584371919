"""Runtime configuration: data directory and listen address.

Precedence: environment variables > config file > built-in defaults.
The config file is JSON with the keys ``data_dir``, ``host``, ``port``; its
location comes from ``LTILAB_CONFIG`` or falls back to
``~/.config/ltilab/config.json``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

ENV_CONFIG = "LTILAB_CONFIG"
ENV_DATA_DIR = "LTILAB_DATA_DIR"
ENV_HOST = "LTILAB_HOST"
ENV_PORT = "LTILAB_PORT"


@dataclass(frozen=True)
class Config:
    data_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000


def _default_data_dir() -> Path:
    base = os.environ.get("XDG_DATA_HOME", "~/.local/share")
    return Path(base).expanduser() / "ltilab" / "sessions"


def load_config(path: Optional[Path] = None) -> Config:
    data_dir = _default_data_dir()
    host = "127.0.0.1"
    port = 8000

    file_path = path or os.environ.get(ENV_CONFIG)
    if file_path is None:
        candidate = Path("~/.config/ltilab/config.json").expanduser()
        file_path = candidate if candidate.exists() else None
    if file_path is not None:
        raw = json.loads(Path(file_path).read_text(encoding="utf-8"))
        if "data_dir" in raw:
            data_dir = Path(raw["data_dir"]).expanduser()
        host = raw.get("host", host)
        port = int(raw.get("port", port))

    if ENV_DATA_DIR in os.environ:
        data_dir = Path(os.environ[ENV_DATA_DIR]).expanduser()
    host = os.environ.get(ENV_HOST, host)
    if ENV_PORT in os.environ:
        port = int(os.environ[ENV_PORT])

    return Config(data_dir=data_dir, host=host, port=port)
