"""Configuration loader with environment overrides."""
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import load_dotenv

DEFAULT_PATHS = [
    Path("config/config.json"),
    Path("config.json"),
    Path("config/config.example.json"),
]

DEFAULT_SEED = 2024


def _find_config_path(explicit: str | None) -> Optional[Path]:
    """Return the first existing config path, or None when running on defaults."""
    if explicit:
        path = Path(explicit)
        if not path.exists():
            raise FileNotFoundError(f"{path} not found. Create it from config/config.example.json")
        return path
    for candidate in DEFAULT_PATHS:
        if candidate.exists():
            return candidate
    return None


def load_config(config_path: str | None = None) -> Dict[str, Any]:
    """
    Load configuration from disk (if any) and apply environment overrides.

    ``OPI_SEED`` replaces the default seed and ``DQI_OUTPUT_ROOT`` the output root.
    """
    load_dotenv()
    cfg_path = _find_config_path(config_path)
    cfg: Dict[str, Any] = {}
    if cfg_path is not None:
        with cfg_path.open("r", encoding="utf-8") as f:
            cfg = json.load(f)

    output = cfg.setdefault("output", {})
    output["root"] = os.environ.get("DQI_OUTPUT_ROOT", output.get("root", "output"))

    seed = os.environ.get("OPI_SEED")
    cfg["seed"] = int(seed) if seed else int(cfg.get("seed", DEFAULT_SEED))

    cfg.setdefault("fields", {})

    estimate = cfg.setdefault("estimate", {})
    estimate.setdefault("jobs", 1)
    estimate.setdefault("scaled_m", 255)
    estimate.setdefault("full_run", False)

    attacks = cfg.setdefault("attacks", {})
    attacks.setdefault("slow_comparator_max_m", 64)

    bent = cfg.setdefault("bent", {})
    bent.setdefault("max_exhaustive_dim", 6)

    selftest = cfg.setdefault("selftest", {})
    selftest.setdefault("max_binom", 10_000)
    selftest.setdefault("max_m", 24)
    selftest.setdefault("trials", 200)

    return cfg


def field_overrides(cfg: Mapping[str, Any], b: int) -> Mapping[str, Any]:
    """Per-b entry of the ``fields`` section (keys are strings in JSON)."""
    fields = cfg.get("fields", {})
    return fields.get(str(b), fields.get(b, {}))
