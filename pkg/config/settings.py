"""
Centralized settings reader for singulark.

Reads run configuration from environment variables (loaded from .env file).
Build a ``Settings`` where the values are needed, so a malformed variable
surfaces as ``ConfigError`` at that call:

    from config.settings import Settings
    print(Settings().GEOMETRY_PATH)
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

from model.errors import ConfigError

# Load .env from project root
_env_path = Path(__file__).resolve().parent.parent / ".env"
load_dotenv(_env_path)

DEFAULT_GEOMETRY_PATH = Path(__file__).resolve().parent / "default_geometry.json"


def _env(key: str, default: str = "") -> str:
    """Read an environment variable with an optional default."""
    return os.getenv(key, default)


def _env_float(key: str, default: str) -> float:
    raw = _env(key, default)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {raw!r}") from exc


def _env_int(key: str, default: str) -> int:
    raw = _env(key, default)
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class Settings:
    """Immutable run settings populated from environment variables."""

    # ── Geometry / output ───────────────────────────────
    GEOMETRY_PATH: str = field(default_factory=lambda: _env("SINGULARK_GEOMETRY", str(DEFAULT_GEOMETRY_PATH)))
    OUTPUT_DIR: str = field(default_factory=lambda: _env("SINGULARK_OUTPUT_DIR", "out"))

    # ── Sampling / search ───────────────────────────────
    DT: float = field(default_factory=lambda: _env_float("SINGULARK_DT", "0.1"))
    SEED: int = field(default_factory=lambda: _env_int("SINGULARK_SEED", "0"))
    N_STARTS: int = field(default_factory=lambda: _env_int("SINGULARK_N_STARTS", "4096"))

    # ── Classification thresholds ───────────────────────
    OMEGA_TOL_DEG: float = field(default_factory=lambda: _env_float("SINGULARK_OMEGA_TOL_DEG", "0.1"))
    V_TOL: float = field(default_factory=lambda: _env_float("SINGULARK_V_TOL", "1e-3"))
    D_TOL: float = field(default_factory=lambda: _env_float("SINGULARK_D_TOL", "1e-4"))

    # ── Experimental limits ─────────────────────────────
    LIM_DETJD: float = field(default_factory=lambda: _env_float("SINGULARK_LIM_DETJD", "0.015"))
    LIM_OMEGA_DEG: float = field(default_factory=lambda: _env_float("SINGULARK_LIM_OMEGA_DEG", "1.80"))

    # ── Logging ─────────────────────────────────────────
    LOG_LEVEL: str = field(default_factory=lambda: _env("SINGULARK_LOG_LEVEL", "INFO"))

