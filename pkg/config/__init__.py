"""Configuration module for singulark."""

from config.settings import DEFAULT_GEOMETRY_PATH, Settings

__all__ = ["DEFAULT_GEOMETRY_PATH", "Settings"]
