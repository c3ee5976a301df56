"""Tests for singulark."""
