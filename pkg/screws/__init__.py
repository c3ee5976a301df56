"""Screw-theory singularity indices: TWS, OTS, Ω angles and classification."""
