"""Trajectory families, pose CSV files and Loess smoothing."""
