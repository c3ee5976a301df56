"""Constraint equations, Jacobians and inverse/forward kinematics."""
