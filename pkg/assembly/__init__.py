"""Assembly modes: multi-start forward kinematics and assembly-change checks."""
