"""Robot geometry, poses and anchor points for the 3UPS+RPU parallel robot."""
