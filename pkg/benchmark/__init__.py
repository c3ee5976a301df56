"""Experimental-limit benchmark: scans, limits, rates and reports."""
