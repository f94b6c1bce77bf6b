"""Capacity-expansion planning with seasonal hydrogen storage."""

__version__ = "0.1.0"
