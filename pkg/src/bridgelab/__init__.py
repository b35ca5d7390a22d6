"""Toolkit for plat presentations, bridge-sphere arc sweeps, and
2-connectivity certificates of the twist-surgered link family."""

__version__ = "0.1.0"
