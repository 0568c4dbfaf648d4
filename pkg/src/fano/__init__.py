"""Fano problems: exact degrees, certified fibers, and monodromy sampling."""

__version__ = "0.1.0"
