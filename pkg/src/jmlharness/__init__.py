"""Correctness and completeness checks for JML method contracts."""

__version__ = "0.1.0"
