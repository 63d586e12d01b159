"""Hilbert modular forms over real quadratic fields of narrow class number one."""

__version__ = "0.1.0"
