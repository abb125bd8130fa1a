"""Exact characteristic-class and Riemann-Roch index engine for Lie algebroids."""

__version__ = "0.1.0"
