"""Mustafin degenerations of generalised multi-view varieties."""

__version__ = "0.1.0"
