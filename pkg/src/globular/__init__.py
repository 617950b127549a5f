"""Globular: a symbolic engine for pasting schemes, coherator towers and
finite weak-groupoid models."""

__version__ = "0.1.0"
