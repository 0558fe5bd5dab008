"""
Magnetic Surface Lab - Configuration Package

Application constants, numerical tolerances and experiment defaults.
"""

from .settings import Settings

__all__ = ['Settings']
