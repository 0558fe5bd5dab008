"""
Magnetic Surface Lab - Core Domain Package

Domain models, numerical services and the error hierarchy.
"""

__all__ = []
