"""
Magnetic Surface Lab - Services Package

One module per experiment area: SL(2,R) kernels, the Bolza surface,
magnetic flows, observables, Birkhoff averages, Landau levels and zonal
tori.
"""

from .fuchsian_surface import BolzaSurface, bolza_group, default_surface

__all__ = ['BolzaSurface', 'bolza_group', 'default_surface']
