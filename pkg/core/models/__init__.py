"""
Magnetic Surface Lab - Domain Models Package

Value types for group elements, the surface group, magnetic parameters,
observables, decay tables, Landau levels and zonal tori.
"""

from .sl2 import HalfPlanePoint, I_POINT, ElementClass, AlgebraElement, GroupElement, X, V, U_PLUS
from .surface import SurfaceGroup, FundamentalDomain
from .magnetic import MagneticParams, PhaseState, GrowthFit, ConjugacyResult
from .observable import Observable
from .ergodic import DecayTable, ThetaFit
from .landau import LandauLevel, WeinsteinModel
from .zonal import ZonalTorus, RadialHistogram, BlowupFit

__all__ = [
    'HalfPlanePoint', 'I_POINT', 'ElementClass', 'AlgebraElement', 'GroupElement', 'X', 'V', 'U_PLUS',
    'SurfaceGroup', 'FundamentalDomain',
    'MagneticParams', 'PhaseState', 'GrowthFit', 'ConjugacyResult',
    'Observable',
    'DecayTable', 'ThetaFit',
    'LandauLevel', 'WeinsteinModel',
    'ZonalTorus', 'RadialHistogram', 'BlowupFit',
]
