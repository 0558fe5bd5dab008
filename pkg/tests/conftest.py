"""
Shared fixtures for the Magnetic Surface Lab tests.
"""

import sys
from pathlib import Path

import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from core.models.magnetic import MagneticParams  # noqa: E402
from core.services.fuchsian_surface import default_surface  # noqa: E402


@pytest.fixture(scope="session")
def surface():
    """The Bolza surface."""
    return default_surface()


@pytest.fixture(scope="session")
def elliptic_params():
    """B = 2, E = 1: below the critical energy 2."""
    return MagneticParams(B=2.0, E=1.0)


@pytest.fixture(scope="session")
def critical_params():
    """B = 2, E = 2: at the critical energy."""
    return MagneticParams(B=2.0, E=2.0)


@pytest.fixture(scope="session")
def hyperbolic_params():
    """B = 2, E = 4: above the critical energy."""
    return MagneticParams(B=2.0, E=4.0)
