"""
Magnetic Surface Lab - sl(2,R) / PSL(2,R) Operations

Closed-form exponentials, the adjoint action, the Moebius action on the
upper half-plane, hyperbolic distance and conjugation to normal forms.
Scalar operations work on the value types; the batch_* kernels work on
numpy stacks of frames with shape (n, 2, 2).
"""

import logging
import math
from typing import NamedTuple, Tuple

import numpy as np

from config.settings import Settings
from core.errors import DomainError
from core.models.sl2 import (
    AlgebraElement, ElementClass, GroupElement, HalfPlanePoint,
    U_PLUS, V, X,
)

logger = logging.getLogger(__name__)

_BASIS = (X, V, U_PLUS)


class NormalForm(NamedTuple):
    """Result of normal_form: C·Y·C^-1 = scale · (X, V or U+)."""

    element_class: ElementClass
    conjugator: GroupElement
    scale: float

    def normal_element(self) -> AlgebraElement:
        """The normal-form generator scale·X, scale·V or scale·U+."""
        base = {
            ElementClass.HYPERBOLIC: X,
            ElementClass.ELLIPTIC: V,
            ElementClass.PARABOLIC: U_PLUS,
        }[self.element_class]
        return self.scale * base


def det_algebra(Y: AlgebraElement) -> float:
    """Exact determinant of a traceless generator."""
    return Y.det()


def exp_algebra(Y: AlgebraElement, t: float) -> GroupElement:
    """Closed-form exp(tY) selected by the sign of det Y.

    Y^2 = -det(Y)·I for traceless Y, so the series sums to cos/cosh forms.
    Below the parabolic threshold the nilpotent branch I + tY is used.

    Args:
        Y: Generator
        t: Time

    Returns:
        GroupElement: exp(tY)
    """
    return GroupElement.from_array(exp_matrix(Y, t))


def exp_matrix(Y: AlgebraElement, t: float) -> np.ndarray:
    """exp(tY) as a raw 2x2 array (same branches as exp_algebra)."""
    d = Y.det()
    if abs(d) < Settings.TOLERANCES["parabolic"]:
        c, s = 1.0, t
    elif d < 0.0:
        rho = math.sqrt(-d)
        c, s = math.cosh(rho * t), math.sinh(rho * t) / rho
    else:
        omega = math.sqrt(d)
        c, s = math.cos(omega * t), math.sin(omega * t) / omega
    return np.array([
        [c + s * Y.a11, s * Y.a12],
        [s * Y.a21, c - s * Y.a11],
    ])


def mobius(g: GroupElement, z: HalfPlanePoint) -> HalfPlanePoint:
    """Moebius action (m11 z + m12) / (m21 z + m22) on the upper half-plane.

    Args:
        g: Group element
        z: Point with Im z > 0

    Returns:
        HalfPlanePoint: Image point
    """
    HalfPlanePoint(*z).validate("mobius")
    x, y = z
    den_re = g.m21 * x + g.m22
    den_im = g.m21 * y
    den = den_re * den_re + den_im * den_im
    num_re = g.m11 * x + g.m12
    num_im = g.m11 * y
    re = (num_re * den_re + num_im * den_im) / den
    im = (num_im * den_re - num_re * den_im) / den
    return HalfPlanePoint(re, im)


def hyp_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> float:
    """Hyperbolic distance arccosh(1 + |z-w|^2 / (2 Im z Im w)).

    Evaluated as 2·asinh(|z-w| / (2·sqrt(Im z Im w))), which keeps full
    relative precision for nearby points.
    """
    dx = z[0] - w[0]
    dy = z[1] - w[1]
    return 2.0 * math.asinh(math.hypot(dx, dy) / (2.0 * math.sqrt(z[1] * w[1])))


def base_point(g: GroupElement) -> HalfPlanePoint:
    """Base point g·i of a frame."""
    den = g.m21 * g.m21 + g.m22 * g.m22
    return HalfPlanePoint((g.m11 * g.m21 + g.m12 * g.m22) / den, g.det() / den)


def _coordinates(matrix: np.ndarray) -> np.ndarray:
    # [[a, b], [c, -a]] = 2a·X - 2c·V + (b + c)·U+
    a = 0.5 * (matrix[0, 0] - matrix[1, 1])
    b, c = matrix[0, 1], matrix[1, 0]
    return np.array([2.0 * a, -2.0 * c, b + c])


def _adjoint_of(matrix: np.ndarray) -> np.ndarray:
    # Z -> M Z adj(M); equals conjugation when det M = 1
    adjugate = np.array([[matrix[1, 1], -matrix[0, 1]], [-matrix[1, 0], matrix[0, 0]]])
    columns = [_coordinates(matrix @ basis.as_array() @ adjugate) for basis in _BASIS]
    return np.column_stack(columns)


def adjoint_matrix(g: GroupElement) -> np.ndarray:
    """3x3 matrix of Y -> gYg^-1 in the basis (X, V, U+)."""
    return _adjoint_of(g.as_array())


def adjoint_norm(g: GroupElement) -> float:
    """Operator norm of the adjoint action of g."""
    return float(np.linalg.norm(adjoint_matrix(g), 2))


def log_adjoint_norm(Y: AlgebraElement, t: float) -> float:
    """log adjoint_norm(exp_algebra(Y, t)) without overflow at large t.

    In the hyperbolic branch exp(tY) = cosh(rho t)·(I + tanh(rho t)/rho·Y),
    and the scalar factor contributes 2·log cosh(rho t) to the log-norm.
    """
    d = Y.det()
    if d < 0.0 and abs(d) >= Settings.TOLERANCES["parabolic"]:
        rho = math.sqrt(-d)
        x = abs(rho * t)
        log_cosh = x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)
        scaled = np.eye(2) + (math.tanh(rho * t) / rho) * Y.as_array()
        return 2.0 * log_cosh + math.log(np.linalg.norm(_adjoint_of(scaled), 2))
    return math.log(np.linalg.norm(_adjoint_of(exp_matrix(Y, t)), 2))


def _eigenvector(Y: AlgebraElement, eigenvalue: float) -> np.ndarray:
    # Both candidates are eigenvectors when nonzero; keep the better scaled one
    first = np.array([Y.a12, eigenvalue - Y.a11])
    second = np.array([eigenvalue + Y.a11, Y.a21])
    return first if np.linalg.norm(first) >= np.linalg.norm(second) else second


def _conjugator_from_columns(p1: np.ndarray, p2: np.ndarray) -> GroupElement:
    # P = [p1 p2] with det P > 0; C = P^-1 after scaling to det 1
    P = np.column_stack([p1, p2])
    det = float(np.linalg.det(P))
    P = P / math.sqrt(det)
    return GroupElement.from_array(P).inverse()


def normal_form(Y: AlgebraElement) -> NormalForm:
    """Conjugate Y to s·X (hyperbolic), s·V (elliptic) or s·U+ (parabolic).

    Args:
        Y: Nonzero generator

    Returns:
        NormalForm: (class, C, s) with C·Y·C^-1 = s·normal
    """
    if Y.is_zero():
        raise DomainError("zero element has no normal form", "normal_form")
    d = Y.det()
    element_class = ElementClass.from_determinant(d)

    if element_class is ElementClass.HYPERBOLIC:
        rho = math.sqrt(-d)
        p1 = _eigenvector(Y, rho)
        p2 = _eigenvector(Y, -rho)
        if p1[0] * p2[1] - p1[1] * p2[0] < 0.0:
            p2 = -p2
        return NormalForm(element_class, _conjugator_from_columns(p1, p2), 2.0 * rho)

    if element_class is ElementClass.ELLIPTIC:
        omega = math.sqrt(d)
        p1 = np.array([1.0, 0.0])
        image = np.array([Y.a11, Y.a21]) / omega
        # det [p1, -image] = -a21/omega; flip orientation when a21 > 0
        if Y.a21 < 0.0:
            return NormalForm(element_class, _conjugator_from_columns(p1, -image), 2.0 * omega)
        return NormalForm(element_class, _conjugator_from_columns(p1, image), -2.0 * omega)

    Ymat = Y.as_array()
    e1_image = Ymat @ np.array([1.0, 0.0])
    e2_image = Ymat @ np.array([0.0, 1.0])
    if np.linalg.norm(e1_image) >= np.linalg.norm(e2_image):
        p2, p1 = np.array([1.0, 0.0]), e1_image
    else:
        p2, p1 = np.array([0.0, 1.0]), e2_image
    if p1[0] * p2[1] - p1[1] * p2[0] > 0.0:
        return NormalForm(element_class, _conjugator_from_columns(p1, p2), 1.0)
    return NormalForm(element_class, _conjugator_from_columns(-p1, p2), -1.0)


def conjugate(C: GroupElement, Y: AlgebraElement) -> AlgebraElement:
    """C·Y·C^-1 as an algebra element."""
    return AlgebraElement.from_array(C.as_array() @ Y.as_array() @ C.inverse().as_array())


def fixed_point(Y: AlgebraElement) -> HalfPlanePoint:
    """Fixed point in the half-plane of the elliptic subgroup exp(tY).

    Solves a21 z^2 - 2 a11 z - a12 = 0; the root with positive imaginary
    part is (a11 + i sqrt(det Y)) / a21.
    """
    d = Y.det()
    if ElementClass.from_determinant(d) is not ElementClass.ELLIPTIC:
        raise DomainError("only elliptic generators fix a point of the half-plane", "fixed_point")
    return HalfPlanePoint(Y.a11 / Y.a21, math.sqrt(d) / abs(Y.a21))


# =============================================================================
# BATCH KERNELS
# =============================================================================

def frames_to_array(frames) -> np.ndarray:
    """Stack GroupElements into an (n, 2, 2) array."""
    if len(frames) == 0:
        return np.zeros((0, 2, 2))
    return np.stack([g.as_array() for g in frames])


def array_to_frames(array: np.ndarray) -> list:
    """Unstack an (n, 2, 2) array into GroupElements."""
    return [GroupElement.from_array(matrix) for matrix in array]


def batch_renormalize(frames: np.ndarray) -> np.ndarray:
    """Rescale frames whose determinant drifted beyond tolerance (in place)."""
    det = frames[:, 0, 0] * frames[:, 1, 1] - frames[:, 0, 1] * frames[:, 1, 0]
    drifted = np.abs(det - 1.0) > Settings.TOLERANCES["det_drift"]
    if np.any(drifted):
        frames[drifted] /= np.sqrt(det[drifted])[:, None, None]
    return frames


def batch_base_points(frames: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Base points g·i of a stack of frames as (re, im) arrays."""
    a, b = frames[:, 0, 0], frames[:, 0, 1]
    c, d = frames[:, 1, 0], frames[:, 1, 1]
    den = c * c + d * d
    return (a * c + b * d) / den, (a * d - b * c) / den


def batch_distance(re1, im1, re2, im2) -> np.ndarray:
    """Broadcasting hyperbolic distance between point arrays."""
    return 2.0 * np.arcsinh(np.hypot(re1 - re2, im1 - im2) / (2.0 * np.sqrt(im1 * im2)))


def batch_fiber_angles(frames: np.ndarray) -> np.ndarray:
    """Angle of each frame direction relative to the upward vertical at its base.

    The derivative of z -> g·z at i is (m21 i + m22)^-2, so the pushed
    vertical vector is rotated by -2·atan2(m21, m22).
    """
    return -2.0 * np.arctan2(frames[:, 1, 0], frames[:, 1, 1])


def batch_rotations(angles: np.ndarray) -> np.ndarray:
    """Stack of exp(theta V) = [[cos(theta/2), sin(theta/2)], [-sin(theta/2), cos(theta/2)]]."""
    angles = np.asarray(angles, dtype=float)
    c, s = np.cos(0.5 * angles), np.sin(0.5 * angles)
    return np.stack([np.stack([c, s], axis=-1), np.stack([-s, c], axis=-1)], axis=-2)
