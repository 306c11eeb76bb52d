"""Finite Lorentz transformations generated by sigma_{mu nu} = [beta_mu, beta_nu].

A parameter array theta (antisymmetric, 4x4) maps to the group element

    exp( sum_{mu < nu} theta[mu, nu] sigma_{mu nu} )

Rotation by angle a about n uses theta[2,3], theta[3,1], theta[1,2] = a n and
rotates E, H and A right-handedly. A boost uses theta[0,i] = chi d_i and is the
passive transformation to the frame moving with velocity tanh(chi) c along d.
"""

import logging
from enum import Enum
from typing import Optional
import numpy as np
from scipy.linalg import expm
from pydantic import BaseModel, ConfigDict, field_validator
from src.algebra.representation import BetaRep
from src.fields.grid import FieldGrid
from src.fields.wavefunction import FieldVector
from src.lorentz.exceptions import InvalidAxisError

logger = logging.getLogger("LORENTZ_TRANSFORMATIONS")

AXIS_TOLERANCE = 1e-12
_AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


class LorentzKind(str, Enum):
    ROTATION = "rotation"
    BOOST = "boost"
    GENERAL = "general"


class LorentzElement(BaseModel):
    """
    A Lorentz group element in the 10-dimensional representation.

    Attributes:
        params (Optional[np.ndarray]): Antisymmetric 4x4 parameters theta, None for composed elements.
        matrix (np.ndarray): The 10x10 exponential.
        kind (LorentzKind): rotation, boost or general.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    params: Optional[np.ndarray] = None
    matrix: np.ndarray
    kind: LorentzKind = LorentzKind.GENERAL

    @field_validator("params")
    def validate_params(cls, value):
        """
        Raises:
            ValueError: If params is not an antisymmetric 4x4 array.
        """
        if value is None:
            return value
        value = np.array(value, dtype=float)
        if value.shape != (4, 4) or not np.allclose(value, -value.T, rtol=0, atol=0):
            raise ValueError("params must be an antisymmetric 4x4 array")
        value.setflags(write=False)
        return value

    @field_validator("matrix")
    def validate_matrix(cls, value):
        value = np.array(value, dtype=complex)
        if value.ndim != 2 or value.shape[0] != value.shape[1]:
            raise ValueError(f"matrix must be square, got shape {value.shape}")
        if not np.all(np.isfinite(value)):
            raise ValueError("matrix must be finite")
        value.setflags(write=False)
        return value

    def inverse(self) -> "LorentzElement":
        if self.params is not None:
            return LorentzElement(params=-self.params, matrix=np.linalg.inv(self.matrix), kind=self.kind)
        return LorentzElement(matrix=np.linalg.inv(self.matrix), kind=self.kind)

    def __str__(self) -> str:
        return f"LorentzElement({self.kind.value})"


def unit_axis(axis) -> np.ndarray:
    """
    Validate a unit 3-vector; the names "x", "y" and "z" are accepted.

    Raises:
        InvalidAxisError: If the vector is not three components of unit length.
    """
    if isinstance(axis, str):
        if axis.lower() not in _AXES:
            raise InvalidAxisError(f"unknown axis name {axis!r}")
        return np.array(_AXES[axis.lower()])
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1.0) > AXIS_TOLERANCE:
        raise InvalidAxisError(f"axis must be a unit 3-vector, got {axis}")
    return axis


def rotation_params(axis, angle: float) -> np.ndarray:
    nx, ny, nz = unit_axis(axis) * angle
    params = np.zeros((4, 4))
    params[2, 3], params[3, 1], params[1, 2] = nx, ny, nz
    return params - params.T


def boost_params(direction, rapidity: float) -> np.ndarray:
    params = np.zeros((4, 4))
    params[0, 1:] = unit_axis(direction) * rapidity
    return params - params.T


def generator(rep: BetaRep, params: np.ndarray) -> np.ndarray:
    """sum_{mu < nu} theta[mu, nu] sigma_{mu nu}."""
    return 0.5 * np.einsum("mn,mnab->ab", params, rep.sigmas)


def general(rep: BetaRep, params, kind: LorentzKind = LorentzKind.GENERAL) -> LorentzElement:
    """
    Group element for arbitrary antisymmetric parameters.

    Args:
        rep (BetaRep): The representation.
        params: Antisymmetric 4x4 array theta.
        kind (LorentzKind): Label stored on the element.
    """
    params = np.asarray(params, dtype=float)
    return LorentzElement(params=params, matrix=expm(generator(rep, params)), kind=kind)


def rotation(rep: BetaRep, axis, angle: float) -> LorentzElement:
    """
    Rotation by angle (radians) about a unit axis.

    Raises:
        InvalidAxisError: If axis is not a unit 3-vector.
    """
    return general(rep, rotation_params(axis, angle), LorentzKind.ROTATION)


def boost(rep: BetaRep, direction, rapidity: float) -> LorentzElement:
    """
    Passive boost with the given rapidity along a unit direction.

    Raises:
        InvalidAxisError: If direction is not a unit 3-vector.
    """
    return general(rep, boost_params(direction, rapidity), LorentzKind.BOOST)


def compose(second: LorentzElement, first: LorentzElement) -> LorentzElement:
    """The element that applies first, then second."""
    kind = LorentzKind.ROTATION if first.kind == second.kind == LorentzKind.ROTATION else LorentzKind.GENERAL
    return LorentzElement(matrix=second.matrix @ first.matrix, kind=kind)


def apply(elem: LorentzElement, psi):
    """
    Act on a wavefunction: FieldVector in, FieldVector out; arrays of shape (..., 10) are transformed site by site.
    """
    if isinstance(psi, FieldVector):
        return FieldVector(psi=elem.matrix @ psi.psi)
    return np.einsum("ab,...b->...a", elem.matrix, np.asarray(psi))


def apply_to_grid(elem: LorentzElement, grid: FieldGrid) -> FieldGrid:
    """Transform the field values at every site; lattice coordinates are left unchanged."""
    logger.info(f"Applying {elem} to {grid}")
    return grid.with_data(apply(elem, grid.data))


def cross_matrix(axis) -> np.ndarray:
    """Matrix [n]x with [n]x v = n x v."""
    nx, ny, nz = np.asarray(axis, dtype=float)
    return np.array([[0.0, -nz, ny], [nz, 0.0, -nx], [-ny, nx, 0.0]])


def complex_rotation(rep: BetaRep, axis, angle: complex) -> LorentzElement:
    """
    Complexified rotation: rotation by Re(angle) and boost by Im(angle), both about the same axis.

    In the Riemann-Silberstein frame it acts on (-E + iH) / 2 as exp(angle [n]x) and on
    (E + iH) / 2 as exp(conj(angle) [n]x), so rotations and boosts combine into SO(3, C).

    Raises:
        InvalidAxisError: If axis is not a unit 3-vector.
    """
    angle = complex(angle)
    params = rotation_params(axis, angle.real) + boost_params(axis, angle.imag)
    return general(rep, params)
