"""Classical transformation laws for electromagnetic fields, independent of the beta matrices."""

import numpy as np
from scipy.spatial.transform import Rotation
from src.fields.wavefunction import EMFields
from src.lorentz.transformations import unit_axis

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
_LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _LEVI_CIVITA[_i, _j, _k], _LEVI_CIVITA[_j, _i, _k] = 1.0, -1.0


def rotate_fields(fields: EMFields, axis, angle: float) -> EMFields:
    """Rotate E, H and A right-handedly by angle about axis; A0 is a scalar under rotations."""
    rotation = Rotation.from_rotvec(unit_axis(axis) * angle)
    return EMFields(E=rotation.apply(fields.E), H=rotation.apply(fields.H), A=rotation.apply(fields.A), A0=fields.A0)


def boost_matrix(direction, rapidity: float) -> np.ndarray:
    """
    Coordinate transformation x'^mu = Lambda^mu_nu x^nu to the frame moving with velocity tanh(rapidity) c along direction.
    """
    d = unit_axis(direction)
    cosh, sinh = np.cosh(rapidity), np.sinh(rapidity)
    matrix = np.eye(4)
    matrix[0, 0] = cosh
    matrix[0, 1:] = -sinh * d
    matrix[1:, 0] = -sinh * d
    matrix[1:, 1:] += (cosh - 1.0) * np.outer(d, d)
    return matrix


def field_tensor(E: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Contravariant F^{mu nu} with F^{0i} = -E_i and F^{ij} = -eps_ijk H_k."""
    tensor = np.zeros((4, 4), dtype=np.result_type(E, H))
    tensor[0, 1:] = -E
    tensor[1:, 0] = E
    tensor[1:, 1:] = -np.einsum("ijk,k->ij", _LEVI_CIVITA, H)
    return tensor


def fields_from_tensor(tensor: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    E = -tensor[0, 1:]
    H = -0.5 * np.einsum("ijk,ij->k", _LEVI_CIVITA, tensor[1:, 1:])
    return E, H


def boost_fields(fields: EMFields, direction, rapidity: float) -> EMFields:
    """
    Fields seen from the boosted frame: F transforms as a rank-2 tensor, (A0, A) as a four-vector.
    """
    boost = boost_matrix(direction, rapidity)
    tensor = boost @ field_tensor(fields.E, fields.H) @ boost.T
    E, H = fields_from_tensor(tensor)
    potential = boost @ np.concatenate([[fields.A0], fields.A])
    return EMFields(E=E, H=H, A=potential[1:], A0=potential[0])


def boost_stress_tensor(theta: np.ndarray, direction, rapidity: float) -> np.ndarray:
    """Transform a covariant rank-2 tensor T_{mu nu} to the boosted frame."""
    lower = METRIC @ boost_matrix(direction, rapidity) @ METRIC
    return lower @ theta @ lower.T
