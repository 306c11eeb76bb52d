"""Packing of electromagnetic fields into the 10-component wavefunction and the observables built on it.

Every observable accepts a FieldVector or a raw array whose last axis holds the
ten components, so the same functions serve single points and whole lattices.
"""

from numbers import Number
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from src.shared.conf import Config
from src.algebra.representation import BetaRep, DIMENSION, FIELD_SLOTS, STANDARD_GAMMA
from src.fields.exceptions import FieldShapeError

SQRT2 = np.sqrt(2.0)
_GAMMA_MASK = np.diag(STANDARD_GAMMA)


def _as_vector(value, length: int) -> np.ndarray:
    array = np.asarray(value)
    if array.shape != (length,):
        raise FieldShapeError(f"expected {length} components, got shape {array.shape}")
    if np.iscomplexobj(array) and np.all(array.imag == 0):
        array = array.real
    if not np.issubdtype(array.dtype, np.complexfloating):
        array = array.astype(float)
    array = array.copy()
    array.setflags(write=False)
    return array


class EMFields(BaseModel):
    """
    Electromagnetic fields and potentials at a point.

    Complex values are accepted: superpositions of wavefunctions with complex coefficients
    unpack to complex fields, flagged by is_real().

    Attributes:
        E (np.ndarray): Electric field, 3 components.
        H (np.ndarray): Magnetic field, 3 components.
        A (np.ndarray): Vector potential, 3 components.
        A0 (Number): Scalar potential.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    E: np.ndarray
    H: np.ndarray
    A: np.ndarray
    A0: Number = 0.0

    @field_validator("E", "H", "A", mode="before")
    def validate_three_vector(cls, value):
        return _as_vector(value, 3)

    @field_validator("A0", mode="before")
    def validate_scalar_potential(cls, value):
        value = complex(value)
        return value.real if value.imag == 0 else value

    @classmethod
    def zero(cls) -> "EMFields":
        return cls(E=np.zeros(3), H=np.zeros(3), A=np.zeros(3), A0=0.0)

    def is_real(self) -> bool:
        """Return False when any component carries an imaginary part."""
        return not any(np.iscomplexobj(part) for part in (self.E, self.H, self.A)) and not isinstance(self.A0, complex)

    def __str__(self) -> str:
        return f"EMFields(E={self.E}, H={self.H}, A={self.A}, A0={self.A0})"


class FieldVector(BaseModel):
    """
    The 10-component wavefunction psi at a point, ordered (-E, H, -A/l0, A0/l0) / sqrt 2.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    psi: np.ndarray

    @field_validator("psi", mode="before")
    def validate_psi(cls, value):
        array = np.asarray(value, dtype=complex).copy()
        if array.shape != (DIMENSION,):
            raise FieldShapeError(f"psi must have {DIMENSION} components, got shape {array.shape}")
        array.setflags(write=False)
        return array

    def is_real(self) -> bool:
        return bool(np.all(self.psi.imag == 0))

    def __str__(self) -> str:
        return f"FieldVector({np.array2string(self.psi, precision=4)})"


def _components(psi) -> np.ndarray:
    array = psi.psi if isinstance(psi, FieldVector) else np.asarray(psi)
    if array.shape[-1] != DIMENSION:
        raise FieldShapeError(f"last axis must hold {DIMENSION} components, got shape {array.shape}")
    return array


def pack_components(E, H, A, A0, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> np.ndarray:
    """
    Pack field arrays of shape (..., 3) and a scalar potential of shape (...) into psi of shape (..., 10).

    The six field-strength components do not involve l0, so they are bit-identical for every l0.
    """
    E, H, A = np.asarray(E), np.asarray(H), np.asarray(A)
    A0 = np.asarray(A0)[..., None]
    potentials = np.concatenate([-A, A0], axis=-1) / fundamental_length
    return np.concatenate([-E / SQRT2, H / SQRT2, potentials / SQRT2], axis=-1)


def unpack_components(psi: np.ndarray, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of pack_components: returns (E, H, A, A0) arrays."""
    psi = _components(psi)
    E = -SQRT2 * psi[..., 0:3]
    H = SQRT2 * psi[..., 3:6]
    A = -SQRT2 * fundamental_length * psi[..., 6:9]
    A0 = SQRT2 * fundamental_length * psi[..., 9]
    return E, H, A, A0


def pack(fields: EMFields, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> FieldVector:
    """
    Pack physical fields into the wavefunction.

    Args:
        fields (EMFields): E, H, A, A0 at a point.
        fundamental_length (float): l0, default from configuration.

    Returns:
        FieldVector: psi = (-E, H, -A/l0, A0/l0) / sqrt 2.
    """
    return FieldVector(psi=pack_components(fields.E, fields.H, fields.A, fields.A0, fundamental_length))


def unpack(psi: FieldVector, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> EMFields:
    """
    Recover physical fields from a wavefunction. Complex psi yields complex fields.
    """
    E, H, A, A0 = unpack_components(psi, fundamental_length)
    return EMFields(E=E, H=H, A=A, A0=complex(A0))


def project_gamma(psi):
    """
    Classical wavefunction Psi = gamma psi: keeps E and H, zeroes the four potentials.

    Returns a FieldVector for FieldVector input, an array otherwise.
    """
    projected = _components(psi) * _GAMMA_MASK
    return FieldVector(psi=projected) if isinstance(psi, FieldVector) else projected


def energy_density(psi):
    """
    Energy density Psi^dagger Psi = (E.E + H.H) / 2.
    """
    field_part = _components(psi)[..., FIELD_SLOTS]
    density = np.sum(np.abs(field_part) ** 2, axis=-1)
    return float(density) if density.ndim == 0 else density


def expectation(rep: BetaRep, psi, op: np.ndarray):
    """
    Local value of an observable, Psi-bar O Psi with Psi-bar = Psi^dagger eta and Psi = gamma psi.

    Args:
        rep (BetaRep): Supplies eta.
        psi: FieldVector or array (..., 10).
        op (np.ndarray): The 10x10 operator.

    Returns:
        complex or np.ndarray: The pairing, per site for array input.
    """
    field = project_gamma(_components(psi))
    value = np.einsum("...a,ab,bc,...c->...", field.conj(), rep.eta, op, field)
    return complex(value) if np.ndim(value) == 0 else value


def field_invariant(rep: BetaRep, psi):
    """
    Psi-bar Psi = (E.E - H.H) / 2, the Lorentz scalar carried by the eta pairing.
    """
    value = np.real(expectation(rep, psi, np.eye(rep.dimension)))
    return float(value) if np.ndim(value) == 0 else value


def energy_operator(rep: BetaRep) -> np.ndarray:
    """Operator whose eta pairing is the energy density: 2 beta_0^2 - g_00 = eta."""
    beta0 = rep.beta[0]
    return 2.0 * beta0 @ beta0 - rep.metric[0, 0] * np.eye(rep.dimension)


def poynting_operator(rep: BetaRep, i: int, c: float = Config.SPEED_OF_LIGHT) -> np.ndarray:
    """
    Operator whose eta pairing is the Poynting component S_i.

    The bare commutator beta-tilde_i pairs to zero against real fields under eta, so the
    operator is -c (beta_0 beta_i + beta_i beta_0) = c eta beta-tilde^i on the gamma block.

    Args:
        rep (BetaRep): The representation.
        i (int): Spatial index 1, 2 or 3.
        c (float): Wave speed.
    """
    if i not in (1, 2, 3):
        raise ValueError(f"spatial index must be 1, 2 or 3, got {i}")
    beta0, beta_i = rep.beta[0], rep.beta[i]
    return -c * (beta0 @ beta_i + beta_i @ beta0)


def poynting(rep: BetaRep, psi, c: float = Config.SPEED_OF_LIGHT) -> np.ndarray:
    """
    Poynting vector c (E x H), returned with shape (..., 3).
    """
    components = [np.real(expectation(rep, psi, poynting_operator(rep, i, c))) for i in (1, 2, 3)]
    return np.stack(components, axis=-1)


def stress_tensor(rep: BetaRep, psi) -> np.ndarray:
    """
    Energy-momentum tensor Theta_{mu nu} = -Psi-bar (beta_mu beta_nu + beta_nu beta_mu - g_{mu nu}) Psi.

    Returns:
        np.ndarray: Real symmetric tensor of shape (..., 4, 4); -Theta_00 is the energy density and
        Theta_0i = (E x H)_i.
    """
    products = np.einsum("mab,nbc->mnac", rep.beta, rep.beta)
    operators = products + products.transpose(1, 0, 2, 3) - np.einsum("mn,ab->mnab", rep.metric, np.eye(rep.dimension))
    field = project_gamma(_components(psi))
    values = np.einsum("...a,ab,mnbc,...c->...mn", field.conj(), rep.eta, operators, field)
    return -np.real(values)


def riemann_silberstein_matrix() -> np.ndarray:
    """
    Unitary U with U Psi = Psi-hat, whose first six entries are (-E + iH, E + iH) / 2.

    On the gamma block U = (1/sqrt 2) [[I, iI], [-I, iI]]; it acts as the identity on the potentials.
    """
    identity = np.eye(3)
    block = np.block([[identity, 1j * identity], [-identity, 1j * identity]]) / SQRT2
    matrix = np.eye(DIMENSION, dtype=complex)
    matrix[FIELD_SLOTS, FIELD_SLOTS] = block
    return matrix


def riemann_silberstein(psi) -> np.ndarray:
    """
    Riemann-Silberstein form Psi-hat = U gamma psi, shape (..., 10) with the last four entries zero.
    """
    field = project_gamma(_components(psi))
    return np.einsum("ab,...b->...a", riemann_silberstein_matrix(), field)
