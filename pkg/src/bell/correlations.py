"""Polarization-entangled two-beam states and analyzer correlations.

A two-beam state carries amplitudes over (x1 x2, x1 y2, y1 x2, y1 y2). Writing them as
the 2x2 matrix M[i, j] (beam-1 index i, beam-2 index j), the analyzer correlation is

    <sigma_a (x) sigma_b> = tr(M^dagger sigma_a M sigma_b^T)
"""

import logging
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from src.shared.conf import Config
from src.shared.schema import BellSettings
from src.algebra.representation import BetaRep, FIELD_SLOTS
from src.fields.wavefunction import EMFields, FieldVector, pack, project_gamma
from src.bell.exceptions import BasisError, NormalizationError

logger = logging.getLogger("BELL_CORRELATIONS")

NORMALIZATION_TOLERANCE = 1e-12
BELL_BOUND = 1.0


def _gamma_norm(psi: FieldVector) -> float:
    return float(np.linalg.norm(psi.psi[FIELD_SLOTS]))


class PolarizationBasis(BaseModel):
    """
    Unit-normalized wavefunctions of the two linear polarization states of one beam.

    Attributes:
        xhat (FieldVector): Polarization along x: E along x, H along y.
        yhat (FieldVector): Polarization along y: E along y, H along -x.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    xhat: FieldVector
    yhat: FieldVector

    @model_validator(mode="after")
    def validate_orthonormal(self):
        """
        Raises:
            BasisError: If the states are not orthonormal under the gamma-block inner product.
        """
        x, y = project_gamma(self.xhat.psi), project_gamma(self.yhat.psi)
        gram = np.array([[np.vdot(x, x), np.vdot(x, y)], [np.vdot(y, x), np.vdot(y, y)]])
        if not np.allclose(gram, np.eye(2), rtol=0, atol=NORMALIZATION_TOLERANCE):
            raise BasisError(f"polarization states are not orthonormal, Gram matrix {gram}")
        return self

    @classmethod
    def plane_polarized(cls, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> "PolarizationBasis":
        """Basis built from pack(E = x, H = y) and pack(E = y, H = -x), normalized."""
        x_state = pack(EMFields(E=[1, 0, 0], H=[0, 1, 0], A=[0, 0, 0]), fundamental_length)
        y_state = pack(EMFields(E=[0, 1, 0], H=[-1, 0, 0], A=[0, 0, 0]), fundamental_length)
        return cls(
            xhat=FieldVector(psi=x_state.psi / _gamma_norm(x_state)),
            yhat=FieldVector(psi=y_state.psi / _gamma_norm(y_state)),
        )

    @property
    def columns(self) -> np.ndarray:
        """The 10x2 matrix [xhat, yhat] restricted to the gamma block."""
        return np.stack([project_gamma(self.xhat.psi), project_gamma(self.yhat.psi)], axis=-1)


class TwoBeamState(BaseModel):
    """
    Two-beam polarization state.

    Attributes:
        amps (np.ndarray): Four complex amplitudes over (x1 x2, x1 y2, y1 x2, y1 y2) with unit norm.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amps: np.ndarray

    @field_validator("amps", mode="before")
    def validate_amps(cls, value):
        """
        Raises:
            NormalizationError: If the amplitudes do not have unit norm.
        """
        array = np.array(value, dtype=complex)
        if array.shape != (4,):
            raise ValueError(f"a two-beam state has 4 amplitudes, got shape {array.shape}")
        _require_normalized(array)
        array.setflags(write=False)
        return array

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes as M[beam-1 index, beam-2 index]."""
        return self.amps.reshape(2, 2)

    def is_factorizable(self) -> bool:
        return int(np.linalg.matrix_rank(self.matrix, tol=NORMALIZATION_TOLERANCE)) == 1

    def __str__(self) -> str:
        return f"TwoBeamState({np.array2string(self.amps, precision=4)})"


def _require_normalized(amps: np.ndarray):
    norm = float(np.sum(np.abs(amps) ** 2))
    if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
        raise NormalizationError(f"state norm is {norm:.15g}, expected 1")


def entangled_state() -> TwoBeamState:
    """(x1 x2 + y1 y2) / sqrt 2."""
    return TwoBeamState(amps=np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0))


def product_state(angle_one: float, angle_two: float) -> TwoBeamState:
    """Both beams plane polarized, at angle_one and angle_two from the x axis."""
    beam_one = np.array([np.cos(angle_one), np.sin(angle_one)])
    beam_two = np.array([np.cos(angle_two), np.sin(angle_two)])
    return TwoBeamState(amps=np.kron(beam_one, beam_two))


def sigma_theta(theta) -> np.ndarray:
    """
    Analyzer observable at angle theta in the (x, y) basis: [[cos 2t, sin 2t], [sin 2t, -cos 2t]].

    It is an involution with eigenvalues +1 and -1. Array input gives shape (..., 2, 2).
    """
    cos, sin = np.cos(2.0 * np.asarray(theta, dtype=float)), np.sin(2.0 * np.asarray(theta, dtype=float))
    return np.stack([np.stack([cos, sin], axis=-1), np.stack([sin, -cos], axis=-1)], axis=-2)


def correlation_matrix(state: TwoBeamState, angles_one, angles_two) -> np.ndarray:
    """
    Correlations for every pair of analyzer angles.

    Returns:
        np.ndarray: Real array of shape (len(angles_one), len(angles_two)).

    Raises:
        NormalizationError: If the state is not normalized.
    """
    _require_normalized(state.amps)
    amplitudes = state.matrix
    analyzers_one = sigma_theta(np.atleast_1d(angles_one))
    analyzers_two = sigma_theta(np.atleast_1d(angles_two))
    values = np.einsum("ij,aik,bjl,kl->ab", amplitudes.conj(), analyzers_one, analyzers_two, amplitudes)
    return np.real(values)


def correlation(state: TwoBeamState, alpha: float, beta: float) -> float:
    """
    Expectation of sigma_alpha on beam 1 times sigma_beta on beam 2.

    Raises:
        NormalizationError: If the state is not normalized.
    """
    _require_normalized(state.amps)
    operator = np.kron(sigma_theta(alpha), sigma_theta(beta))
    value = np.vdot(state.amps, operator @ state.amps)
    if abs(value.imag) > 1e-14:
        logger.warning(f"Correlation has imaginary part {value.imag:.3e}")
    return float(value.real)


def bell_lhs(state: TwoBeamState, settings: BellSettings) -> float:
    """|E(alpha, beta) - E(alpha, gamma)| + E(beta, gamma); local models keep it at most 1."""
    return (
        abs(correlation(state, settings.alpha, settings.beta) - correlation(state, settings.alpha, settings.gamma_angle))
        + correlation(state, settings.beta, settings.gamma_angle)
    )


def chsh(state: TwoBeamState, a: float, a_prime: float, b: float, b_prime: float) -> float:
    """E(a, b) - E(a, b') + E(a', b) + E(a', b'); local models keep its magnitude at most 2."""
    return correlation(state, a, b) - correlation(state, a, b_prime) + correlation(state, a_prime, b) + correlation(state, a_prime, b_prime)


class ViolationScan(BaseModel):
    """
    Result of a grid scan of the Bell functional.

    Attributes:
        table (np.ndarray): Rows (alpha, beta, gamma, lhs) in radians, alpha varying slowest.
        max_lhs (float): Largest value found.
        argmax (BellSettings): Angles of the largest value.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    table: np.ndarray
    max_lhs: float
    argmax: BellSettings

    def violated(self) -> bool:
        return self.max_lhs > BELL_BOUND


def violation_scan(state: TwoBeamState, grid_resolution: int) -> ViolationScan:
    """
    Evaluate the Bell functional on the grid (k pi / N) over [0, pi)^3.

    Args:
        state (TwoBeamState): The state.
        grid_resolution (int): Points N per angle, at least 2.

    Returns:
        ViolationScan: N^3 rows with the maximum and its angles.
    """
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    angles = np.arange(grid_resolution) * np.pi / grid_resolution
    correlations = correlation_matrix(state, angles, angles)
    # lhs[a, b, g] = |C[a, b] - C[a, g]| + C[b, g]
    lhs = np.abs(correlations[:, :, None] - correlations[:, None, :]) + correlations[None, :, :]
    alpha, beta, gamma = np.meshgrid(angles, angles, angles, indexing="ij")
    table = np.stack([alpha.ravel(), beta.ravel(), gamma.ravel(), lhs.ravel()], axis=-1)
    best = int(np.argmax(lhs))
    a, b, g = np.unravel_index(best, lhs.shape)
    settings = BellSettings(alpha=angles[a], beta=angles[b], gamma_angle=angles[g])
    logger.info(f"Scanned {table.shape[0]} settings, max lhs {lhs.flat[best]:.6f} at {settings}")
    return ViolationScan(table=table, max_lhs=float(lhs.flat[best]), argmax=settings)


def embed_beam_states(pol: PolarizationBasis) -> tuple[FieldVector, FieldVector]:
    """
    Ten-component wavefunctions of the two polarization states, gamma-projected and of unit norm.

    The x state has entries only at -E_x and H_y, the y state only at -E_y and H_x.
    """
    states = []
    for psi in (pol.xhat, pol.yhat):
        projected = project_gamma(psi)
        states.append(FieldVector(psi=projected.psi / _gamma_norm(projected)))
    return states[0], states[1]


def analyzer_operator(rep: BetaRep, pol: PolarizationBasis, theta: float) -> np.ndarray:
    """
    Ten-dimensional analyzer eta X sigma_theta X^dagger with X = [xhat, yhat].

    The beam states are null under the eta pairing, so the operator carries eta to make
    psi-bar O psi reproduce the Hermitian two-dimensional expectation.
    """
    columns = pol.columns
    return rep.eta @ columns @ sigma_theta(theta) @ columns.conj().T


def correlation_embedded(rep: BetaRep, state: TwoBeamState, pol: PolarizationBasis, alpha: float, beta: float) -> float:
    """
    Correlation evaluated as psi-bar (O_alpha (x) O_beta) psi on the 10 x 10 two-beam wavefunction,
    with psi-bar = psi^dagger (eta (x) eta).
    """
    _require_normalized(state.amps)
    x_state, y_state = embed_beam_states(pol)
    columns = np.stack([x_state.psi, y_state.psi], axis=-1)
    two_beam = np.einsum("ij,ai,bj->ab", state.matrix, columns, columns)
    operator_one = analyzer_operator(rep, pol, alpha)
    operator_two = analyzer_operator(rep, pol, beta)
    value = np.einsum("ab,ac,bd,ce,df,ef->", two_beam.conj(), rep.eta, rep.eta, operator_one, operator_two, two_beam)
    return float(np.real(value))
