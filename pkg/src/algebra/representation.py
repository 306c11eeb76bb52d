"""Ten-dimensional representation of the Kemmer-Duffin-Petiau algebra.

The wavefunction is ordered as

    psi = (1/sqrt 2) (-Ex, -Ey, -Ez, Hx, Hy, Hz, -Ax/l0, -Ay/l0, -Az/l0, A0/l0)

and the beta matrices are fixed by requiring that

    beta_mu d^mu psi - (i/l0) gamma psi = 0

reproduces E = -grad A0 - dA/dt / c and H = curl A in the six field rows and
curl H = dE/dt / c, div E = 0 in the four potential rows. The derivation is
written out in docs/representation.md.
"""

import logging
from functools import lru_cache
import numpy as np
from scipy.linalg import svd
from pydantic import BaseModel, ConfigDict, field_validator
from src.shared.conf import Config
from src.shared.schema import AlgebraReport
from src.algebra.exceptions import IndexOutOfRangeError, RepresentationError

logger = logging.getLogger("ALGEBRA_REPRESENTATION")

DIMENSION = 10
FIELD_SLOTS = slice(0, 6)
POTENTIAL_SLOTS = slice(6, 10)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
STANDARD_GAMMA = np.diag([1.0] * 6 + [0.0] * 4)

# Non-zero entries of the contravariant beta^mu, (row, column) -> value.
_UPPER_BETA_ENTRIES = {
    0: {(0, 6): -1j, (1, 7): -1j, (2, 8): -1j, (6, 0): 1j, (7, 1): 1j, (8, 2): 1j},
    1: {(0, 9): 1j, (9, 0): 1j, (4, 8): 1j, (8, 4): 1j, (5, 7): -1j, (7, 5): -1j},
    2: {(1, 9): 1j, (9, 1): 1j, (5, 6): 1j, (6, 5): 1j, (3, 8): -1j, (8, 3): -1j},
    3: {(2, 9): 1j, (9, 2): 1j, (3, 7): 1j, (7, 3): 1j, (4, 6): -1j, (6, 4): -1j},
}


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class BetaRep(BaseModel):
    """
    A representation of the KDP algebra together with its derived matrices.

    Attributes:
        beta (np.ndarray): Covariant beta_mu, shape (4, n, n).
        gamma (np.ndarray): Projector onto the field-strength components, shape (n, n).
        eta (np.ndarray): 2 beta_0^2 - 1, the metric of the pairing psi-bar = psi^dagger eta.
        beta_tilde (np.ndarray): beta_0 beta_i - beta_i beta_0 for i = 1, 2, 3, shape (3, n, n).
        sigmas (np.ndarray): Commutators [beta_mu, beta_nu], shape (4, 4, n, n).
        metric (np.ndarray): Minkowski metric diag(+1, -1, -1, -1).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    beta: np.ndarray
    gamma: np.ndarray
    eta: np.ndarray
    beta_tilde: np.ndarray
    sigmas: np.ndarray
    metric: np.ndarray

    @field_validator("beta")
    def validate_beta(cls, value):
        """
        Validates that beta holds four square matrices.

        Raises:
            ValueError: If the shape is not (4, n, n).
        """
        if value.ndim != 3 or value.shape[0] != 4 or value.shape[1] != value.shape[2]:
            raise ValueError(f"beta must have shape (4, n, n), got {value.shape}")
        return _frozen(value.astype(complex))

    @field_validator("gamma", "eta", "beta_tilde", "sigmas", "metric")
    def validate_read_only(cls, value):
        return _frozen(value)

    @classmethod
    def from_betas(cls, beta: np.ndarray, gamma: np.ndarray = STANDARD_GAMMA) -> "BetaRep":
        """
        Build a representation from four covariant beta matrices, deriving eta, beta-tilde and sigma.

        Args:
            beta (np.ndarray): Covariant beta_mu, shape (4, n, n).
            gamma (np.ndarray): The field projector. Defaults to diag(1,1,1,1,1,1,0,0,0,0).

        Returns:
            BetaRep: The representation. It is not verified; see verify_algebra.
        """
        beta = np.asarray(beta, dtype=complex)
        size = beta.shape[-1]
        eta = 2.0 * beta[0] @ beta[0] - np.eye(size)
        if np.all(eta.imag == 0):
            eta = eta.real
        beta_tilde = np.stack([beta[0] @ beta[i] - beta[i] @ beta[0] for i in (1, 2, 3)])
        products = np.einsum("mab,nbc->mnac", beta, beta)
        sigmas = products - products.transpose(1, 0, 2, 3)
        return cls(beta=beta, gamma=np.asarray(gamma, dtype=float), eta=eta, beta_tilde=beta_tilde, sigmas=sigmas, metric=METRIC)

    @property
    def beta_upper(self) -> np.ndarray:
        """Contravariant beta^mu = g^{mu mu} beta_mu."""
        return np.einsum("m,mab->mab", np.diag(self.metric), self.beta)

    @property
    def dimension(self) -> int:
        return self.beta.shape[-1]

    def __str__(self) -> str:
        return f"BetaRep(dimension={self.dimension})"


def _standard_betas() -> np.ndarray:
    upper = np.zeros((4, DIMENSION, DIMENSION), dtype=complex)
    for mu, entries in _UPPER_BETA_ENTRIES.items():
        for (row, column), value in entries.items():
            upper[mu, row, column] = value
    # lower the index: beta_mu = g_{mu mu} beta^mu
    return np.einsum("m,mab->mab", np.diag(METRIC), upper)


@lru_cache(maxsize=1)
def build_standard_rep() -> BetaRep:
    """
    Build the standard 10-dimensional representation and verify it.

    Returns:
        BetaRep: The verified representation.

    Raises:
        RepresentationError: If any algebra identity fails; an unverified representation is never returned.
    """
    rep = BetaRep.from_betas(_standard_betas())
    report = verify_algebra(rep, Config.ALGEBRA_TOLERANCE)
    if not report.passed:
        logger.critical(f"Standard representation failed verification: {report.failing()}")
        raise RepresentationError(f"Standard representation violates {[name for name, _ in report.failing()]}")
    logger.info(f"Standard representation built: {report}")
    return rep


def _norm(matrices: np.ndarray) -> np.ndarray:
    return np.linalg.norm(matrices, axis=(-2, -1))


def verify_algebra(rep: BetaRep, tol: float, span_word_length: int | None = None) -> AlgebraReport:
    """
    Measure every identity of the KDP algebra and its derived matrices.

    Args:
        rep (BetaRep): The representation to check.
        tol (float): Largest Frobenius residual that still passes.
        span_word_length (int | None): Word length for the span dimension. None grows words until the span saturates.

    Returns:
        AlgebraReport: Per-identity residuals; passed iff max_residual <= tol.
    """
    beta, metric, size = rep.beta, rep.metric, rep.dimension
    identity = np.eye(size)

    triple = np.einsum("mab,nbc,lcd->mnlad", beta, beta, beta)
    kdp_lhs = triple + triple.transpose(2, 1, 0, 3, 4)
    kdp_rhs = np.einsum("mad,nl->mnlad", beta, metric) + np.einsum("lad,nm->mnlad", beta, metric)

    gamma, eta = rep.gamma, rep.eta
    beta0_squared = beta[0] @ beta[0]
    expected_gamma = np.diag([1.0] * min(6, size) + [0.0] * max(size - 6, 0))
    commutators = np.stack([beta[0] @ beta[i] - beta[i] @ beta[0] for i in (1, 2, 3)])

    breakdown = [
        ("kdp_trilinear", float(_norm(kdp_lhs - kdp_rhs).max())),
        ("metric_signature", float(_norm(metric - METRIC))),
        ("gamma_idempotent", float(_norm(gamma @ gamma - gamma))),
        ("gamma_anticommutator", float(_norm(gamma @ beta + beta @ gamma - beta).max())),
        ("gamma_diagonal", float(_norm(gamma - expected_gamma))),
        ("eta_definition", float(_norm(eta - (2.0 * beta0_squared - identity)))),
        ("eta_involution", float(_norm(eta @ eta - identity))),
        ("eta_beta0", float(_norm(eta @ beta[0] - beta[0]))),
        ("eta_anticommutes_spatial", float(_norm(eta @ beta[1:] + beta[1:] @ eta).max())),
        ("beta_tilde_definition", float(_norm(rep.beta_tilde - commutators).max())),
        ("sigma_antisymmetry", float(_norm(rep.sigmas + rep.sigmas.transpose(1, 0, 2, 3)).max())),
    ]
    max_residual = max(residual for _, residual in breakdown)
    if span_word_length is None:
        span_dimension = saturated_span_dimension(rep)
    else:
        span_dimension = algebra_span_dimension(rep, span_word_length)

    report = AlgebraReport(
        max_residual=max_residual,
        identity_breakdown=breakdown,
        span_dimension=span_dimension,
        tolerance=tol,
        passed=max_residual <= tol,
    )
    if not report.passed:
        logger.warning(f"Algebra verification failed at tolerance {tol:.1e}: {report.failing()}")
    return report


def sigma(rep: BetaRep, mu: int, nu: int) -> np.ndarray:
    """
    Return the Lorentz generator sigma_{mu nu} = [beta_mu, beta_nu].

    Raises:
        IndexOutOfRangeError: If mu or nu is outside {0, 1, 2, 3}.
    """
    for index in (mu, nu):
        if not isinstance(index, (int, np.integer)) or not 0 <= index <= 3:
            raise IndexOutOfRangeError(f"spacetime index {index} is outside 0..3")
    return rep.sigmas[mu, nu]


def _span_basis(candidates: np.ndarray, threshold: float) -> np.ndarray:
    """Orthonormal rows spanning the candidates, dropping singular values below threshold * largest."""
    _, singular_values, vh = svd(candidates, full_matrices=False)
    if singular_values[0] == 0:
        return vh[:0]
    rank = int(np.count_nonzero(singular_values > threshold * singular_values[0]))
    return vh[:rank]


def _span_dimensions(rep: BetaRep, max_word_length: int, threshold: float, stop_when_saturated: bool) -> list[int]:
    size = rep.dimension
    identity = np.eye(size, dtype=complex).reshape(1, -1)
    basis = identity
    dimensions = []
    for _ in range(max_word_length):
        # span of words of length <= L+1 is span{1} + beta_mu * span(words of length <= L)
        words = np.einsum("mab,kbc->mkac", rep.beta, basis.reshape(-1, size, size)).reshape(-1, size * size)
        basis = _span_basis(np.vstack([identity, words]), threshold)
        dimensions.append(basis.shape[0])
        if stop_when_saturated and len(dimensions) > 1 and dimensions[-1] == dimensions[-2]:
            break
    return dimensions


def algebra_span_dimension(rep: BetaRep, max_word_length: int, threshold: float = Config.RANK_THRESHOLD) -> int:
    """
    Dimension of the linear span of all beta-matrix products of length <= max_word_length, identity included.

    Args:
        rep (BetaRep): The representation.
        max_word_length (int): Longest word considered, at least 1.
        threshold (float): Relative singular-value cutoff for the numerical rank.

    Returns:
        int: The span dimension, at most n^2.

    Raises:
        ValueError: If max_word_length < 1.
    """
    if max_word_length < 1:
        raise ValueError("max_word_length must be a positive integer")
    return _span_dimensions(rep, max_word_length, threshold, stop_when_saturated=True)[-1]


def saturated_span_dimension(rep: BetaRep, threshold: float = Config.RANK_THRESHOLD) -> int:
    """Grow the word length until the span stops growing and return its dimension."""
    dimensions = _span_dimensions(rep, Config.MAX_WORD_LENGTH, threshold, stop_when_saturated=True)
    if len(dimensions) > 1 and dimensions[-1] != dimensions[-2]:
        logger.warning(f"Span still growing at word length {Config.MAX_WORD_LENGTH}: {dimensions}")
    return dimensions[-1]


def first_order_residual(rep: BetaRep, derivatives: np.ndarray, psi: np.ndarray, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> np.ndarray:
    """
    Left-hand side of beta_mu d^mu psi - (i/l0) gamma psi at a point.

    Args:
        rep (BetaRep): The representation.
        derivatives (np.ndarray): d psi / d x^mu for mu = 0..3 with x^0 = ct, shape (4, n).
        psi (np.ndarray): The wavefunction at the point, shape (n,).
        fundamental_length (float): l0.

    Returns:
        np.ndarray: The residual vector; zero for solutions of the free Maxwell equations.
    """
    contravariant = np.einsum("mn,n...->m...", rep.metric, np.asarray(derivatives, dtype=complex))
    return np.einsum("mab,mb->a", rep.beta, contravariant) - 1j / fundamental_length * rep.gamma @ psi
