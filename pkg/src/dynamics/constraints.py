"""Constraint monitoring for lattice states.

The constraint part of the first-order equation,

    beta_i beta_0^2 d^i psi - (i/l0) (1 - beta_0^2) gamma psi = 0,

lives on rows 3, 4, 5 and 9 of the wavefunction. With d^i = -d/dx^i it maps onto the
physical residuals as

    H - curl A = i l0 sqrt2 r[3:6]        div E = i sqrt2 r[9]

and both forms are computed and cross-checked on every call.
"""

import logging
from typing import Sequence
import numpy as np
from src.shared.conf import Config
from src.shared.schema import ConstraintReport
from src.algebra.representation import BetaRep
from src.algebra.exceptions import RepresentationError
from src.fields.grid import FieldGrid
from src.fields.wavefunction import project_gamma
from src.dynamics.conf import EvolutionConfig
from src.dynamics.exceptions import ShapeMismatchError
from src.dynamics import stencil

logger = logging.getLogger("DYNAMICS_CONSTRAINTS")

SQRT2 = np.sqrt(2.0)


def lattice_derivatives(data: np.ndarray, dx: float, order: int) -> np.ndarray:
    """d psi / dx^i along the three lattice axes, shape (Nx, Ny, Nz, 3, 10)."""
    return np.stack([stencil.derivative(data, axis, dx, order) for axis in range(3)], axis=-2)


def matrix_constraint(rep: BetaRep, data: np.ndarray, dx: float, order: int, fundamental_length: float) -> np.ndarray:
    """
    Per-site left-hand side of the constraint equation in matrix form, shape (Nx, Ny, Nz, 10).
    """
    beta0_squared = rep.beta[0] @ rep.beta[0]
    spatial = np.einsum("iab,bc->iac", rep.beta[1:], beta0_squared)
    derivatives = lattice_derivatives(data, dx, order)
    # contravariant derivative d^i = -d/dx^i
    derivative_part = -np.einsum("iab,...ib->...a", spatial, derivatives)
    mass_part = (np.eye(rep.dimension) - beta0_squared) @ rep.gamma
    return derivative_part - 1j / fundamental_length * np.einsum("ab,...b->...a", mass_part, data)


def physical_from_matrix(residual: np.ndarray, fundamental_length: float) -> tuple[np.ndarray, np.ndarray]:
    """Map the matrix-form residual to (H - curl A, div E)."""
    return 1j * fundamental_length * SQRT2 * residual[..., 3:6], 1j * SQRT2 * residual[..., 9]


def constraint_residual(
    rep: BetaRep,
    grid: FieldGrid,
    stencil_order: int = 4,
    track_potentials: bool = True,
    fundamental_length: float = Config.FUNDAMENTAL_LENGTH,
) -> ConstraintReport:
    """
    Measure the constraint residuals of a lattice state.

    Args:
        rep (BetaRep): The representation.
        grid (FieldGrid): The state.
        stencil_order (int): Order of the central differences.
        track_potentials (bool): When False only div E is reported. H - curl A and the matrix-form
            residual are then None.
        fundamental_length (float): l0 of the packing convention.

    Returns:
        ConstraintReport: L2 norms of div E, H - curl A and the matrix-form residual. The last two are None
        when potentials are not tracked.

    Raises:
        RepresentationError: If the matrix form and the physical form disagree.
    """
    dx = grid.spacing
    E, H, A, _ = grid.fields(fundamental_length)
    div_e = stencil.div(E, dx, stencil_order)
    if not track_potentials:
        return ConstraintReport(div_E_residual=stencil.l2_norm(div_e, dx), time=grid.time)

    h_minus_curl_a = H - stencil.curl(A, dx, stencil_order)
    residual = matrix_constraint(rep, grid.data, dx, stencil_order, fundamental_length)
    mapped_curl, mapped_div = physical_from_matrix(residual, fundamental_length)
    scale = 1.0 + float(np.max(np.abs(grid.data), initial=0.0)) / dx
    if not (np.allclose(mapped_curl, h_minus_curl_a, rtol=0, atol=1e-10 * scale * fundamental_length) and np.allclose(mapped_div, div_e, rtol=0, atol=1e-10 * scale)):
        logger.error("Matrix-form constraint disagrees with div E and H - curl A")
        raise RepresentationError("Matrix-form constraint does not map onto the physical constraints")

    return ConstraintReport(
        div_E_residual=stencil.l2_norm(div_e, dx),
        curl_A_residual=stencil.l2_norm(h_minus_curl_a, dx),
        full_constraint_residual=stencil.l2_norm(residual, dx),
        time=grid.time,
    )


def dalembert_residual(grid_history: Sequence[FieldGrid], cfg: EvolutionConfig) -> float:
    """
    L2 norm of a finite-difference estimate of box(gamma psi) at the middle of three consecutive states.

    Args:
        grid_history (Sequence[FieldGrid]): States at t - dt, t, t + dt.
        cfg (EvolutionConfig): Supplies dt, c and the stencil order.

    Raises:
        ShapeMismatchError: If there are not exactly three grids on one lattice.
    """
    if len(grid_history) != 3:
        raise ShapeMismatchError(f"expected three consecutive grids, got {len(grid_history)}")
    previous, current, following = grid_history
    for grid in (previous, following):
        if grid.shape != current.shape or grid.spacing != current.spacing:
            raise ShapeMismatchError(f"{grid} does not share the lattice of {current}")
    if not np.isclose(following.time - current.time, cfg.dt) or not np.isclose(current.time - previous.time, cfg.dt):
        logger.warning(f"Grid times {previous.time}, {current.time}, {following.time} are not spaced by dt = {cfg.dt}")

    before, middle, after = (project_gamma(grid.data) for grid in grid_history)
    time_part = (after - 2.0 * middle + before) / (cfg.c * cfg.dt) ** 2
    space_part = stencil.laplacian(middle, current.spacing, cfg.stencil_order)
    return stencil.l2_norm(time_part - space_part, current.spacing)
