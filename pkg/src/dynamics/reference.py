"""Classical curl-equation solver used as the reference for the matrix-form evolution."""

import numpy as np
from src.algebra.representation import FIELD_SLOTS
from src.fields.grid import FieldGrid
from src.dynamics.conf import EvolutionConfig
from src.dynamics.exceptions import ShapeMismatchError
from src.dynamics import stencil


class CurlEquationStepper:
    """
    Evolves (E, H) by dE/dt = c curl H and dH/dt = -c curl E with the same stencil and RK4 as EvolutionService.
    """

    def __init__(self, cfg: EvolutionConfig):
        self.cfg = cfg

    def rate(self, E: np.ndarray, H: np.ndarray, dx: float) -> tuple[np.ndarray, np.ndarray]:
        c, order = self.cfg.c, self.cfg.stencil_order
        return c * stencil.curl(H, dx, order), -c * stencil.curl(E, dx, order)

    def step(self, E: np.ndarray, H: np.ndarray, dx: float) -> tuple[np.ndarray, np.ndarray]:
        dt = self.cfg.dt
        k1 = self.rate(E, H, dx)
        k2 = self.rate(E + 0.5 * dt * k1[0], H + 0.5 * dt * k1[1], dx)
        k3 = self.rate(E + 0.5 * dt * k2[0], H + 0.5 * dt * k2[1], dx)
        k4 = self.rate(E + dt * k3[0], H + dt * k3[1], dx)
        E = E + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        H = H + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        return E, H

    def evolve(self, E: np.ndarray, H: np.ndarray, dx: float, steps: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        for _ in range(self.cfg.steps if steps is None else steps):
            E, H = self.step(E, H, dx)
        return E, H


def l2_error(a: FieldGrid, b: FieldGrid) -> float:
    """
    Grid L2 norm of the difference of the field-strength components of two states.

    Raises:
        ShapeMismatchError: If the grids do not share a lattice.
    """
    if a.shape != b.shape or a.spacing != b.spacing:
        raise ShapeMismatchError(f"{a} and {b} do not share a lattice")
    return stencil.l2_norm(a.data[..., FIELD_SLOTS] - b.data[..., FIELD_SLOTS], a.spacing)
