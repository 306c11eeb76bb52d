"""Lattice evolution of the 10-component wavefunction.

The field block follows d(gamma psi)/dt = -c beta-tilde_i d^i (gamma psi) with the
contravariant d^i = -d/dx^i, i.e. c * sum_i beta-tilde_i D_i (gamma psi) for the
lattice derivative D_i. The potential block v = psi[6:10] follows

    dv_k/dt = c (-psi_k / l0 + D_k v_3)      (E = -grad A0 - dA/dt / c)
    dv_3/dt = c sum_k D_k v_k                (Lorenz condition)

Time stepping is classical fourth-order Runge-Kutta.
"""

import logging
from typing import Callable, Mapping
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from src.shared.schema import ConstraintReport
from src.algebra.representation import BetaRep, FIELD_SLOTS, POTENTIAL_SLOTS
from src.fields.grid import FieldGrid
from src.dynamics.conf import EvolutionConfig
from src.dynamics.constraints import constraint_residual, lattice_derivatives
from src.dynamics.exceptions import CFLViolationError, InstabilityError

logger = logging.getLogger("DYNAMICS_EVOLUTION")

Observer = Callable[[BetaRep, FieldGrid], float]


class EvolutionResult(BaseModel):
    """
    Outcome of an evolution run.

    Attributes:
        grid (FieldGrid): Final state.
        reports (list[ConstraintReport]): Constraint residuals at every recorded step.
        series (dict[str, list[float]]): Scalar observables at every recorded step; always holds total_energy.
        times (list[float]): Lattice times of the recorded steps.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    grid: FieldGrid
    reports: list[ConstraintReport]
    series: dict[str, list[float]]
    times: list[float] = Field(default_factory=list)

    def energy_drift(self) -> float:
        """Relative change of total energy between the first and last record."""
        energies = self.series["total_energy"]
        if energies[0] == 0:
            return abs(energies[-1])
        return abs(energies[-1] - energies[0]) / abs(energies[0])


def _check_finite(data: np.ndarray, time: float):
    if not np.all(np.isfinite(data)):
        logger.critical(f"Non-finite values at t = {time:.6g}")
        raise InstabilityError(f"evolution state is non-finite at t = {time:.6g}")


class EvolutionService:
    """Advances FieldGrids in time for one representation and configuration."""

    def __init__(self, rep: BetaRep, cfg: EvolutionConfig):
        self.rep = rep
        self.cfg = cfg

    def rate(self, data: np.ndarray, dx: float) -> np.ndarray:
        """Time derivative of the lattice data under the semi-discrete system."""
        cfg = self.cfg
        field = np.zeros_like(data)
        field[..., FIELD_SLOTS] = data[..., FIELD_SLOTS]
        derivatives = lattice_derivatives(field, dx, cfg.stencil_order)
        rate = cfg.c * np.einsum("iab,...ib->...a", self.rep.beta_tilde, derivatives)
        rate[..., POTENTIAL_SLOTS] = 0.0
        if cfg.track_potentials:
            potentials = data[..., POTENTIAL_SLOTS]
            potential_derivatives = lattice_derivatives(potentials, dx, cfg.stencil_order)
            rate[..., 6:9] = cfg.c * (-data[..., 0:3] / cfg.fundamental_length + potential_derivatives[..., 3])
            rate[..., 9] = cfg.c * np.einsum("...kk->...", potential_derivatives[..., 0:3])
        return rate

    def step(self, grid: FieldGrid) -> FieldGrid:
        """
        Advance one time step with RK4.

        Raises:
            CFLViolationError: If the grid spacing makes the configured dt unstable.
            InstabilityError: If the new state holds non-finite values.
        """
        cfg = self.cfg
        dx = grid.spacing
        if cfg.c * cfg.dt / dx > cfg.cfl_limit:
            raise CFLViolationError(f"c*dt/dx = {cfg.c * cfg.dt / dx:.4g} exceeds the CFL limit {cfg.cfl_limit:.4g} on {grid}")
        data, dt = grid.data, cfg.dt
        k1 = self.rate(data, dx)
        k2 = self.rate(data + 0.5 * dt * k1, dx)
        k3 = self.rate(data + 0.5 * dt * k2, dx)
        k4 = self.rate(data + dt * k3, dx)
        updated = data + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check_finite(updated, grid.time + dt)
        return grid.with_data(updated, time=grid.time + dt)

    def _record(self, grid: FieldGrid, reports: list, series: dict, times: list, observers: Mapping[str, Observer]):
        reports.append(constraint_residual(self.rep, grid, self.cfg.stencil_order, self.cfg.track_potentials, self.cfg.fundamental_length))
        series["total_energy"].append(grid.total_energy())
        for name, observer in observers.items():
            series[name].append(float(observer(self.rep, grid)))
        times.append(grid.time)

    def evolve(
        self,
        grid: FieldGrid,
        observers: Mapping[str, Observer] | None = None,
        on_snapshot: Callable[[FieldGrid, int], None] | None = None,
        snapshot_every: int = 0,
    ) -> EvolutionResult:
        """
        Run cfg.steps steps, recording constraints and observables every cfg.record_every steps.

        The initial state is always recorded, and so is the final one.

        Args:
            grid (FieldGrid): Initial state.
            observers (Mapping[str, Observer] | None): Extra scalar observables by name.
            on_snapshot (Callable[[FieldGrid, int], None] | None): Called with (grid, step) at the snapshot cadence.
            snapshot_every (int): Steps between snapshots, 0 for none besides the final state.

        Returns:
            EvolutionResult: Final grid, reports and time series.

        Raises:
            InstabilityError: If the initial state or any later state holds non-finite values.
        """
        observers = dict(observers or {})
        reports: list[ConstraintReport] = []
        series: dict[str, list[float]] = {"total_energy": [], **{name: [] for name in observers}}
        times: list[float] = []
        _check_finite(grid.data, grid.time)
        self._record(grid, reports, series, times, observers)
        if on_snapshot is not None:
            on_snapshot(grid, 0)

        for index in range(1, self.cfg.steps + 1):
            grid = self.step(grid)
            if index % self.cfg.record_every == 0 or index == self.cfg.steps:
                self._record(grid, reports, series, times, observers)
            if on_snapshot is not None and ((snapshot_every and index % snapshot_every == 0) or index == self.cfg.steps):
                on_snapshot(grid, index)

        result = EvolutionResult(grid=grid, reports=reports, series=series, times=times)
        logger.info(f"Evolved {self.cfg.steps} steps to t = {grid.time:.6g}, energy drift {result.energy_drift():.3e}")
        return result


def step(rep: BetaRep, grid: FieldGrid, cfg: EvolutionConfig) -> FieldGrid:
    return EvolutionService(rep, cfg).step(grid)


def evolve(rep: BetaRep, grid: FieldGrid, cfg: EvolutionConfig, observers: Mapping[str, Observer] | None = None) -> EvolutionResult:
    return EvolutionService(rep, cfg).evolve(grid, observers)
