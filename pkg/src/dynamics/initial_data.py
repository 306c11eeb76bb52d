import logging
import numpy as np
from src.shared.conf import Config
from src.fields.grid import FieldGrid
from src.fields.repository import SnapshotRepository
from src.dynamics.conf import RunConfig
from src.dynamics.exceptions import PeriodicityError, TransverseError, ShapeMismatchError
from src.dynamics import stencil

logger = logging.getLogger("DYNAMICS_INITIAL_DATA")

PERIODICITY_TOLERANCE = 1e-9
TRANSVERSE_TOLERANCE = 1e-12


def _check_wave(kvec: np.ndarray, polarization: np.ndarray, box_lengths: np.ndarray):
    if not np.any(kvec):
        raise PeriodicityError("the wavevector must be non-zero")
    wavenumbers = kvec * box_lengths / (2.0 * np.pi)
    if not np.allclose(wavenumbers, np.round(wavenumbers), rtol=0, atol=PERIODICITY_TOLERANCE):
        raise PeriodicityError(f"wavevector {kvec} does not fit the box {box_lengths}: {wavenumbers} wavelengths per axis")
    if abs(np.linalg.norm(polarization) - 1.0) > TRANSVERSE_TOLERANCE:
        raise TransverseError(f"polarization {polarization} is not a unit vector")
    if abs(np.dot(polarization, kvec)) > TRANSVERSE_TOLERANCE * np.linalg.norm(kvec):
        raise TransverseError(f"polarization {polarization} is not perpendicular to {kvec}")


def analytic_plane_wave(
    kvec,
    polarization,
    amplitude: float,
    shape: tuple[int, int, int],
    spacing: float,
    time: float = 0.0,
    c: float = Config.SPEED_OF_LIGHT,
    fundamental_length: float = Config.FUNDAMENTAL_LENGTH,
) -> FieldGrid:
    """
    Exact free plane wave at a given time, in Lorenz gauge with A0 = 0.

        E = amplitude pol cos(k.x - w t),  H = k^ x E,  A = (amplitude / |k|) pol sin(k.x - w t),  w = c |k|

    No periodicity or transversality checks are made; see make_plane_wave.
    """
    kvec = np.asarray(kvec, dtype=float)
    polarization = np.asarray(polarization, dtype=float)
    wavenumber = np.linalg.norm(kvec)
    grid = FieldGrid.zeros(shape, spacing, time)
    phase = grid.coordinates() @ kvec - c * wavenumber * time
    E = amplitude * np.cos(phase)[..., None] * polarization
    H = np.cross(kvec / wavenumber, E)
    A = (amplitude / wavenumber) * np.sin(phase)[..., None] * polarization
    return FieldGrid.from_fields(E, H, A, np.zeros(shape), spacing, time, fundamental_length)


def make_plane_wave(
    kvec,
    polarization,
    amplitude: float,
    shape: tuple[int, int, int],
    spacing: float,
    fundamental_length: float = Config.FUNDAMENTAL_LENGTH,
    discrete_consistent: bool = False,
    stencil_order: int = 4,
) -> FieldGrid:
    """
    Plane-wave initial data satisfying div E = 0 and H = curl A analytically.

    Args:
        kvec: Wavevector; every component must fit an integer number of wavelengths in the box.
        polarization: Unit vector perpendicular to kvec.
        amplitude (float): Peak electric field.
        shape (tuple[int, int, int]): Lattice shape.
        spacing (float): Lattice spacing.
        fundamental_length (float): l0 of the packing convention.
        discrete_consistent (bool): Replace H by the lattice curl of A so H - curl A vanishes on the grid.
        stencil_order (int): Stencil used for the lattice curl.

    Returns:
        FieldGrid: The state at t = 0.

    Raises:
        PeriodicityError: If kvec is zero or does not fit the periodic box.
        TransverseError: If polarization is not a unit vector perpendicular to kvec.
    """
    kvec = np.asarray(kvec, dtype=float)
    polarization = np.asarray(polarization, dtype=float)
    _check_wave(kvec, polarization, np.array(shape) * spacing)
    grid = analytic_plane_wave(kvec, polarization, amplitude, shape, spacing, fundamental_length=fundamental_length)
    if not discrete_consistent:
        return grid
    E, _, A, A0 = grid.fields(fundamental_length)
    H = stencil.curl(A, spacing, stencil_order)
    return FieldGrid.from_fields(E, H, A, A0, spacing, fundamental_length=fundamental_length)


def mode_wavevector(mode, shape: tuple[int, int, int], spacing: float) -> np.ndarray:
    """Wavevector with the given integer number of wavelengths per box axis."""
    return 2.0 * np.pi * np.asarray(mode, dtype=float) / (np.array(shape) * spacing)


def build_initial_grid(run_config: RunConfig, repository: SnapshotRepository | None = None) -> FieldGrid:
    """
    Initial state described by a run configuration.

    Raises:
        PeriodicityError, TransverseError: For invalid plane-wave parameters.
        ShapeMismatchError: If a snapshot does not match the configured lattice.
        SnapshotFormatError: If the snapshot file is malformed.
    """
    if run_config.initial == "plane_wave":
        kvec = mode_wavevector(run_config.mode, run_config.shape, run_config.dx)
        logger.info(f"Plane wave with mode {run_config.mode}, polarization {run_config.polarization}")
        return make_plane_wave(kvec, run_config.polarization, run_config.amplitude, run_config.shape, run_config.dx, stencil_order=run_config.stencil_order)

    repository = repository or SnapshotRepository(run_config.base_dir)
    grid = repository.read_snapshot(run_config.resolve(run_config.snapshot_path))
    if grid.shape != run_config.shape or not np.isclose(grid.spacing, run_config.dx):
        raise ShapeMismatchError(f"snapshot {grid} does not match shape {run_config.shape} and dx {run_config.dx}")
    return grid
