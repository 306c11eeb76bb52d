import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from src.shared.conf import Config
from src.algebra.representation import DIMENSION
from src.fields.exceptions import FieldShapeError
from src.fields.wavefunction import FieldVector, EMFields, pack_components, unpack_components, energy_density


class FieldGrid(BaseModel):
    """
    A periodic cubic lattice of 10-component wavefunctions.

    The grid is immutable; evolution produces new grids. Index arithmetic wraps
    modulo the shape in every axis.

    Attributes:
        shape (tuple[int, int, int]): Sites per axis (Nx, Ny, Nz).
        spacing (float): Lattice spacing dx, equal in all axes.
        data (np.ndarray): psi per site, complex array of shape (Nx, Ny, Nz, 10).
        time (float): Lattice time.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    shape: tuple[int, int, int]
    spacing: float = Field(gt=0)
    data: np.ndarray
    time: float = 0.0

    @field_validator("shape")
    def validate_shape(cls, value):
        if any(n < 1 for n in value):
            raise FieldShapeError(f"grid shape must be positive, got {value}")
        return tuple(int(n) for n in value)

    @field_validator("data", mode="before")
    def validate_data(cls, value):
        array = np.array(value, dtype=complex, copy=True)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def validate_data_shape(self):
        expected = (*self.shape, DIMENSION)
        if self.data.shape != expected:
            raise FieldShapeError(f"data must have shape {expected}, got {self.data.shape}")
        return self

    @classmethod
    def zeros(cls, shape: tuple[int, int, int], spacing: float, time: float = 0.0) -> "FieldGrid":
        return cls(shape=shape, spacing=spacing, data=np.zeros((*shape, DIMENSION), dtype=complex), time=time)

    @classmethod
    def from_fields(cls, E, H, A, A0, spacing: float, time: float = 0.0, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> "FieldGrid":
        """
        Pack per-site physical fields into a grid.

        Args:
            E, H, A: Arrays of shape (Nx, Ny, Nz, 3).
            A0: Array of shape (Nx, Ny, Nz).
            spacing (float): Lattice spacing.
            time (float): Lattice time.
            fundamental_length (float): l0 used for packing.
        """
        data = pack_components(E, H, A, A0, fundamental_length)
        return cls(shape=data.shape[:3], spacing=spacing, data=data, time=time)

    def fields(self, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Unpack every site into (E, H, A, A0) arrays."""
        return unpack_components(self.data, fundamental_length)

    def coordinates(self) -> np.ndarray:
        """Site positions, shape (Nx, Ny, Nz, 3), with site (i, j, k) at (i, j, k) * dx."""
        axes = [np.arange(n) * self.spacing for n in self.shape]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    @property
    def box_lengths(self) -> np.ndarray:
        return np.array(self.shape) * self.spacing

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    def total_energy(self) -> float:
        """Grid sum of energy_density times dx^3."""
        return float(np.sum(energy_density(self.data)) * self.cell_volume)

    def site(self, i: int, j: int, k: int) -> FieldVector:
        """Wavefunction at a site; indices wrap periodically."""
        nx, ny, nz = self.shape
        return FieldVector(psi=self.data[i % nx, j % ny, k % nz])

    def site_fields(self, i: int, j: int, k: int, fundamental_length: float = Config.FUNDAMENTAL_LENGTH) -> EMFields:
        E, H, A, A0 = unpack_components(self.site(i, j, k).psi, fundamental_length)
        return EMFields(E=E, H=H, A=A, A0=complex(A0))

    def with_data(self, data: np.ndarray, time: float | None = None) -> "FieldGrid":
        """New grid on the same lattice holding data, at time (default unchanged)."""
        return FieldGrid(shape=self.shape, spacing=self.spacing, data=data, time=self.time if time is None else time)

    def __str__(self) -> str:
        return f"FieldGrid(shape={self.shape}, dx={self.spacing:.4g}, t={self.time:.6g})"
