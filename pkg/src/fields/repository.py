"""Repository for grid snapshots and per-site observable tables on disk.

Snapshot layout (little-endian):
    header  8s magic b"KDPGRID\\0", uint32 version, uint32 Nx, Ny, Nz, float64 dx, float64 time
    body    Nx*Ny*Nz sites with x varying fastest, 10 complex128 values (real, imag) per site
"""

import struct
import logging
from pathlib import Path
import numpy as np
from src.algebra.representation import BetaRep, DIMENSION
from src.fields.exceptions import SnapshotFormatError
from src.fields.grid import FieldGrid
from src.fields.wavefunction import energy_density, poynting

logger = logging.getLogger("FIELDS_REPOSITORY")

SNAPSHOT_MAGIC = b"KDPGRID\0"
SNAPSHOT_VERSION = 1
HEADER = struct.Struct("<8sIIIIdd")
OBSERVABLE_COLUMNS = ("x", "y", "z", "energy_density", "Sx", "Sy", "Sz")


class SnapshotRepository:
    """Reads and writes FieldGrid snapshots and observable CSV files."""

    def __init__(self, directory: Path | str | None = None):
        """
        Args:
            directory (Path | str | None): Base directory for relative paths. Defaults to the working directory.
        """
        self.directory = Path(directory) if directory is not None else Path.cwd()

    def _resolve(self, path: Path | str) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.directory / path

    def write_snapshot(self, grid: FieldGrid, path: Path | str) -> Path:
        """
        Write a grid snapshot.

        Returns:
            Path: The file written.
        """
        target = self._resolve(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        nx, ny, nz = grid.shape
        header = HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, nx, ny, nz, grid.spacing, grid.time)
        # (Nz, Ny, Nx, 10) in C order puts x fastest
        body = np.ascontiguousarray(grid.data.transpose(2, 1, 0, 3), dtype="<c16").tobytes()
        target.write_bytes(header + body)
        logger.debug(f"Snapshot written to {target}: {grid}")
        return target

    def read_snapshot(self, path: Path | str) -> FieldGrid:
        """
        Read a grid snapshot.

        Raises:
            FileNotFoundError: If the file does not exist.
            SnapshotFormatError: If the header is wrong, describes an empty lattice or a non-positive spacing,
                or the body length does not match the shape.
        """
        source = self._resolve(path)
        raw = source.read_bytes()
        if len(raw) < HEADER.size:
            raise SnapshotFormatError(f"{source} is shorter than the snapshot header")
        magic, version, nx, ny, nz, spacing, time = HEADER.unpack_from(raw)
        if magic != SNAPSHOT_MAGIC:
            raise SnapshotFormatError(f"{source} is not a grid snapshot (magic {magic!r})")
        if version != SNAPSHOT_VERSION:
            raise SnapshotFormatError(f"{source} has unsupported snapshot version {version}")
        if min(nx, ny, nz) < 1:
            raise SnapshotFormatError(f"{source} has an empty lattice ({nx}, {ny}, {nz})")
        if not (np.isfinite(spacing) and spacing > 0) or not np.isfinite(time):
            raise SnapshotFormatError(f"{source} has invalid spacing {spacing} or time {time}")
        expected = nx * ny * nz * DIMENSION * 16
        if len(raw) - HEADER.size != expected:
            raise SnapshotFormatError(f"{source} body holds {len(raw) - HEADER.size} bytes, expected {expected}")
        body = np.frombuffer(raw, dtype="<c16", offset=HEADER.size).reshape(nz, ny, nx, DIMENSION)
        logger.debug(f"Snapshot read from {source}")
        return FieldGrid(shape=(nx, ny, nz), spacing=spacing, data=body.transpose(2, 1, 0, 3), time=time)

    def write_observables(self, rep: BetaRep, grid: FieldGrid, path: Path | str, c: float) -> Path:
        """
        Write per-site energy density and Poynting vector as CSV with a header row.

        Rows follow the snapshot site order (x fastest).
        """
        target = self._resolve(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        table = np.concatenate(
            [grid.coordinates(), energy_density(grid.data)[..., None], poynting(rep, grid.data, c)],
            axis=-1,
        )
        rows = table.transpose(2, 1, 0, 3).reshape(-1, len(OBSERVABLE_COLUMNS))
        np.savetxt(target, rows, delimiter=",", header=",".join(OBSERVABLE_COLUMNS), comments="", fmt="%.17g")
        logger.info(f"Observables for {rows.shape[0]} sites written to {target}")
        return target
