import os
import logging
from pathlib import Path
from typing import Literal, Optional
from dotenv import load_dotenv, dotenv_values
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from src.shared.conf import Config as SharedConfig
from src.dynamics.exceptions import CFLViolationError, RunConfigError


load_dotenv(override=True)
logger = logging.getLogger("CONFIG_DYNAMICS")


class Config:
    """Evolution defaults."""

    CFL_LIMIT_ORDER_2 = float(os.getenv("DYNAMICS_CFL_LIMIT_ORDER_2", "0.5"))
    CFL_LIMIT_ORDER_4 = float(os.getenv("DYNAMICS_CFL_LIMIT_ORDER_4", "0.4"))
    RECORD_EVERY = int(os.getenv("DYNAMICS_RECORD_EVERY", "1"))

    @classmethod
    def cfl_limit(cls, stencil_order: int) -> float:
        return cls.CFL_LIMIT_ORDER_2 if stencil_order == 2 else cls.CFL_LIMIT_ORDER_4

    @classmethod
    def validate(cls):
        """Validate the evolution defaults."""
        if cls.CFL_LIMIT_ORDER_2 <= 0 or cls.CFL_LIMIT_ORDER_4 <= 0:
            logger.error("DYNAMICS_CFL_LIMIT_ORDER_2 and DYNAMICS_CFL_LIMIT_ORDER_4 must be positive")
            return False
        if cls.RECORD_EVERY < 1:
            logger.error("DYNAMICS_RECORD_EVERY must be a positive integer")
            return False

        logger.info("Configuration validated successfully")
        return True


Config.validate()


class EvolutionConfig(BaseModel):
    """
    Parameters of a lattice evolution.

    Construction fails with CFLViolationError when c * dt / dx exceeds cfl_limit.

    Attributes:
        dt (float): Time step.
        steps (int): Number of steps; 0 returns the input state.
        dx (float): Lattice spacing the configuration is checked against.
        c (float): Wave speed.
        stencil_order (int): Central-difference order, 2 or 4.
        cfl_limit (float): Largest admissible c * dt / dx; defaults per stencil order.
        track_potentials (bool): Evolve the four potential components; frozen otherwise.
        record_every (int): Steps between recorded constraint reports and observables.
        fundamental_length (float): l0 of the packing convention.
    """

    dt: float = Field(gt=0)
    steps: int = Field(ge=0)
    dx: float = Field(gt=0)
    c: float = Field(gt=0, default=SharedConfig.SPEED_OF_LIGHT)
    stencil_order: Literal[2, 4] = 4
    cfl_limit: float = Field(gt=0, default=None)
    track_potentials: bool = True
    record_every: int = Field(ge=1, default=Config.RECORD_EVERY)
    fundamental_length: float = Field(gt=0, default=SharedConfig.FUNDAMENTAL_LENGTH)

    @model_validator(mode="before")
    def fill_cfl_limit(cls, values):
        if isinstance(values, dict) and values.get("cfl_limit") is None:
            values = {**values, "cfl_limit": Config.cfl_limit(int(values.get("stencil_order", 4)))}
        return values

    @model_validator(mode="after")
    def validate_cfl(self):
        """
        Raises:
            CFLViolationError: If the Courant number exceeds the limit.
        """
        if self.courant_number > self.cfl_limit:
            logger.error(f"Courant number {self.courant_number:.4g} exceeds CFL limit {self.cfl_limit:.4g}")
            raise CFLViolationError(f"c*dt/dx = {self.courant_number:.4g} exceeds the CFL limit {self.cfl_limit:.4g}")
        return self

    @property
    def courant_number(self) -> float:
        return self.c * self.dt / self.dx


def _triple(value, cast):
    if isinstance(value, str):
        value = [part for part in value.replace(" ", "").split(",") if part]
    value = tuple(cast(part) for part in value)
    if len(value) != 3:
        raise ValueError(f"expected three comma-separated values, got {value}")
    return value


class RunConfig(BaseModel):
    """
    Contents of a run configuration file.

    The file is plain text with one `key = value` per line and `#` comments, for example

        shape = 1,1,64
        dx = 0.015625
        dt = 0.00390625
        steps = 256
        stencil_order = 4
        initial = plane_wave
        mode = 0,0,1
        polarization = 1,0,0

    Relative paths are resolved against the directory of the configuration file.
    """

    shape: tuple[int, int, int]
    dx: float = Field(gt=0)
    dt: float = Field(gt=0)
    steps: int = Field(ge=0)
    stencil_order: Literal[2, 4] = 4
    c: float = Field(gt=0, default=SharedConfig.SPEED_OF_LIGHT)
    cfl_limit: Optional[float] = Field(gt=0, default=None)
    track_potentials: bool = True
    snapshot_every: int = Field(ge=0, default=0)
    record_every: int = Field(ge=1, default=Config.RECORD_EVERY)
    output_dir: Optional[Path] = None
    initial: Literal["plane_wave", "snapshot"] = "plane_wave"
    mode: tuple[int, int, int] = (0, 0, 1)
    polarization: tuple[float, float, float] = (1.0, 0.0, 0.0)
    amplitude: float = 1.0
    snapshot_path: Optional[Path] = None
    base_dir: Path = Path(".")

    @field_validator("shape", "mode", mode="before")
    def validate_integer_triple(cls, value):
        return _triple(value, int)

    @field_validator("polarization", mode="before")
    def validate_float_triple(cls, value):
        return _triple(value, float)

    @field_validator("stencil_order", mode="before")
    def validate_stencil_order(cls, value):
        return int(value) if isinstance(value, str) else value

    @field_validator("shape")
    def validate_shape(cls, value):
        if any(n < 1 for n in value):
            raise ValueError(f"shape must be positive, got {value}")
        return value

    @model_validator(mode="after")
    def validate_initial_source(self):
        if self.initial == "snapshot" and self.snapshot_path is None:
            raise ValueError("initial = snapshot requires snapshot_path")
        return self

    def resolve(self, path: Path) -> Path:
        return path if path.is_absolute() else self.base_dir / path

    def evolution_config(self) -> EvolutionConfig:
        """
        Raises:
            CFLViolationError: If dt is too large for dx.
        """
        return EvolutionConfig(
            dt=self.dt,
            steps=self.steps,
            dx=self.dx,
            c=self.c,
            stencil_order=self.stencil_order,
            cfl_limit=self.cfl_limit,
            track_potentials=self.track_potentials,
            record_every=self.record_every,
        )


def load_run_config(path: Path | str) -> RunConfig:
    """
    Parse a run configuration file.

    Raises:
        RunConfigError: If the file is missing, has unknown keys or invalid values.
    """
    path = Path(path)
    if not path.is_file():
        raise RunConfigError(f"Run configuration {path} does not exist")
    values = {key.strip().lower(): value for key, value in dotenv_values(path).items() if value is not None}
    unknown = set(values) - (set(RunConfig.model_fields) - {"base_dir"})
    if unknown:
        raise RunConfigError(f"Unknown keys in {path}: {sorted(unknown)}")
    try:
        run_config = RunConfig(**values, base_dir=path.resolve().parent)
    except ValidationError as e:
        logger.error(f"Invalid run configuration {path}: {e}")
        raise RunConfigError(f"Invalid run configuration {path}: {e}") from e
    logger.info(f"Run configuration loaded from {path}")
    return run_config
