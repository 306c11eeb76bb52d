from enum import Enum
from pathlib import Path
from typing import Optional
from pydantic import BaseModel, Field, field_validator, model_validator


class AlgebraReport(BaseModel):
    """
    Residuals of every identity checked on a beta-matrix representation.

    Attributes:
        max_residual (float): Largest Frobenius-norm violation over all checked identities.
        identity_breakdown (list[tuple[str, float]]): One (identity name, residual) pair per identity family.
        span_dimension (int): Dimension of the linear span of beta-matrix words, 0 when not computed.
        tolerance (float): The tolerance the report was judged against.
        passed (bool): True when max_residual <= tolerance.
    """

    max_residual: float = Field(ge=0)
    identity_breakdown: list[tuple[str, float]]
    span_dimension: int = Field(ge=0, default=0)
    tolerance: float = Field(ge=0)
    passed: bool

    @model_validator(mode="after")
    def validate_max_residual(self):
        """
        Validates that max_residual is the maximum of the breakdown residuals.

        Raises:
            ValueError: If max_residual disagrees with the breakdown.
        """
        if self.identity_breakdown:
            largest = max(residual for _, residual in self.identity_breakdown)
            if largest != self.max_residual:
                raise ValueError("max_residual must equal the maximum breakdown residual")
        return self

    def failing(self) -> list[tuple[str, float]]:
        """Return the identities whose residual exceeds the tolerance."""
        return [(name, residual) for name, residual in self.identity_breakdown if residual > self.tolerance]

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"AlgebraReport({status}, max_residual={self.max_residual:.3e}, span_dimension={self.span_dimension})"


class ConstraintReport(BaseModel):
    """
    Constraint residual norms of a lattice state at one instant.

    Residuals are L2 norms over the grid (sum of squared site values times the cell volume).
    The curl-A and full residuals are None when potentials are not tracked.

    Attributes:
        div_E_residual (float): L2 norm of div E.
        curl_A_residual (Optional[float]): L2 norm of H - curl A.
        full_constraint_residual (Optional[float]): L2 norm of the matrix-form constraint left-hand side.
        time (float): Lattice time of the state.
    """

    div_E_residual: float = Field(ge=0)
    curl_A_residual: Optional[float] = Field(default=None, ge=0)
    full_constraint_residual: Optional[float] = Field(default=None, ge=0)
    time: float

    def __str__(self) -> str:
        curl_a = "n/a" if self.curl_A_residual is None else f"{self.curl_A_residual:.3e}"
        return f"ConstraintReport(t={self.time:.6g}, div_E={self.div_E_residual:.3e}, curl_A={curl_a})"


class BellSettings(BaseModel):
    """
    Analyzer angles of a Bell test, in radians.

    One observer chooses between alpha and gamma_angle, the other between beta and gamma_angle.
    """

    alpha: float
    beta: float
    gamma_angle: float


class Command(str, Enum):
    VERIFY = "verify"
    EVOLVE = "evolve"
    TRANSFORM = "transform"
    BELL = "bell"
    OBSERVABLES = "observables"


class RunManifest(BaseModel):
    """
    Echo of a CLI run written next to its outputs.

    Attributes:
        command (Command): The subcommand that produced the outputs.
        config_path (Optional[Path]): Run configuration or input file, if any.
        config_hash (str): SHA-256 of the configuration file or of the canonical argument string.
        output_dir (Path): Directory holding every output of the run.
        seed (int): Seed for randomized sweeps.
        versions (dict[str, str]): Versions of the package and its numerical stack.
    """

    command: Command
    config_path: Optional[Path] = None
    config_hash: str = Field(min_length=64, max_length=64)
    output_dir: Path
    seed: int = Field(ge=0)
    versions: dict[str, str] = Field(default_factory=dict)

    @field_validator("config_hash")
    def validate_config_hash(cls, value):
        """
        Validates that the hash is a lowercase hex SHA-256 digest.

        Raises:
            ValueError: If the value contains non-hex characters.
        """
        if any(char not in "0123456789abcdef" for char in value):
            raise ValueError("config_hash must be a lowercase hex SHA-256 digest")
        return value
