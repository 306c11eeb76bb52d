import hashlib
import logging
from importlib import metadata
from pathlib import Path
from typing import Optional
import numpy as np
import scipy
from src.shared.schema import Command, RunManifest

logger = logging.getLogger("CLI_MANIFEST")

MANIFEST_NAME = "manifest.json"
PACKAGE_NAME = "kdp-electrodynamics"


def package_versions() -> dict[str, str]:
    try:
        package = metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        package = "unknown"
    return {PACKAGE_NAME: package, "numpy": np.__version__, "scipy": scipy.__version__}


def config_hash(config_path: Optional[Path], arguments: str) -> str:
    """SHA-256 of the configuration file contents followed by the canonical argument string."""
    digest = hashlib.sha256()
    if config_path is not None:
        digest.update(Path(config_path).read_bytes())
    digest.update(arguments.encode("utf-8"))
    return digest.hexdigest()


def write_manifest(command: Command, output_dir: Path, seed: int, arguments: str, config_path: Optional[Path] = None) -> Path:
    """
    Write manifest.json into output_dir, creating the directory first.

    Returns:
        Path: The manifest file.
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        command=command,
        config_path=config_path,
        config_hash=config_hash(config_path, arguments),
        output_dir=output_dir,
        seed=seed,
        versions=package_versions(),
    )
    target = output_dir / MANIFEST_NAME
    target.write_text(manifest.model_dump_json(indent=2) + "\n")
    logger.debug(f"Manifest written to {target}")
    return target
