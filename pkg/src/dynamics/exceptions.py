class CFLViolationError(Exception):
    """
    Exception raised when c * dt / dx exceeds the configured CFL limit.
    """


class InstabilityError(Exception):
    """
    Exception raised when an evolution step produces non-finite values.
    """


class ShapeMismatchError(Exception):
    """
    Exception raised when grids that must share a lattice do not.
    """


class PeriodicityError(Exception):
    """
    Exception raised when a wavevector does not fit an integer number of wavelengths in the box.
    """


class TransverseError(Exception):
    """
    Exception raised when a plane-wave polarization is not a unit vector perpendicular to the wavevector.
    """


class RunConfigError(Exception):
    """
    Exception raised when a run configuration file is missing or malformed.
    """
