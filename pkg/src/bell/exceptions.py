class NormalizationError(Exception):
    """
    Exception raised when a two-beam state does not have unit norm.
    """


class BasisError(Exception):
    """
    Exception raised when beam polarization states are not orthonormal.
    """
