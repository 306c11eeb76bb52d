class InvalidAxisError(Exception):
    """
    Exception raised when a rotation axis or boost direction is not a unit 3-vector.
    """
