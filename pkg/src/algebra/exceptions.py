class RepresentationError(Exception):
    """
    Exception raised when a beta-matrix representation fails its algebra checks.
    """


class IndexOutOfRangeError(Exception):
    """
    Exception raised when a spacetime index lies outside {0, 1, 2, 3}.
    """
