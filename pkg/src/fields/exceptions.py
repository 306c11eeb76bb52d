class FieldShapeError(Exception):
    """
    Exception raised when field data does not have the expected number of components or lattice shape.
    """


class SnapshotFormatError(Exception):
    """
    Exception raised when a grid snapshot file is truncated or carries a wrong header.
    """
