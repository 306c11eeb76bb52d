"""Periodic central-difference operators on lattice arrays.

Arrays carry the three lattice axes first, shape (Nx, Ny, Nz, ...). Axes of
length one have vanishing derivatives.
"""

import numpy as np

SUPPORTED_ORDERS = (2, 4)


def _check_order(order: int):
    if order not in SUPPORTED_ORDERS:
        raise ValueError(f"stencil order must be one of {SUPPORTED_ORDERS}, got {order}")


def _shift(f: np.ndarray, offset: int, axis: int) -> np.ndarray:
    """f at index + offset along axis."""
    return np.roll(f, -offset, axis=axis)


def derivative(f: np.ndarray, axis: int, dx: float, order: int = 4) -> np.ndarray:
    """
    Central first derivative along a lattice axis.

    Args:
        f (np.ndarray): Lattice array.
        axis (int): 0, 1 or 2.
        dx (float): Lattice spacing.
        order (int): 2 or 4.
    """
    _check_order(order)
    if order == 2:
        return (_shift(f, 1, axis) - _shift(f, -1, axis)) / (2.0 * dx)
    return (-_shift(f, 2, axis) + 8.0 * _shift(f, 1, axis) - 8.0 * _shift(f, -1, axis) + _shift(f, -2, axis)) / (12.0 * dx)


def second_derivative(f: np.ndarray, axis: int, dx: float, order: int = 4) -> np.ndarray:
    """Compact central second derivative along a lattice axis."""
    _check_order(order)
    if order == 2:
        return (_shift(f, 1, axis) - 2.0 * f + _shift(f, -1, axis)) / dx**2
    return (-_shift(f, 2, axis) + 16.0 * _shift(f, 1, axis) - 30.0 * f + 16.0 * _shift(f, -1, axis) - _shift(f, -2, axis)) / (12.0 * dx**2)


def gradient(f: np.ndarray, dx: float, order: int = 4) -> np.ndarray:
    """Stacked derivatives along the three lattice axes, new last axis of length 3."""
    return np.stack([derivative(f, axis, dx, order) for axis in range(3)], axis=-1)


def laplacian(f: np.ndarray, dx: float, order: int = 4) -> np.ndarray:
    return sum(second_derivative(f, axis, dx, order) for axis in range(3))


def div(v: np.ndarray, dx: float, order: int = 4) -> np.ndarray:
    """Divergence of a vector field of shape (Nx, Ny, Nz, 3)."""
    return sum(derivative(v[..., axis], axis, dx, order) for axis in range(3))


def curl(v: np.ndarray, dx: float, order: int = 4) -> np.ndarray:
    """Curl of a vector field of shape (Nx, Ny, Nz, 3)."""
    def d(component, axis):
        return derivative(v[..., component], axis, dx, order)

    return np.stack(
        [
            d(2, 1) - d(1, 2),
            d(0, 2) - d(2, 0),
            d(1, 0) - d(0, 1),
        ],
        axis=-1,
    )


def l2_norm(f: np.ndarray, dx: float) -> float:
    """Grid L2 norm: sqrt of the sum of |f|^2 over all sites and components times dx^3."""
    return float(np.sqrt(np.sum(np.abs(f) ** 2) * dx**3))
