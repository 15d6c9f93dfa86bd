"""Phase encoding of gray values and of the derivative filter masks.

Gray values c in [0, 255] map linearly to angles theta = c * pi / 255 and
then to unit phases exp(i * theta).  Filter masks are binary images encoded
the same way: black pixels carry angle 0, white pixels angle pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import GRAY_MAX, Direction


def gray_to_angle(values) -> np.ndarray:
    """Element-wise linear map c -> c * pi / 255 onto [0, pi]."""
    arr = np.asarray(values, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr > GRAY_MAX):
        raise ValueError("gray values must lie in [0, 255]")
    return arr * (math.pi / GRAY_MAX)


def angles_to_phases(angles) -> np.ndarray:
    """Element-wise exp(i * theta); results have unit modulus."""
    return np.exp(1j * np.asarray(angles, dtype=np.float64))


@dataclass(frozen=True)
class FilterMask:
    """Binary filter mask given as weight angles in raster order."""

    name: str
    angles: tuple[float, ...]
    direction: Direction


def mask_1d(direction: Direction) -> FilterMask:
    """Two-pixel derivative mask: black first pixel (0), white second (pi)."""
    return FilterMask(f"1d-{direction.short_name}", (0.0, math.pi), direction)


def mask_2d(direction: Direction) -> FilterMask:
    """2x2 derivative mask vectorized in raster order.

    Horizontal: black top row over white bottom row, (0, 0, pi, pi).
    Vertical: black left column next to white right column, (0, pi, 0, pi).
    Either orientation flip changes the encoded state by a global phase
    only, so outcome probabilities do not depend on it.
    """
    if direction is Direction.HORIZONTAL:
        return FilterMask("2d-h", (0.0, 0.0, math.pi, math.pi), direction)
    if direction is Direction.VERTICAL:
        return FilterMask("2d-v", (0.0, math.pi, 0.0, math.pi), direction)
    raise ValueError("2-D masks exist for horizontal and vertical only")
