"""Deterministic test images.

``binary_sample`` is a 30x30 black/white pattern of axis-aligned
rectangular objects: three small rectangles plus a grid of isolated
single-pixel dots.  Objects keep a two-pixel gap from each other and a
one-pixel gap from the border, so every 2x2 window sees at most one
object and each object's top-left outside corner pixel (the one only the
diagonal pair direction can detect) is unambiguous.

``gray_sample`` is a 30x30 gray value image with sharp multi-level edges;
``house_image`` is a synthetic 256x256 house scene with diagonal roof
edges for large-scale runs.
"""

from __future__ import annotations

import numpy as np

from .image import GrayImage

_RECTS = [
    (4, 4, 5, 5),
    (20, 5, 22, 6),
    (6, 20, 7, 22),
]

# dot grid: every third pixel, skipping cells whose 1-pixel neighborhood
# would touch a rectangle's neighborhood
_DOT_GRID = range(3, 28, 3)
_DOT_EXCLUDE = {
    (3, 3), (6, 3), (3, 6), (6, 6),
    (18, 3), (21, 3), (24, 3), (18, 6), (21, 6), (24, 6),
    (6, 18), (6, 21), (6, 24), (9, 18), (9, 21), (9, 24),
}


def binary_sample_objects() -> list[tuple[int, int, int, int]]:
    """All white objects as (x0, y0, x1, y1) inclusive bounding boxes."""
    objects = list(_RECTS)
    for y in _DOT_GRID:
        for x in _DOT_GRID:
            if (x, y) not in _DOT_EXCLUDE:
                objects.append((x, y, x, y))
    return objects


def binary_sample() -> GrayImage:
    """30x30 binary pattern: rectangles and isolated dots, white on black."""
    data = np.zeros((30, 30), dtype=np.uint8)
    for x0, y0, x1, y1 in binary_sample_objects():
        data[y0 : y1 + 1, x0 : x1 + 1] = 255
    return GrayImage(data)


def gray_sample() -> GrayImage:
    """30x30 gray value image with sharp edges between flat regions.

    Levels are {0, 23, 232, 255} and adjacent regions always differ by 23,
    232, or 255.  The extreme contrasts give noise-free responses, and the
    others sit on the 50-shot estimate lattice and away from gray-bin
    boundaries, so sampled histograms stay close to the reference even at
    low shot counts.
    """
    data = np.zeros((30, 30), dtype=np.uint8)
    data[5:14, 4:15] = 255  # block with an inset window
    data[8:12, 7:11] = 23
    data[4:10, 19:25] = 232  # mid-gray block on background
    data[16:28, 4:26] = 255  # wide block with two holes
    data[19:25, 8:13] = 0
    data[20:26, 17:22] = 0
    return GrayImage(data)


def house_image() -> GrayImage:
    """256x256 synthetic house scene: flat regions, sharp and diagonal edges."""
    data = np.full((256, 256), 210, dtype=np.uint8)
    data[150:, :] = 100  # ground
    data[110:201, 60:196] = 160  # house body
    for y in range(40, 110):  # roof triangle, apex at (128, 40)
        w = (y - 40) * 78 // 70
        data[y, 128 - w : 128 + w + 1] = 70
    data[55:86, 160:176] = 120  # chimney
    data[150:201, 115:141] = 50  # door
    data[130:156, 75:101] = 230  # windows
    data[130:156, 155:181] = 230
    return GrayImage(data)
