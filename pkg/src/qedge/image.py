"""Gray value image primitives.

PGM (P2/P5) reading and writing, mirror padding, pair/patch extraction for
the sliding filter window, pixel-wise combination, Otsu binarization, and
histogram helpers.  Images are thin wrappers around row-major numpy arrays
and are treated as immutable once constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

GRAY_MAX = 255


class PgmError(ValueError):
    """Raised for malformed or out-of-contract PGM files."""


class Direction(Enum):
    """Pairing direction of the two-pixel sliding window.

    HORIZONTAL pairs (x, y) with (x+1, y), VERTICAL with (x, y+1),
    DIAGONAL with (x+1, y+1).
    """

    HORIZONTAL = (1, 0)
    VERTICAL = (0, 1)
    DIAGONAL = (1, 1)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    @property
    def short_name(self) -> str:
        return {"HORIZONTAL": "h", "VERTICAL": "v", "DIAGONAL": "d"}[self.name]


@dataclass(eq=False)
class GrayImage:
    """8-bit gray value image; ``data`` has shape (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("gray image data must be a nonempty 2-D array")
        if arr.dtype != np.uint8:
            if np.any((arr < 0) | (arr > GRAY_MAX)):
                raise ValueError("gray values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        self.data = arr

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def pixel(self, x: int, y: int) -> int:
        return int(self.data[y, x])


@dataclass(eq=False)
class ProbabilityImage:
    """Per-pixel outcome probabilities in [0, 1]; shape (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("probability image data must be a nonempty 2-D array")
        if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
            raise ValueError("probabilities must lie in [0, 1]")
        self.data = arr

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass(eq=False)
class BinaryImage:
    """Boolean edge mask; shape (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("binary image data must be a nonempty 2-D array")
        self.data = arr.astype(bool)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


# ---------------------------------------------------------------------------
# PGM IO


def _next_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    """Next whitespace-delimited header token, skipping '#' comment lines."""
    n = len(buf)
    while pos < n:
        c = buf[pos : pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            while pos < n and buf[pos : pos + 1] != b"\n":
                pos += 1
        else:
            break
    if pos >= n:
        raise PgmError("unexpected end of PGM header")
    start = pos
    while pos < n and not buf[pos : pos + 1].isspace() and buf[pos : pos + 1] != b"#":
        pos += 1
    return buf[start:pos], pos


def _int_token(buf: bytes, pos: int, what: str) -> tuple[int, int]:
    tok, pos = _next_token(buf, pos)
    try:
        return int(tok), pos
    except ValueError:
        raise PgmError(f"invalid {what} in PGM header: {tok!r}") from None


def load_pgm(path: str | Path) -> GrayImage:
    """Read an ASCII (P2) or binary (P5) PGM file with maxval <= 255."""
    buf = Path(path).read_bytes()
    magic, pos = _next_token(buf, 0)
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"not a PGM file (magic {magic!r})")
    width, pos = _int_token(buf, pos, "width")
    height, pos = _int_token(buf, pos, "height")
    maxval, pos = _int_token(buf, pos, "maxval")
    if width < 1 or height < 1:
        raise PgmError(f"invalid PGM dimensions {width}x{height}")
    if not 0 < maxval <= GRAY_MAX:
        raise PgmError(f"unsupported PGM maxval {maxval} (must be in [1, 255])")
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the payload
        if pos >= len(buf) or not buf[pos : pos + 1].isspace():
            raise PgmError("missing separator before P5 payload")
        payload = buf[pos + 1 : pos + 1 + n]
        if len(payload) < n:
            raise PgmError(f"truncated P5 payload: {len(payload)} of {n} bytes")
        values = np.frombuffer(payload, dtype=np.uint8)
    else:
        text = b"\n".join(
            line.split(b"#", 1)[0] for line in buf[pos:].split(b"\n")
        )
        fields = text.split()
        if len(fields) < n:
            raise PgmError(f"truncated P2 payload: {len(fields)} of {n} values")
        if len(fields) > n:
            raise PgmError(f"trailing data in P2 payload: {len(fields)} > {n} values")
        try:
            values = np.array([int(f) for f in fields], dtype=np.int64)
        except ValueError as exc:
            raise PgmError(f"invalid P2 sample: {exc}") from None
    if np.any(values > maxval) or np.any(values < 0):
        raise PgmError("PGM sample out of range [0, maxval]")
    return GrayImage(values.reshape(height, width).astype(np.uint8))


def save_pgm(img: GrayImage, path: str | Path, fmt: str = "P2") -> None:
    """Write ``img`` as P2 (ASCII) or P5 (binary) with maxval 255."""
    if fmt not in ("P2", "P5"):
        raise ValueError(f"unsupported PGM format {fmt!r}")
    header = f"{fmt}\n{img.width} {img.height}\n{GRAY_MAX}\n".encode()
    if fmt == "P5":
        payload = img.data.tobytes()
    else:
        lines = "\n".join(" ".join(str(v) for v in row) for row in img.data)
        payload = (lines + "\n").encode()
    Path(path).write_bytes(header + payload)


# ---------------------------------------------------------------------------
# Sliding window with mirror padding


def mirror_value(img: GrayImage, x: int, y: int) -> int:
    """Pixel value with reflect-at-border padding one step beyond the edge.

    Index -1 maps to 0 and index ``width`` maps to ``width - 1`` (same for
    y), so a pair whose partner is reflected is value-equal and the border
    derivative vanishes.  Coordinates further outside are rejected.
    """
    if not (-1 <= x <= img.width and -1 <= y <= img.height):
        raise ValueError(
            f"coordinate ({x}, {y}) more than one step outside "
            f"{img.width}x{img.height} image"
        )
    if x < 0:
        x = 0
    elif x >= img.width:
        x = img.width - 1
    if y < 0:
        y = 0
    elif y >= img.height:
        y = img.height - 1
    return int(img.data[y, x])


def extract_pair(img: GrayImage, x: int, y: int, direction: Direction) -> tuple[int, int]:
    """Two-pixel window (I(x, y), I(x+dx, y+dy)) mirrored at the border."""
    if not (0 <= x < img.width and 0 <= y < img.height):
        raise ValueError(f"pixel ({x}, {y}) outside image")
    return (
        int(img.data[y, x]),
        mirror_value(img, x + direction.dx, y + direction.dy),
    )


def extract_patch_2x2(img: GrayImage, x: int, y: int) -> tuple[int, int, int, int]:
    """2x2 patch in raster order (top-left, top-right, bottom-left, bottom-right)."""
    if not (0 <= x < img.width and 0 <= y < img.height):
        raise ValueError(f"pixel ({x}, {y}) outside image")
    return (
        int(img.data[y, x]),
        mirror_value(img, x + 1, y),
        mirror_value(img, x, y + 1),
        mirror_value(img, x + 1, y + 1),
    )


# ---------------------------------------------------------------------------
# Combination, binarization, scaling


def pixelwise_max(images: list[ProbabilityImage]) -> ProbabilityImage:
    """Per-pixel maximum of equally sized probability images."""
    if not images:
        raise ValueError("pixelwise_max needs at least one image")
    shape = images[0].data.shape
    for im in images[1:]:
        if im.data.shape != shape:
            raise ValueError(f"dimension mismatch: {im.data.shape} vs {shape}")
    return ProbabilityImage(np.maximum.reduce([im.data for im in images]))


def otsu_threshold(img: GrayImage) -> tuple[int, BinaryImage]:
    """Threshold maximizing between-class variance of the 256-bin histogram.

    Pixels with value > t are marked edge.  Ties pick the smallest
    maximizing t; a constant image yields t = that value and no edges.
    """
    hist = np.bincount(img.data.ravel(), minlength=256).astype(np.float64)
    populated = np.nonzero(hist)[0]
    if len(populated) == 1:
        t = int(populated[0])
        return t, BinaryImage(np.zeros_like(img.data, dtype=bool))
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)
    s0 = np.cumsum(hist * levels)
    w1 = w0[-1] - w0
    valid = (w0 > 0) & (w1 > 0)
    mu0 = np.divide(s0, w0, out=np.zeros(256), where=valid)
    mu1 = np.divide(s0[-1] - s0, w1, out=np.zeros(256), where=valid)
    sigma = np.where(valid, w0 * w1 * (mu0 - mu1) ** 2, 0.0)
    t = int(np.argmax(sigma))  # argmax takes the first (= smallest) maximizer
    return t, BinaryImage(img.data > t)


def to_gray(p: ProbabilityImage) -> GrayImage:
    """Scale probabilities to gray values, round(p * 255) half-up."""
    scaled = np.floor(p.data * GRAY_MAX + 0.5)
    return GrayImage(np.clip(scaled, 0, GRAY_MAX).astype(np.uint8))


def gray_histogram(img: GrayImage) -> np.ndarray:
    """256-bin frequency vector; bin v counts the pixels with value v."""
    return np.bincount(img.data.ravel(), minlength=256).astype(np.int64)
