"""Hybrid quantum edge detection for gray value images.

Gray values are phase-encoded into one- or two-qubit comparator circuits
whose measured outcome probability plays the role of a derivative filter
response.  The package contains the image plumbing, the circuit builders,
a small statevector simulator with mid-circuit measurement (compiled
kernel with a pure-Python fallback), a basis-gate transpiler, and the
end-to-end detection pipeline with job batching and fidelity scoring.
"""

from .image import (
    BinaryImage,
    Direction,
    GrayImage,
    ProbabilityImage,
    load_pgm,
    save_pgm,
)
from .neuron import VariantKind
from .pipeline import (
    EdgeResult,
    VariantConfig,
    compare_variants,
    hellinger_fidelity,
    reference_image,
    run_variant,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryImage",
    "Direction",
    "EdgeResult",
    "GrayImage",
    "ProbabilityImage",
    "VariantConfig",
    "VariantKind",
    "compare_variants",
    "hellinger_fidelity",
    "load_pgm",
    "reference_image",
    "run_variant",
    "save_pgm",
]
