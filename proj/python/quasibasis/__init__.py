"""Riesz bases of exponentials from cut-and-project quasicrystals."""

from ._quasibasis import (
    InvalidInput,
    Pipeline,
    QuasibasisError,
    __version__,
    constant_c,
    demo_names,
    frame_bounds,
    gamma_generators,
    gram_1d,
    multiplicity,
    run_demo,
)

__all__ = [
    "InvalidInput",
    "Pipeline",
    "QuasibasisError",
    "__version__",
    "constant_c",
    "demo_names",
    "frame_bounds",
    "gamma_generators",
    "gram_1d",
    "multiplicity",
    "run_demo",
]
