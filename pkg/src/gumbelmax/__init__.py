"""Gumbel limits for maxima of normal, half-normal and convoluted half-normal samples."""

__version__ = "0.1.0"

from gumbelmax.distributions import Case, asymptote, cdf, density, model, tail  # noqa: E402
from gumbelmax.sequences import NormSeq, invert_tail, sequences, symmetrize  # noqa: E402

__all__ = [
    "Case",
    "NormSeq",
    "asymptote",
    "cdf",
    "density",
    "invert_tail",
    "model",
    "sequences",
    "symmetrize",
    "tail",
]
