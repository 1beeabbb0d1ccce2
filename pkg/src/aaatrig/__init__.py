"""Adaptive trigonometric rational approximation of periodic functions."""

from .baselines import (
    AaaModel,
    FourierInterpolant,
    aaa_fit,
    evaluate_aaa,
    evaluate_fourier,
    fft_interpolant,
)
from .calculus import DiffMatrix, derivative_at, diff_matrix
from .numerics import GepResult, generalized_eig, generalized_eig_arrow, min_singular_direction
from .polezero import (
    PartialFractions,
    PoleZeroReport,
    TaperFit,
    partial_fractions,
    poles_and_zeros,
    residues,
    taper_fit,
    transform,
)
from .solver import FitConfig, assemble_loewner, append_far_field_rows, cleanup, fit
from .trigbary import (
    FarField,
    Parity,
    SampleSet,
    TrigModel,
    canonicalize,
    cst,
    evaluate,
    evaluate_batch,
    far_field,
    interpolatory_weights,
)

__all__ = [
    "AaaModel",
    "DiffMatrix",
    "FarField",
    "FitConfig",
    "FourierInterpolant",
    "GepResult",
    "Parity",
    "PartialFractions",
    "PoleZeroReport",
    "SampleSet",
    "TaperFit",
    "TrigModel",
    "aaa_fit",
    "append_far_field_rows",
    "assemble_loewner",
    "canonicalize",
    "cleanup",
    "cst",
    "derivative_at",
    "diff_matrix",
    "evaluate",
    "evaluate_aaa",
    "evaluate_batch",
    "evaluate_fourier",
    "far_field",
    "fft_interpolant",
    "fit",
    "generalized_eig",
    "generalized_eig_arrow",
    "interpolatory_weights",
    "min_singular_direction",
    "partial_fractions",
    "poles_and_zeros",
    "residues",
    "taper_fit",
    "transform",
]

__version__ = "0.1.0"
