"""Inertial forward-backward splitting (padisno / c-padisno) with runtime
descent diagnostics, rate classification and a wavelet-l0 image restoration
experiment. Images are 2-D float arrays in row-major order."""

from ._core import (
    DataError,
    FormatError,
    NumericalError,
    OracleError,
    ParameterError,
    StepSizeError,
    blur,
    fig1_cell,
    fit_rate,
    gaussian_kernel,
    haar_analyze,
    haar_synthesize,
    isnr,
    max_step_size,
    prox_l0,
    prox_l0_scalar,
    prox_l1,
    prox_norm_cubed,
    prox_wavelet_l0,
    restore,
    solve,
    synthetic_image,
)

__all__ = [
    "DataError",
    "FormatError",
    "NumericalError",
    "OracleError",
    "ParameterError",
    "StepSizeError",
    "blur",
    "fig1_cell",
    "fit_rate",
    "gaussian_kernel",
    "haar_analyze",
    "haar_synthesize",
    "isnr",
    "max_step_size",
    "prox_l0",
    "prox_l0_scalar",
    "prox_l1",
    "prox_norm_cubed",
    "prox_wavelet_l0",
    "restore",
    "solve",
    "synthetic_image",
]

__version__ = "0.1.0"
