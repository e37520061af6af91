"""Cassels-Montgomery spectral sums, kernels, partitions and quadrature audits."""

from ._cmlab import (
    CmlabError,
    KernelSuite,
    Partition,
    bessel_j,
    eigenfunction,
    enu_check,
    exactness_scan,
    expectation,
    fourier_gaussian,
    generate_points,
    run_cli,
    smoothed_sum,
    spectral_sum,
    spectrum,
    sweep,
    transplant_check,
)

__all__ = [
    "CmlabError",
    "KernelSuite",
    "Partition",
    "bessel_j",
    "eigenfunction",
    "enu_check",
    "exactness_scan",
    "expectation",
    "fourier_gaussian",
    "generate_points",
    "run_cli",
    "smoothed_sum",
    "spectral_sum",
    "spectrum",
    "sweep",
    "transplant_check",
]
