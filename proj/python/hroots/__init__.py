"""Polynomial roots from limits of Hankel-determinant ratios.

Coefficients are given highest power first, as numbers or decimal strings
(strings are parsed at full working precision).
"""

from ._hroots import (
    HrootsError,
    Root,
    RootSet,
    independent_roots,
    laurent_coeffs,
    run,
    solve,
    taylor_coeffs,
    trace,
)

__all__ = [
    "HrootsError",
    "Root",
    "RootSet",
    "independent_roots",
    "laurent_coeffs",
    "run",
    "solve",
    "taylor_coeffs",
    "trace",
]
