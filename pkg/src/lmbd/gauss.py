"""Gaussian-approximation diagnostic: sup-distance between the
standardized success-count law and the standard normal as n grows.

This is a numeric convergence witness only; no finite-n mixing condition
is checked and no rate is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .core import ModelParams, moments, pmf

__all__ = ["CltScanRow", "standardized_ks_distance", "clt_scan"]


@dataclass(frozen=True)
class CltScanRow:
    n: int
    psi: float
    omega: float
    ks_distance: float


def _std_normal_cdf(z: np.ndarray) -> np.ndarray:
    # Phi(z) via the complementary error function, accurate to ~1e-16
    return 0.5 * erfc(-z / math.sqrt(2.0))


def standardized_ks_distance(params: ModelParams) -> float:
    """sup_y | F(y) - Phi((y - mean) / sd) |, evaluated at the discrete
    cdf's right-continuous points."""
    ms = moments(params)
    if ms.variance <= 0.0:
        raise ValueError("degenerate variance; standardization undefined")
    table = pmf(params)
    cdf_vals = np.minimum(1.0, np.cumsum(table.probs()))
    z = (np.arange(params.n + 1) - ms.mean) / math.sqrt(ms.variance)
    return float(np.max(np.abs(cdf_vals - _std_normal_cdf(z))))


def clt_scan(ns, psi: float, omega: float) -> list[CltScanRow]:
    """One diagnostic row per trial count, in input order."""
    ns = [int(n) for n in ns]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("ns must be strictly increasing")
    return [
        CltScanRow(
            n=n,
            psi=psi,
            omega=omega,
            ks_distance=standardized_ks_distance(ModelParams(n=n, psi=psi, omega=omega)),
        )
        for n in ns
    ]
