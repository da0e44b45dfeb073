"""Closed-form spectral-efficiency bounds and their building blocks.

Implements the zero-order Bessel function of the first kind, the expected
squared cross-correlation of two independently-steered ULA responses, the
high-SNR saturation level of multi-user analog beamsteering, the pairwise
spread diagnostic for the K > 2 bound, and the Log-Rayleigh approximation
of the zero-forcing hybrid scheme's SE.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayConfig, steering_vector

EULER_GAMMA = float(np.euler_gamma)

# Rayleigh scale of the unit-second-moment complex path gain (per-component
# standard deviation): E|alpha|^2 = 2*sigma^2 = 1.
DEFAULT_SIGMA = 1.0 / math.sqrt(2.0)

# J0 Hankel expansion coefficients c_m = prod_{j<=m}(2j-1)^2 / (m! 8^m).
_HANKEL_C = [1.0]
for _m in range(1, 26):
    _HANKEL_C.append(_HANKEL_C[-1] * (2 * _m - 1) ** 2 / (_m * 8.0))

_SERIES_CUTOFF = 12.0


class BoundKind(enum.Enum):
    ABS_SATURATION_K2 = "AbsSaturationK2"
    ABS_SATURATION_K_GT2 = "AbsSaturationKGt2"
    HBS_APPROX = "HbsApprox"


@dataclass(frozen=True)
class BoundResult:
    """Evaluated closed-form bound, bits/s/Hz, with the scenario parameters."""

    value: float
    kind: BoundKind
    params: dict = field(default_factory=dict)


def _j0_series(x):
    # Power series sum_m (-x^2/4)^m / (m!)^2; usable in float64 up to the
    # cutoff (worst-case cancellation there costs ~1e-12 absolute).
    z = -(x * x) / 4.0
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for m in range(1, 45):
        term = term * z / (m * m)
        acc = acc + term
    return acc


def _j0_asymptotic(x):
    # Hankel expansion, truncated where the terms at the cutoff stop
    # shrinking; error there is ~4e-11 and decreases with x.
    xi = 1.0 / x
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    sign = 1.0
    for j in range(12):
        p = p + sign * _HANKEL_C[2 * j] * xi ** (2 * j)
        q = q + sign * _HANKEL_C[2 * j + 1] * xi ** (2 * j + 1)
        sign = -sign
    chi = x - np.pi / 4.0
    return np.sqrt(2.0 / (np.pi * x)) * (np.cos(chi) * p + np.sin(chi) * q)


def bessel_j0(x):
    """Zero-order Bessel function of the first kind, ~1e-9 absolute on [0, 450].

    Accepts scalars or arrays; J0 is even, so the sign of x is irrelevant.
    """
    x_arr = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x_arr)
    small = x_arr < _SERIES_CUTOFF
    if small.any():
        out[small] = _j0_series(x_arr[small])
    if (~small).any():
        out[~small] = _j0_asymptotic(x_arr[~small])
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def _interference_sum(n_tx: int, spacing: float) -> float:
    """S = 1 + 2 sum_{i=1}^{n_tx-1} (1 - i/n_tx) J0(2*pi*d*i)^2.

    Accumulated smallest-terms-first (descending i) via exact summation.
    """
    idx = np.arange(n_tx - 1, 0, -1)
    terms = 2.0 * (1.0 - idx / n_tx) * bessel_j0(2.0 * np.pi * spacing * idx) ** 2
    return math.fsum(list(np.atleast_1d(terms)) + [1.0])


def cross_correlation_expectation(n_tx: int, spacing: float) -> float:
    """E|a(phi1)^H a(phi2)|^2 over independent uniform angles on [0, 2*pi).

    Expanding |a^H a|^2 into lag terms and using E[cos(z sin phi)] = J0(z)
    gives S / n_tx for unit-norm steering vectors (each of the n_tx lag-0
    terms contributes 1/n_tx^2).
    """
    if n_tx < 1:
        raise ValueError("n_tx must be >= 1")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    return _interference_sum(n_tx, spacing) / n_tx


def abs_saturation_bound(n_tx: int, spacing: float, n_users: int) -> BoundResult:
    """High-SNR saturation level of the analog scheme's per-stream SE.

    log2(1 + n_tx^2 / ((K-1)^2 S)); the K = 2 case is the single-interferer
    specialization.
    """
    if n_tx < 1:
        raise ValueError("n_tx must be >= 1")
    if n_users < 2:
        raise ValueError("saturation bound needs at least one interferer (K >= 2)")
    s = _interference_sum(n_tx, spacing)
    value = math.log2(1.0 + n_tx**2 / ((n_users - 1) ** 2 * s))
    kind = BoundKind.ABS_SATURATION_K2 if n_users == 2 else BoundKind.ABS_SATURATION_K_GT2
    return BoundResult(value=value, kind=kind,
                       params={"n_tx": n_tx, "d": spacing, "k_users": n_users})


def gamma_error(angles, k: int, config: ArrayConfig) -> float:
    """Pairwise spread of the interferer correlation magnitudes.

    0.5 * sum_{i!=k} sum_{j!=k} (|a_k^H a_i| - |a_k^H a_j|)^2; vanishes as
    the correlations equalize, which happens as n_tx grows.
    """
    angles = np.asarray(angles, dtype=float)
    n_users = angles.size
    if n_users < 3:
        raise ValueError("the spread diagnostic needs at least two interferers (K >= 3)")
    if not 0 <= k < n_users:
        raise ValueError(f"user index {k} out of range")
    steer = steering_vector(angles, config)  # (n_tx, K)
    corr = np.abs(steer[:, k].conj() @ steer)
    others = np.delete(corr, k)
    diffs = others[:, None] - others[None, :]
    return 0.5 * float((diffs**2).sum())


def log_rayleigh_mean(scale_arg: float) -> float:
    """E[ln X] for X Rayleigh-distributed with scale ``scale_arg``:
    ln(scale_arg) + ln2/2 - gamma/2."""
    if scale_arg <= 0:
        raise ValueError("scale_arg must be positive")
    return math.log(scale_arg) + math.log(2.0) / 2.0 - EULER_GAMMA / 2.0


def hbs_se_approx(rho, n_tx: int, sigma: float = DEFAULT_SIGMA) -> BoundResult:
    """Log-Rayleigh approximation of the hybrid scheme's per-stream SE.

    (2/ln 2) * E[ln(sqrt(rho*n_tx)|alpha|)] with |alpha| Rayleigh(sigma).
    Tight for rho*n_tx >> 1; undershoots at low SNR.
    """
    rho_lin = rho.rho_linear if hasattr(rho, "rho_linear") else float(rho)
    if rho_lin <= 0 or n_tx < 1 or sigma <= 0:
        raise ValueError("need rho > 0, n_tx >= 1, sigma > 0")
    value = 2.0 / math.log(2.0) * log_rayleigh_mean(math.sqrt(rho_lin * n_tx) * sigma)
    return BoundResult(value=value, kind=BoundKind.HBS_APPROX,
                       params={"n_tx": n_tx, "rho": rho_lin, "sigma": sigma})
