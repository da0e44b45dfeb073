"""Beamformer construction: analog steering, digital zero forcing, and the
vector-normalized hybrid composite.

The analog stage steers one constant-modulus beam per user at its LoS
angle.  The hybrid scheme multiplies that steering matrix by a digital ZF
precoder computed on the equivalent (post-steering) channel, then applies
per-column vector normalization so every composite column has unit power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayConfig, steering_vector

# Relative pivot threshold below which elimination declares the equivalent
# channel singular (coincident user angles).
SINGULARITY_RTOL = 1e-12


class SingularEquivalentChannel(Exception):
    """Equivalent channel is singular or numerically near-singular."""


class DegeneratePrecoder(Exception):
    """A precoder column maps to the zero vector and cannot be normalized."""


@dataclass(frozen=True)
class BeamformerSet:
    """RF steering matrix, digital precoder, and their composed transmit matrix."""

    rf: np.ndarray        # n_tx x n_rf steering columns
    digital: np.ndarray   # n_rf x K digital precoder (identity for pure analog)
    composite: np.ndarray  # n_tx x K, composite = rf @ digital


def abs_beamformer(phi: float, config: ArrayConfig) -> np.ndarray:
    """Analog beamsteering vector for one user: the steering vector at phi."""
    return steering_vector(phi, config)


def build_rf_matrix(angles, config: ArrayConfig) -> np.ndarray:
    """Stack per-user steering columns into the n_tx x K RF matrix."""
    angles = np.asarray(angles, dtype=float)
    if angles.ndim != 1 or angles.size == 0:
        raise ValueError("angles must be a non-empty 1-D sequence")
    return steering_vector(angles, config)  # (n_tx, K)


def abs_beamformer_set(angles, config: ArrayConfig) -> BeamformerSet:
    """Pure analog beamforming: composite columns are the steering columns."""
    rf = build_rf_matrix(angles, config)
    eye = np.eye(rf.shape[1])
    return BeamformerSet(rf=rf, digital=eye, composite=rf)


def equivalent_channel(h_matrix: np.ndarray, rf: np.ndarray) -> np.ndarray:
    """Channel seen by the digital stage: row k = h_k @ F_RF."""
    h_matrix = np.asarray(h_matrix)
    rf = np.asarray(rf)
    if h_matrix.ndim != 2 or rf.ndim != 2 or h_matrix.shape[1] != rf.shape[0]:
        raise ValueError(
            f"dimension mismatch: H is {h_matrix.shape}, F_RF is {rf.shape}")
    return h_matrix @ rf


def _invert(matrix: np.ndarray) -> np.ndarray:
    """Invert the K x K matrix by Gaussian elimination with partial pivoting.

    K is small (<= 8 in every experiment), so the explicit inverse is fine.
    Elimination runs in extended precision so the result is accurate to
    float64 rounding even for poorly conditioned (near-coincident-angle)
    equivalent channels.
    """
    k = matrix.shape[0]
    aug = np.concatenate([matrix.astype(np.clongdouble),
                          np.eye(k, dtype=np.clongdouble)], axis=1)
    threshold = SINGULARITY_RTOL * np.abs(matrix).max()
    for col in range(k):
        pivot_row = col + int(np.argmax(np.abs(aug[col:, col])))
        if np.abs(aug[pivot_row, col]) <= threshold:
            raise SingularEquivalentChannel(
                f"pivot {np.abs(aug[pivot_row, col]):.3e} below threshold {threshold:.3e}")
        if pivot_row != col:
            aug[[col, pivot_row]] = aug[[pivot_row, col]]
        aug[col] /= aug[col, col]
        for row in range(k):
            if row != col:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, k:].astype(complex)


def zf_precoder(h_hat: np.ndarray) -> np.ndarray:
    """Unnormalized zero-forcing precoder W = H_hat^H (H_hat H_hat^H)^{-1}.

    For a square equivalent channel (one RF chain per stream) the
    pseudo-inverse reduces to H_hat^{-1}, which is computed directly:
    forming the Gram product would square the condition number and cost
    roughly half the achievable interference-suppression digits.
    """
    h_hat = np.asarray(h_hat, dtype=complex)
    if h_hat.ndim != 2 or h_hat.shape[0] != h_hat.shape[1]:
        raise ValueError(f"equivalent channel must be square (K = n_rf), got {h_hat.shape}")
    return _invert(h_hat)


def vector_normalize(w: np.ndarray, rf: np.ndarray) -> np.ndarray:
    """Scale each digital column so the composite column F_RF w_k has unit norm."""
    w = np.asarray(w, dtype=complex)
    rf = np.asarray(rf)
    if rf.shape[1] != w.shape[0]:
        raise ValueError(f"dimension mismatch: F_RF is {rf.shape}, W is {w.shape}")
    norms = np.linalg.norm(rf @ w, axis=0)
    if np.any(norms == 0.0):
        raise DegeneratePrecoder("composite column is the zero vector")
    return w / norms


def hbs_composite(rf: np.ndarray, w: np.ndarray) -> BeamformerSet:
    """Compose the hybrid beamformer F = F_RF @ W."""
    rf = np.asarray(rf)
    w = np.asarray(w)
    if rf.shape[1] != w.shape[0]:
        raise ValueError(f"dimension mismatch: F_RF is {rf.shape}, W is {w.shape}")
    return BeamformerSet(rf=rf, digital=w, composite=rf @ w)


def hbs_beamformer_set(h_matrix: np.ndarray, angles, config: ArrayConfig) -> BeamformerSet:
    """Full hybrid chain: steering, equivalent channel, ZF, vector normalization."""
    rf = build_rf_matrix(angles, config)
    h_hat = equivalent_channel(h_matrix, rf)
    w = vector_normalize(zf_precoder(h_hat), rf)
    return hbs_composite(rf, w)
