"""Structure-constraint weight machinery.

The angle-based fixed weight (for comparison of structure priors), the
Hadamard product, and the augmented feature matrix A = [(LX)' ; ones]'
consumed by the adaptive-weight update.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InsufficientSamples
from .matrix_io import column_normalize

SIGMA_FLOOR = 1e-12


def hadamard(P, Q):
    """Entrywise product of two same-shape matrices."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape:
        raise DimensionError(f"shape mismatch {P.shape} vs {Q.shape}")
    return P * Q


@dataclass
class AngleWeight:
    W: np.ndarray  # N x N, entries in [0, 1)
    B: np.ndarray  # pairwise angular dissimilarities
    sigma: float   # mean of B, floored


def sclrr_weight(X):
    """Angle-based weight: W_ij = 1 - exp(-B_ij / sigma).

    B_ij = 1 - |<x_i*, x_j*>| on unit-normalized columns; sigma is the
    mean of all N^2 entries of B (zero diagonal included), floored at
    SIGMA_FLOOR so identical-direction data yields W = 0 rather than 0/0.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] < 2:
        raise InsufficientSamples("need at least 2 columns")
    Xn = column_normalize(X)
    G = np.abs(Xn.T @ Xn)
    B = np.clip(1.0 - G, 0.0, None)
    # rounding noise in |<x_i*, x_j*>| = 1 would otherwise be amplified by
    # the sigma floor for identical-direction data
    B[B < SIGMA_FLOOR] = 0.0
    np.fill_diagonal(B, np.where(np.linalg.norm(X, axis=0) > 0, 0.0, B.diagonal()))
    sigma = max(float(B.mean()), SIGMA_FLOOR)
    W = 1.0 - np.exp(-B / sigma)
    return AngleWeight(W=W, B=B, sigma=sigma)


@dataclass
class AugmentedFeatures:
    A: np.ndarray  # (d+1) x N: LX stacked over a row of ones


def build_augmented(L, X):
    """Stack the projected features LX over an all-ones row."""
    L = np.asarray(L, dtype=float)
    X = np.asarray(X, dtype=float)
    if L.ndim != 2 or X.ndim != 2 or L.shape[1] != X.shape[0]:
        raise DimensionError(f"cannot form L@X with {L.shape} and {X.shape}")
    A = np.vstack([L @ X, np.ones((1, X.shape[1]))])
    return AugmentedFeatures(A=A)
