"""Closed-form proximal/shrinkage operators and a thin-SVD wrapper.

These are the building blocks of every solver update: scalar soft
thresholding, its entrywise-weighted form, singular value thresholding
(prox of the nuclear norm), and column-wise group shrinkage (prox of the
L2,1 norm).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, InvalidThreshold, NumericalError

# Singular values below RANK_TOL * sigma_max count as zero for rank purposes.
RANK_TOL = 1e-12


@dataclass
class ThinSvd:
    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    @property
    def rank(self):
        s = self.singular_values
        if s.size == 0 or s[0] == 0:
            return 0
        return int(np.count_nonzero(s > RANK_TOL * s[0]))

    def reconstruct(self):
        return (self.U * self.singular_values) @ self.V.T


def _require_finite(M, who):
    if not np.all(np.isfinite(M)):
        raise NumericalError(f"{who}: non-finite input")


def scalar_shrink(x, eps):
    """Soft threshold: sgn(x) * max(|x| - eps, 0)."""
    if eps < 0:
        raise InvalidThreshold(f"negative threshold {eps}")
    return np.sign(x) * np.maximum(np.abs(x) - eps, 0.0)


def weighted_shrink(M, T):
    """Entrywise soft threshold of M with per-entry thresholds T >= 0."""
    M = np.asarray(M, dtype=float)
    T = np.asarray(T, dtype=float)
    if M.shape != T.shape:
        raise DimensionError(f"shape mismatch {M.shape} vs {T.shape}")
    if np.any(T < 0):
        raise InvalidThreshold("negative entry in threshold matrix")
    return np.sign(M) * np.maximum(np.abs(M) - T, 0.0)


def thin_svd(M):
    """Thin SVD with nonincreasing singular values."""
    M = np.asarray(M, dtype=float)
    _require_finite(M, "thin_svd")
    try:
        U, s, Vt = np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge; retry with the slower but
        # more reliable gesvd driver before giving up.
        try:
            U, s, Vt = scipy.linalg.svd(M, full_matrices=False,
                                        lapack_driver="gesvd")
        except scipy.linalg.LinAlgError as exc:
            raise NumericalError(f"SVD failed: {exc}") from exc
    return ThinSvd(U=U, singular_values=s, V=Vt.T)


def svt(M, tau):
    """Singular value thresholding: prox of tau * nuclear norm at M."""
    if tau < 0:
        raise InvalidThreshold(f"negative threshold {tau}")
    f = thin_svd(M)
    s = np.maximum(f.singular_values - tau, 0.0)
    return (f.U * s) @ f.V.T


def column_l21_shrink(M, tau):
    """Column-wise group shrinkage: prox of tau * L2,1 norm at M.

    Column m_i maps to ((||m_i|| - tau)/||m_i||) m_i when ||m_i|| > tau,
    else to zero.
    """
    if tau < 0:
        raise InvalidThreshold(f"negative threshold {tau}")
    M = np.asarray(M, dtype=float)
    _require_finite(M, "column_l21_shrink")
    norms = np.linalg.norm(M, axis=0)
    scale = np.zeros_like(norms)
    hit = norms > tau
    scale[hit] = (norms[hit] - tau) / norms[hit]
    return M * scale
