"""Square-root covariance kernels: QR composition and rank-1 factor updates.

All factors are lower triangular with nonnegative diagonal and satisfy
``P = S @ S.T``.  Upper-triangular (MATLAB-style) factors must be transposed
at the boundary.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DowndateFailure, NumericalError, ShapeError


@dataclass(frozen=True)
class SqrtFactor:
    """Lower-triangular square-root factor ``s`` of a covariance ``s @ s.T``."""

    s: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ShapeError(f"factor must be square, got {s.shape}")
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return self.s.shape[0]


def qr_sqrt(columns: np.ndarray) -> SqrtFactor:
    """Compose a triangular factor from a wide block of columns.

    Returns lower-triangular S with ``S @ S.T == columns @ columns.T`` via
    QR of ``columns.T``; the triangular factor is transposed and its column
    signs normalized so the diagonal is nonnegative.
    """
    columns = np.asarray(columns, dtype=float)
    if columns.ndim != 2:
        raise ShapeError("columns must be a matrix")
    n, m = columns.shape
    if m < n:
        raise ShapeError(f"need at least {n} columns, got {m}")
    r = np.linalg.qr(columns.T, mode="r")
    s = r.T.copy()
    flip = np.diag(s) < 0.0
    s[:, flip] = -s[:, flip]
    return SqrtFactor(s)


def rank1_update(factor: SqrtFactor, v: np.ndarray, w: float, sign: str = "+") -> SqrtFactor:
    """Rank-1 update/downdate of a lower-triangular factor.

    Returns R with ``R @ R.T == S @ S.T +/- w * outer(v, v)``, by the classical
    Givens (update) / hyperbolic (downdate) column sweep in O(n^2).  A downdate
    that would lose positive definiteness raises :class:`DowndateFailure`.
    """
    if sign not in ("+", "-"):
        raise ShapeError(f"sign must be '+' or '-', got {sign!r}")
    if w < 0.0:
        raise ShapeError("weight must be nonnegative")
    v = np.asarray(v, dtype=float)
    n = factor.n
    if v.shape != (n,):
        raise ShapeError(f"vector length {v.shape} does not match factor size {n}")
    s = factor.s.copy()
    u = np.sqrt(w) * v
    sgn = 1.0 if sign == "+" else -1.0
    for k in range(n):
        d = s[k, k]
        if d == 0.0 and u[k] == 0.0:
            continue
        if d <= 0.0:
            raise NumericalError("factor diagonal must be positive for rank-1 sweep")
        r2 = d * d + sgn * u[k] * u[k]
        if r2 <= 0.0:
            raise DowndateFailure("downdate loses positive definiteness")
        r = np.sqrt(r2)
        c = r / d
        t = u[k] / d
        s[k, k] = r
        if k + 1 < n:
            s[k + 1 :, k] = (s[k + 1 :, k] + sgn * t * u[k + 1 :]) / c
            u[k + 1 :] = c * u[k + 1 :] - t * s[k + 1 :, k]
    return SqrtFactor(s)


def reconstruct(factor: SqrtFactor) -> np.ndarray:
    """Full covariance ``S @ S.T`` (tests and the occasional explicit inverse)."""
    return factor.s @ factor.s.T


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """A (not necessarily triangular) square root of a symmetric PSD matrix.

    Cholesky when positive definite; otherwise an eigenvalue square root with
    small negative eigenvalues clipped to zero.  Genuinely indefinite input
    raises :class:`NumericalError`.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix must be square, got {m.shape}")
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        sym = 0.5 * (m + m.T)
        vals, vecs = np.linalg.eigh(sym)
        floor = -1e-8 * max(1.0, float(np.abs(vals).max()))
        if vals.min() < floor:
            raise NumericalError("matrix is not positive semidefinite")
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


def psd_factor(m: np.ndarray) -> SqrtFactor:
    """Lower-triangular factor of a symmetric PSD matrix."""
    return qr_sqrt(psd_sqrt(m))
