"""Dense Hermitian linear algebra.

Matrices are plain ``numpy`` complex arrays. The eigensolver is a cyclic
Jacobi method; the sweep kernel is compiled with Cython when the extension
is available and falls back to a vectorized NumPy implementation otherwise
(``SUBCAP_PURE_PYTHON=1`` forces the fallback).
"""
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _jacobi_py

HERMITIAN_TOL = 1e-12
EIG_TOL = 1e-10
ORTHO_TOL = 1e-10
MAX_SWEEPS = 100
OFFDIAG_TOL = 1e-12
BREAKPOINT_EPS = 1e-9

if os.environ.get("SUBCAP_PURE_PYTHON"):
    _kernel = _jacobi_py
    BACKEND = "python"
else:
    try:
        from . import _jacobi_ext as _kernel

        BACKEND = "cython"
    except ImportError:
        _kernel = _jacobi_py
        BACKEND = "python"


class NotSquareError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, sweeps, off_mass):
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(off-diagonal Frobenius mass {off_mass:.3e})"
        )
        self.sweeps = sweeps
        self.off_mass = off_mass


@dataclass(frozen=True)
class SpectralSummary:
    """Eigen-decomposition of a Hermitian matrix.

    ``eigenvalues`` are sorted non-increasing; ``eigenvectors`` (if requested)
    holds the matching unit eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    max_residual: float
    iterations: int

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def spectral_radius(self):
        if len(self.eigenvalues) == 0:
            return 0.0
        return float(np.max(np.abs(self.eigenvalues)))


def as_matrix(a):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def require_square(a):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"matrix must be square, got {a.shape[0]}x{a.shape[1]}")
    return a


def hermitian_defect(a):
    """Largest entrywise deviation from Hermitian symmetry, relative to max(1, max|a|)."""
    a = require_square(a)
    if a.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(a))))
    return float(np.max(np.abs(a - a.conj().T))) / scale


def is_hermitian(a, tol=HERMITIAN_TOL):
    return hermitian_defect(a) <= tol


def require_hermitian(a, tol=HERMITIAN_TOL):
    a = require_square(a)
    defect = hermitian_defect(a)
    if defect > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: relative defect {defect:.3e} > {tol:.1e}"
        )
    return a


@lru_cache(maxsize=64)
def _schedule(n):
    return _jacobi_py.round_robin_schedule(n)


def hermitian_eigen(a, want_vectors=False, max_sweeps=MAX_SWEEPS):
    """Eigenvalues (and optionally eigenvectors) of a Hermitian matrix.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Hermitian within ``HERMITIAN_TOL``. Only the Hermitian part
        ``(a + a^*)/2`` is diagonalized.
    want_vectors : bool
        Return the eigenvectors as columns of ``SpectralSummary.eigenvectors``.
    max_sweeps : int
        Sweep budget before ``ConvergenceError`` is raised.

    Returns
    -------
    SpectralSummary
    """
    a0 = require_hermitian(a)
    n = a0.shape[0]
    work = np.ascontiguousarray(0.5 * (a0 + a0.conj().T))
    vt = np.eye(n, dtype=np.complex128)
    norm_f = float(np.linalg.norm(work))
    tol = OFFDIAG_TOL * norm_f
    # rotations below this size cannot move the off-diagonal mass above tol
    skip = 1e-3 * tol / max(n, 1)
    sweeps, off = _kernel.jacobi_sweeps(work, vt, _schedule(n), int(max_sweeps), tol, skip)
    if off > tol:
        raise ConvergenceError(sweeps, off)

    lam = np.diagonal(work).real.copy()
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    v = vt[order].T
    if n:
        resid = a0 @ v - v * lam
        max_residual = float(np.max(np.linalg.norm(resid, axis=0)))
    else:
        max_residual = 0.0
    return SpectralSummary(
        eigenvalues=lam,
        eigenvectors=v if want_vectors else None,
        max_residual=max_residual,
        iterations=int(sweeps),
    )


def eigvalsh_desc(a):
    return hermitian_eigen(a).eigenvalues


def counting_function(eigs, x):
    """Number of eigenvalues strictly greater than ``x``.

    ``eigs`` must be sorted non-increasing. ``x`` may be a scalar (an ``int``
    is returned) or an array (an integer array of the same shape).
    """
    neg = -np.asarray(eigs, dtype=float)
    counts = np.searchsorted(neg, -np.asarray(x, dtype=float), side="left")
    if np.ndim(counts) == 0:
        return int(counts)
    return counts


def split_diag_offdiag(a):
    a = require_square(a)
    d = np.diag(np.diagonal(a))
    o = a.copy()
    np.fill_diagonal(o, 0.0)
    return d, o


def row_sum_norm_bound(a):
    """max_i sum_j |a_ij|, an upper bound on the operator norm of a Hermitian matrix."""
    a = require_square(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a), axis=1)))


def operator_norm(a):
    eigs = hermitian_eigen(a).eigenvalues
    if len(eigs) == 0:
        return 0.0
    return float(max(abs(eigs[0]), abs(eigs[-1])))


def trailing_principal_submatrix(f, i0):
    """Drop the first ``i0`` rows and columns of ``f``."""
    f = require_square(f)
    m = f.shape[0]
    if not 0 <= i0 <= m - 1:
        raise IndexError(f"i0 must lie in [0, {m - 1}], got {i0}")
    return f[i0:, i0:].copy()


def step_sample_points(breakpoints, scale=1.0, eps=BREAKPOINT_EPS):
    """Sample points that certify an inequality between right-continuous step functions.

    Both sides are constant between consecutive breakpoints, so testing one
    point per gap (the midpoints) plus one point outside each end is enough;
    ``b - eps*scale`` and ``b + eps*scale`` are added around every breakpoint.
    """
    b = np.unique(np.asarray(breakpoints, dtype=float))
    if b.size == 0:
        return np.zeros(1)
    e = eps * scale if scale > 0 else eps
    mids = 0.5 * (b[1:] + b[:-1])
    return np.unique(np.concatenate([b - e, b + e, mids]))


@dataclass(frozen=True)
class InterlacingReport:
    holds: bool
    worst_margin: int
    checked_points: int


def check_interlacing_counting(m_full, n_a):
    """Check N(x; M) <= n_a + N(x; B) where B is the trailing block of size dim - n_a."""
    m_full = require_hermitian(m_full)
    dim = m_full.shape[0]
    if not 1 <= n_a < dim:
        raise ValueError(f"n_a must satisfy 1 <= n_a < {dim}, got {n_a}")
    lam = eigvalsh_desc(m_full)
    beta = eigvalsh_desc(m_full[n_a:, n_a:])
    scale = max(np.max(np.abs(lam)), np.max(np.abs(beta)))
    xs = step_sample_points(np.concatenate([lam, beta]), scale)
    margin = n_a + counting_function(beta, xs) - counting_function(lam, xs)
    worst = int(np.min(margin))
    return InterlacingReport(holds=worst >= 0, worst_margin=worst, checked_points=len(xs))
