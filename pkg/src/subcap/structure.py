"""Structural certificates for a fading matrix F.

Quantifies the two structural hypotheses used by the counting and capacity
bounds: the off-diagonal mass of every trailing block is dominated by the
leading diagonal entry of that block (constant ``alpha``), and the sorted
diagonal stays under a power envelope ``f_plus * i**-gamma``.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import (
    hermitian_eigen,
    operator_norm,
    require_hermitian,
    split_diag_offdiag,
    trailing_principal_submatrix,
)

DIAG_TOL = 1e-12
CERT_TOL = 1e-9


class StructureError(ValueError):
    """The structural hypotheses cannot be certified for this matrix."""


@dataclass(frozen=True)
class StructureReport:
    permutation: np.ndarray
    diag_sorted: np.ndarray
    alpha_min: float
    f_plus: float
    gamma: float
    rho_plus: float
    gamma_admissible: bool
    spectral_radius: float
    rho_margin: float
    certified: bool = field(default=True)

    @property
    def size(self):
        return len(self.diag_sorted)

    def to_dict(self):
        return {
            "permutation": [int(i) for i in self.permutation],
            "diag_sorted": [float(x) for x in self.diag_sorted],
            "alpha_min": float(self.alpha_min),
            "f_plus": float(self.f_plus),
            "gamma": float(self.gamma),
            "rho_plus": float(self.rho_plus),
            "gamma_admissible": bool(self.gamma_admissible),
            "spectral_radius": float(self.spectral_radius),
            "rho_margin": float(self.rho_margin),
            "certified": bool(self.certified),
        }


def _real_diagonal(f):
    d = np.diagonal(f).real.copy()
    scale = max(1.0, float(np.max(np.abs(d)))) if d.size else 1.0
    if d.size and d.min() < -DIAG_TOL * scale:
        raise StructureError(
            f"negative diagonal entry {d.min():.3e}; F is not a Gram-type matrix"
        )
    return np.clip(d, 0.0, None)


def sort_diagonal_descending(f):
    """Simultaneously permute rows and columns so the diagonal is non-increasing.

    Returns ``(perm, f_sorted)`` with ``f_sorted = f[perm][:, perm]`` (0-based
    ``perm``). Ties keep their original order.
    """
    f = require_hermitian(f)
    d = _real_diagonal(f)
    perm = np.argsort(-d, kind="stable")
    return perm, f[np.ix_(perm, perm)]


def _require_sorted(d):
    if np.any(np.diff(d) > DIAG_TOL * max(1.0, float(d[0]) if d.size else 1.0)):
        raise StructureError("diagonal must be sorted in non-increasing order")


def suffix_offdiag_mass(f):
    """S_i = sum over pairs j > k >= i of |f_kj| for every i (0-based)."""
    upper = np.abs(np.triu(np.asarray(f), 1))
    return np.cumsum(upper.sum(axis=1)[::-1])[::-1]


def minimal_alpha(f):
    """Smallest alpha with S_i <= alpha * f_i for i = 1..M-1."""
    f = require_hermitian(f)
    m = f.shape[0]
    if m == 1:
        return 0.0
    d = _real_diagonal(f)
    _require_sorted(d)
    s = suffix_offdiag_mass(f)[:-1]
    d = d[:-1]
    zero = d <= 0.0
    if np.any(zero & (s > 0.0)):
        i = int(np.argmax(zero & (s > 0.0)))
        raise StructureError(
            f"off-diagonal mass {s[i]:.3e} below a zero diagonal entry at i={i + 1}; "
            "no finite alpha exists"
        )
    ratios = np.where(zero, 0.0, s / np.where(zero, 1.0, d))
    return float(np.max(ratios))


@dataclass(frozen=True)
class A1PrimeReport:
    holds: bool
    worst_i: Optional[int]
    worst_margin: float


def check_a1_prime(f, alpha):
    """Check ||offdiag(trailing block after i0)|| <= alpha * f_{i0+1} for every i0.

    ``worst_i`` is the first violating i0, or ``None`` when all hold.
    ``worst_margin`` is the smallest ``alpha * f_{i0+1} - norm``.
    """
    f = require_hermitian(f)
    d = _real_diagonal(f)
    _require_sorted(d)
    first_bad = None
    worst = np.inf
    for i0 in range(f.shape[0]):
        _, off = split_diag_offdiag(trailing_principal_submatrix(f, i0))
        norm = operator_norm(off)
        cap = alpha * d[i0]
        worst = min(worst, cap - norm)
        if norm - cap > CERT_TOL * max(norm, cap) and first_bad is None:
            first_bad = i0
    return A1PrimeReport(first_bad is None, first_bad, float(worst))


def fit_power_envelope(diag_sorted, gamma_fixed=None):
    """Envelope f_i <= f_plus * i**-gamma for a non-increasing diagonal.

    With ``gamma_fixed`` the exponent is taken as given. Otherwise it is the
    least-squares slope of -log f_i against log i over the positive entries.
    ``f_plus`` is then the smallest constant that makes the envelope hold.
    """
    d = np.asarray(diag_sorted, dtype=float)
    if d.size == 0 or not np.any(d > 0):
        raise StructureError("cannot fit an envelope to an all-zero diagonal")
    _require_sorted(d)
    idx = np.arange(1, d.size + 1, dtype=float)
    if gamma_fixed is None:
        pos = d > 0
        if np.count_nonzero(pos) < 2:
            raise StructureError("need at least two positive diagonal entries to fit gamma")
        slope, _ = np.polyfit(np.log(idx[pos]), -np.log(d[pos]), 1)
        gamma = float(slope)
    else:
        gamma = float(gamma_fixed)
    f_plus = float(np.max(d * idx ** gamma))
    return f_plus, gamma


def build_structure_report(f, gamma_fixed=None, eigenvalues=None):
    """Sort, compute alpha_min, fit the envelope and check rho_plus >= rho.

    ``eigenvalues`` of ``f`` may be passed to skip the eigensolve.
    """
    f = require_hermitian(f)
    perm, fs = sort_diagonal_descending(f)
    d = _real_diagonal(fs)
    alpha = minimal_alpha(fs)
    if f.shape[0] == 1 and gamma_fixed is None:
        raise StructureError("gamma cannot be fitted for M = 1; pass gamma_fixed")
    f_plus, gamma = fit_power_envelope(d, gamma_fixed)
    rho_plus = (1.0 + alpha) * f_plus
    if eigenvalues is None:
        eigenvalues = hermitian_eigen(f).eigenvalues
    rho = float(np.max(np.abs(eigenvalues)))
    margin = rho_plus - rho
    return StructureReport(
        permutation=perm,
        diag_sorted=d,
        alpha_min=alpha,
        f_plus=f_plus,
        gamma=gamma,
        rho_plus=rho_plus,
        gamma_admissible=gamma > 1.0,
        spectral_radius=rho,
        rho_margin=margin,
        certified=margin >= -CERT_TOL * max(1.0, rho_plus),
    )
