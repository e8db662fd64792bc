"""Foschini-Gans capacity in its equivalent forms.

Every form goes through Hermitian eigenvalues (never a determinant) and
returns bits per channel use.
"""
import math
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eigen, require_square

NEG_CLAMP = 1e-12
LN2 = math.log(2.0)
FORMS = ("logdet", "singular_sum", "fading_sum", "counting_integral")


@dataclass(frozen=True)
class CapacityResult:
    bits: float
    kappa: float
    M: int
    form: str

    def to_dict(self):
        return {"bits": self.bits, "kappa": self.kappa, "M": self.M, "form": self.form}


def _check_kappa(kappa):
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")


def clamp_psd(values, what="eigenvalue"):
    """Zero out round-off negatives in [-1e-12 * max|v|, 0); reject anything lower."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return v
    floor = -NEG_CLAMP * float(np.max(np.abs(v)))
    if np.any(v < floor):
        raise ValueError(f"negative {what} {v.min():.3e} beyond round-off")
    return np.clip(v, 0.0, None)


def _log2_sum(x):
    return float(np.sum(np.log1p(x)) / LN2)


def singular_values(h):
    """Singular values of a square H (descending), from the eigenvalues of H^* H."""
    h = require_square(h)
    g = h.conj().T @ h
    return np.sqrt(clamp_psd(hermitian_eigen(0.5 * (g + g.conj().T)).eigenvalues))


def capacity_logdet(h, kappa):
    """log2 det(I + (kappa/M) H H^*), summed over eigenvalues."""
    h = require_square(h)
    _check_kappa(kappa)
    m = h.shape[0]
    g = (kappa / m) * (h @ h.conj().T)
    lam = clamp_psd(hermitian_eigen(0.5 * (g + g.conj().T)).eigenvalues)
    return CapacityResult(_log2_sum(lam), float(kappa), m, "logdet")


def capacity_from_singular_values(mu, kappa, m):
    _check_kappa(kappa)
    mu = np.asarray(mu, dtype=float)
    if np.any(mu < 0):
        raise ValueError("singular values must be non-negative")
    return CapacityResult(_log2_sum((kappa / m) * mu ** 2), float(kappa), int(m), "singular_sum")


def capacity_from_fading_eigs(lam, kappa, m):
    """sum log2(1 + kappa M lambda_i) over the eigenvalues of the fading matrix."""
    _check_kappa(kappa)
    lam = clamp_psd(lam)
    return CapacityResult(_log2_sum(kappa * m * lam), float(kappa), int(m), "fading_sum")


def capacity_from_counting_integral(eigs, kappa, m):
    """(kappa M / ln 2) * integral_0^rho N(x; F) / (1 + kappa M x) dx.

    N is constant (= k) on [lambda_{k+1}, lambda_k), so the integral is a
    finite sum of k * [ln(1 + kappa M x)] over each step.
    """
    _check_kappa(kappa)
    lam = np.sort(clamp_psd(eigs))[::-1]
    km = kappa * m
    ends = np.log1p(km * np.append(lam, 0.0))
    steps = ends[:-1] - ends[1:]
    k = np.arange(1, len(lam) + 1)
    return CapacityResult(float(np.sum(k * steps) / LN2), float(kappa), int(m), "counting_integral")
