"""Closed-form counting and capacity bounds, and their numerical verification."""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import BREAKPOINT_EPS, counting_function, hermitian_eigen, step_sample_points

VERIFICATION_TOL = 1e-9
GRID_POINTS = 64

KINDS = (
    "counting_power",
    "counting_generic",
    "capacity_power",
    "capacity_exponential",
    "diag_counting",
    "densta_domination",
)


@dataclass(frozen=True)
class BoundReport:
    """Verdict of one bound check.

    ``worst_margin`` is min(bound - actual) over the checked points; for the
    capacity kinds it is divided by max(1, bound). ``holds`` is ``None`` when
    the check does not apply (its hypotheses are not met).
    """

    kind: str
    holds: Optional[bool]
    worst_margin: float
    checked_points: int
    note: str = ""

    @property
    def applicable(self):
        return self.holds is not None

    def to_dict(self):
        return {
            "kind": self.kind,
            "holds": self.holds,
            "worst_margin": None if math.isnan(self.worst_margin) else float(self.worst_margin),
            "checked_points": int(self.checked_points),
            "note": self.note,
        }


def _report(kind, margins, note=""):
    margins = np.asarray(margins, dtype=float)
    worst = float(np.min(margins)) if margins.size else math.inf
    return BoundReport(kind, worst >= -VERIFICATION_TOL, worst, int(margins.size), note)


def inapplicable(kind, note):
    return BoundReport(kind, None, math.nan, 0, note)


def counting_bound_power(x, m, rho_plus, gamma):
    """min(M, (rho_plus / x)**(1/gamma)) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("the counting bound is defined for x > 0 only")
    val = np.minimum(float(m), (rho_plus / x) ** (1.0 / gamma))
    return float(val) if val.ndim == 0 else val


def counting_bound_generic(x, m, alpha, f_inverse, f_start=None):
    """min(M, f^{-1}(x / (1 + alpha))) for a decreasing envelope f on [1, inf).

    Where ``x / (1 + alpha)`` exceeds ``f_start = f(1)``, or ``f_inverse``
    is undefined (raises ``ValueError`` or gives NaN), the bound is 0.
    """
    if x <= 0:
        raise ValueError("the counting bound is defined for x > 0 only")
    y = x / (1.0 + alpha)
    if f_start is not None and y > f_start:
        return 0.0
    try:
        t = float(f_inverse(y))
    except (ValueError, ZeroDivisionError, OverflowError):
        return 0.0
    if math.isnan(t):
        return 0.0
    return max(0.0, min(float(m), t))


def power_envelope_inverse(f_plus, gamma):
    return lambda y: (f_plus / y) ** (1.0 / gamma)


def exponential_envelope_inverse(f_plus, gamma):
    """Inverse of f(t) = f_plus * exp(-gamma (t - 1))."""
    return lambda y: 1.0 + math.log(f_plus / y) / gamma


def capacity_bound_power(m, kappa, rho_plus, gamma):
    """Sub-linear capacity bound, in bits, for a power-law diagonal envelope.

    (kappa rho_plus M)**(1/gamma) / ln 2 * (gamma / (gamma - 1) + ln(1 + kappa rho_plus M))
    """
    if not gamma > 1.0:
        raise ValueError(f"the power-law capacity bound needs gamma > 1, got {gamma}")
    k = kappa * rho_plus * m
    return k ** (1.0 / gamma) / math.log(2.0) * (gamma / (gamma - 1.0) + math.log1p(k))


def capacity_bound_exponential(m, kappa, rho_plus, gamma, squared_log=True):
    """Polylogarithmic capacity bound, in bits, for an exponential diagonal envelope.

    With L = ln(1 + kappa rho_plus M) the bound is (1/gamma + L + L**2/gamma) / ln 2.
    ``squared_log=False`` selects the other reading of the last term,
    ln((1 + kappa rho_plus M)**2) / gamma = 2 L / gamma.
    """
    if not gamma > 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if kappa < 0 or rho_plus < 0 or m < 0:
        raise ValueError("kappa, rho_plus and M must be non-negative")
    big_l = math.log1p(kappa * rho_plus * m)
    last = big_l * big_l if squared_log else 2.0 * big_l
    return (1.0 / gamma + big_l + last / gamma) / math.log(2.0)


def _eigs_of(eigs):
    return np.asarray(getattr(eigs, "eigenvalues", eigs), dtype=float)


def verify_counting_bound(eigs, report):
    """Check N(x; F) against min(M, (rho_plus/x)**(1/gamma)).

    Points: just below every positive eigenvalue (where N - bound peaks on
    each step) plus a geometric grid on (eps, rho_plus].
    """
    lam = _eigs_of(eigs)
    m = len(lam)
    eps = BREAKPOINT_EPS * (report.spectral_radius or report.rho_plus)
    lo = BREAKPOINT_EPS * report.rho_plus
    xs = np.concatenate([lam - eps, np.geomspace(lo, report.rho_plus, GRID_POINTS)])
    xs = xs[xs > 0]
    bound = counting_bound_power(xs, m, report.rho_plus, report.gamma)
    note = "" if report.gamma_admissible else "informational: gamma <= 1"
    return _report("counting_power", bound - counting_function(lam, xs), note)


def verify_densta_domination(f, alpha, eigenvalues=None):
    """Check N(x; F) <= N(x / (1 + alpha); F_D) at every breakpoint gap.

    Points below ``1e-12 * scale`` are dropped: there, round-off in zero
    eigenvalues decides the count.
    """
    f = np.asarray(f)
    d = np.sort(np.diagonal(f).real)[::-1]
    lam = _eigs_of(hermitian_eigen(f) if eigenvalues is None else eigenvalues)
    scale = max(float(np.max(np.abs(lam))), float(d[0]))
    xs = step_sample_points(np.concatenate([lam, (1.0 + alpha) * d]), scale)
    xs = xs[xs > 1e-12 * scale]
    lhs = counting_function(lam, xs)
    rhs = counting_function(d, xs / (1.0 + alpha))
    return _report("densta_domination", rhs - lhs)


def verify_diag_counting(report):
    """Check #{i : f_i > x} <= min(M, (f_plus/x)**(1/gamma)) at x = f_i -/+ eps."""
    d = np.asarray(report.diag_sorted, dtype=float)
    eps = BREAKPOINT_EPS * float(d[0])
    xs = np.concatenate([d - eps, d + eps])
    xs = xs[xs > 0]
    bound = counting_bound_power(xs, len(d), report.f_plus, report.gamma)
    return _report("diag_counting", bound - counting_function(d, xs))


def verify_capacity_bound(capacity_bits, report, kappa, m):
    """Check C_M against the power-law capacity bound (relative tolerance)."""
    if not report.gamma > 1.0:
        raise ValueError(
            f"gamma = {report.gamma:.4g} <= 1: the power-law capacity bound does not "
            "apply; use the exponential or generic envelope instead"
        )
    bound = capacity_bound_power(m, kappa, report.rho_plus, report.gamma)
    return _report("capacity_power", [(bound - capacity_bits) / max(1.0, bound)])


def verify_exponential_capacity_bound(capacity_bits, m, kappa, rho_plus, gamma,
                                      squared_log=True):
    bound = capacity_bound_exponential(m, kappa, rho_plus, gamma, squared_log)
    return _report("capacity_exponential", [(bound - capacity_bits) / max(1.0, bound)])
