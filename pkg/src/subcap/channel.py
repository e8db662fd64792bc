"""Channel construction: multi-path scattering model, i.i.d. Gaussian baseline,
Fourier (virtual channel) basis and the fading matrix.
"""
import zlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import as_matrix, require_square

UNIT_TOL = 1e-12

MODELS = ("scattering_powerlaw", "scattering_equal", "iid_gaussian")


def _unit(v, name):
    v = np.asarray(v, dtype=float).reshape(3)
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must be a unit 3-vector, got norm {np.linalg.norm(v)!r}")
    return v


def direction(azimuth, elevation=0.0):
    """Unit vector for an (azimuth, elevation) pair in radians."""
    ce = np.cos(elevation)
    return np.array([ce * np.cos(azimuth), ce * np.sin(azimuth), np.sin(elevation)])


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array: element j sits at ``origin + j * spacing * axis``, j = 0..count-1."""

    count: int
    spacing: float
    axis: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))
    origin: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if int(self.count) < 1:
            raise ValueError(f"array needs at least one element, got {self.count}")
        if self.spacing < 0:
            raise ValueError(f"spacing must be non-negative, got {self.spacing}")
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "spacing", float(self.spacing))
        object.__setattr__(self, "axis", _unit(self.axis, "axis"))
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=float).reshape(3))

    def positions(self):
        j = np.arange(self.count, dtype=float)[:, None]
        return self.origin[None, :] + j * self.spacing * self.axis[None, :]

    def to_dict(self):
        return {
            "count": self.count,
            "spacing": self.spacing,
            "axis": self.axis.tolist(),
            "origin": self.origin.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["count"], d["spacing"], d["axis"], d["origin"])


@dataclass(frozen=True)
class ScatteringPath:
    gain: complex
    omega_t: np.ndarray
    omega_r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gain", complex(self.gain))
        object.__setattr__(self, "omega_t", _unit(self.omega_t, "omega_t"))
        object.__setattr__(self, "omega_r", _unit(self.omega_r, "omega_r"))

    def to_dict(self):
        return {
            "gain": [self.gain.real, self.gain.imag],
            "omega_t": self.omega_t.tolist(),
            "omega_r": self.omega_r.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        re, im = d["gain"]
        return cls(complex(re, im), d["omega_t"], d["omega_r"])


@dataclass(frozen=True)
class ScatteringScenario:
    paths: Sequence[ScatteringPath]
    tx: ArrayGeometry
    rx: ArrayGeometry
    wavelength: float

    def __post_init__(self):
        if len(self.paths) == 0:
            raise ValueError("scenario needs at least one scattering path")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        object.__setattr__(self, "paths", tuple(self.paths))

    def to_dict(self):
        return {
            "wavelength": self.wavelength,
            "tx": self.tx.to_dict(),
            "rx": self.rx.to_dict(),
            "paths": [p.to_dict() for p in self.paths],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            paths=[ScatteringPath.from_dict(p) for p in d["paths"]],
            tx=ArrayGeometry.from_dict(d["tx"]),
            rx=ArrayGeometry.from_dict(d["rx"]),
            wavelength=float(d["wavelength"]),
        )

    def reversed(self):
        """Swap the roles of transmitter and receiver."""
        return ScatteringScenario(
            paths=[ScatteringPath(p.gain, p.omega_r, p.omega_t) for p in self.paths],
            tx=self.rx,
            rx=self.tx,
            wavelength=self.wavelength,
        )


def scattering_transfer_matrix(s):
    """Transfer matrix H (rx.count x tx.count) of a scattering scenario.

    h_ij = sum_p beta_p exp(i k <omega_t,p, x_t,j>) exp(i k <omega_r,p, x_r,i>)
    with wavenumber k = 2 pi / wavelength.
    """
    if len(s.paths) == 0:
        raise ValueError("scenario needs at least one scattering path")
    if not s.wavelength > 0:
        raise ValueError(f"wavelength must be positive, got {s.wavelength}")
    k = 2.0 * np.pi / s.wavelength
    gains = np.array([p.gain for p in s.paths], dtype=np.complex128)
    om_t = np.array([p.omega_t for p in s.paths])
    om_r = np.array([p.omega_r for p in s.paths])
    steer_t = np.exp(1j * k * (om_t @ s.tx.positions().T))  # (P, N)
    steer_r = np.exp(1j * k * (om_r @ s.rx.positions().T))  # (P, M)
    return steer_r.T @ (gains[:, None] * steer_t)


def make_rng(seed, m, model):
    """Philox4x64 stream keyed by (seed, M, model).

    Philox is a counter-based generator; the key comes from NumPy's
    ``SeedSequence`` over the three integers, so every (seed, M, model)
    triple gets an independent, reproducible stream.
    """
    model_key = zlib.crc32(str(model).encode("utf-8"))
    ss = np.random.SeedSequence([int(seed), int(m), model_key])
    return np.random.Generator(np.random.Philox(ss))


def iid_gaussian_transfer_matrix(m, seed, variance=1.0):
    """M x M matrix of i.i.d. circular complex Gaussians with E|h|^2 = variance."""
    if int(m) < 1:
        raise ValueError(f"M must be a positive integer, got {m}")
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    rng = make_rng(seed, m, "iid_gaussian")
    sd = np.sqrt(variance / 2.0)
    re = rng.standard_normal((m, m))
    im = rng.standard_normal((m, m))
    return sd * (re + 1j * im)


def fourier_basis(m):
    """Unitary U_M whose row k (k = 1..M) is the conjugate of the k-th Fourier vector.

    Entry (k, j) equals M^{-1/2} exp(-2 pi i k (j-1) / M).
    """
    if int(m) < 1:
        raise ValueError(f"M must be a positive integer, got {m}")
    k = np.arange(1, m + 1)[:, None]
    j = np.arange(m)[None, :]
    return np.exp(-2j * np.pi * ((k * j) % m) / m) / np.sqrt(m)


def fading_matrix(h):
    """F = M^-2 U_M H H^* U_M^*, symmetrized to exact Hermitian form."""
    h = require_square(h)
    m = h.shape[0]
    u = fourier_basis(m)
    g = u @ h
    f = (g @ g.conj().T) / float(m) ** 2
    return 0.5 * (f + f.conj().T)


def normalize_total_power(h):
    """Rescale H by a positive real so that sum |h_ij|^2 equals M."""
    h = require_square(h)
    total = float(np.sum(h.real ** 2 + h.imag ** 2))
    if total == 0.0:
        raise ValueError("cannot normalize the zero matrix")
    return h * np.sqrt(h.shape[0] / total)


def generate_scenario(model, m, seed, paths=32, gain_decay_s=1.0, wavelength=0.1,
                      spacing_over_wavelength=0.5, gain_scale=1.0):
    """Synthetic scattering scenario with M-element ULAs on both sides.

    Path directions have uniform random azimuth (zero elevation). Gains have
    uniform random phase and magnitude ``gain_scale * p**-gain_decay_s`` for
    ``scattering_powerlaw`` or ``gain_scale`` for ``scattering_equal``.
    """
    if model not in ("scattering_powerlaw", "scattering_equal"):
        raise ValueError(f"not a scattering model: {model!r}")
    if int(paths) < 1:
        raise ValueError(f"paths must be >= 1, got {paths}")
    rng = make_rng(seed, m, model)
    az_t = rng.uniform(0.0, 2.0 * np.pi, paths)
    az_r = rng.uniform(0.0, 2.0 * np.pi, paths)
    phase = rng.uniform(0.0, 2.0 * np.pi, paths)
    idx = np.arange(1, paths + 1, dtype=float)
    if model == "scattering_powerlaw":
        mag = gain_scale * idx ** (-gain_decay_s)
    else:
        mag = np.full(paths, float(gain_scale))
    gains = mag * np.exp(1j * phase)
    spacing = spacing_over_wavelength * wavelength
    tx = ArrayGeometry(m, spacing, [1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    rx = ArrayGeometry(m, spacing, [1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    plist = [
        ScatteringPath(g, direction(a_t), direction(a_r))
        for g, a_t, a_r in zip(gains, az_t, az_r)
    ]
    return ScatteringScenario(plist, tx, rx, wavelength)


def build_transfer_matrix(model, m, seed, paths=32, gain_decay_s=1.0, wavelength=0.1,
                          spacing_over_wavelength=0.5, variance=1.0, normalize_power=False):
    """Transfer matrix for one of ``MODELS``; returns ``(H, scenario or None)``."""
    if model == "iid_gaussian":
        h, scen = iid_gaussian_transfer_matrix(m, seed, variance), None
    elif model in MODELS:
        scen = generate_scenario(model, m, seed, paths, gain_decay_s, wavelength,
                                 spacing_over_wavelength)
        h = scattering_transfer_matrix(scen)
    else:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    if normalize_power:
        h = normalize_total_power(h)
    return as_matrix(h), scen
