import numpy as np
import pytest

from subcap import _jacobi_py, linalg

try:
    from subcap import _jacobi_ext
except ImportError:
    _jacobi_ext = None

KERNELS = [pytest.param(_jacobi_py, id="python")]
if _jacobi_ext is not None:
    KERNELS.append(pytest.param(_jacobi_ext, id="cython"))


@pytest.fixture(params=KERNELS)
def kernel(request, monkeypatch):
    """Run the test once per available Jacobi backend."""
    monkeypatch.setattr(linalg, "_kernel", request.param)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_hermitian(rng, n, scale=1.0):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (x + x.conj().T)


def random_psd(rng, n, rank=None, decay=None):
    """Random PSD matrix G G^*; optional rank and column-power decay."""
    r = n if rank is None else rank
    g = rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))
    if decay is not None:
        g = g * (np.arange(1, r + 1) ** -decay)[None, :]
    a = g @ g.conj().T / r
    return 0.5 * (a + a.conj().T)


def sorted_psd(rng, n, **kw):
    """Random PSD matrix with its diagonal permuted into non-increasing order."""
    a = random_psd(rng, n, **kw)
    perm = np.argsort(-np.diagonal(a).real, kind="stable")
    return a[np.ix_(perm, perm)]


def diag_dominant_psd(rng, n, gamma=2.0, coupling=0.05):
    """PSD matrix with power-law diagonal i**-gamma and weak off-diagonal coupling."""
    d = np.arange(1, n + 1, dtype=float) ** -gamma
    s = np.sqrt(d)
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    off = coupling * 0.5 * (x + x.conj().T) * np.outer(s, s) / n
    np.fill_diagonal(off, 0.0)
    a = np.diag(d).astype(complex) + off
    lam_min = np.linalg.eigvalsh(a).min()
    if lam_min < 0:
        a = a + (-lam_min) * np.eye(n)
    return a


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
