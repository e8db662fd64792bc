"""Pure NumPy fallback for the Jacobi sweeps.

Each round of the round-robin schedule touches disjoint index pairs, so all
of its rotations are applied at once with fancy indexing.
"""
import numpy as np


def round_robin_schedule(n):
    """Return an int64 array ``(rounds, pairs, 2)`` covering every pair once.

    Circle method: index 0 stays put, the others rotate. For odd ``n`` a
    dummy slot is added and its pairs are written as ``(-1, -1)``.
    """
    m = n + (n % 2)
    if m < 2:
        return np.zeros((0, 0, 2), dtype=np.int64)
    ring = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for k in range(m // 2):
            i, j = ring[k], ring[m - 1 - k]
            if i >= n or j >= n:
                pairs.append((-1, -1))
            else:
                pairs.append((min(i, j), max(i, j)))
        rounds.append(pairs)
        ring = [ring[0]] + [ring[-1]] + ring[1:-1]
    return np.asarray(rounds, dtype=np.int64)


def _offdiag_frobenius(a):
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real ** 2 + off.imag ** 2)))


def jacobi_sweeps(a, vt, schedule, max_sweeps, tol, skip):
    sweep = 0
    off = _offdiag_frobenius(a)
    while off > tol and sweep < max_sweeps:
        for pairs in schedule:
            pairs = pairs[pairs[:, 0] >= 0]
            p, q = pairs[:, 0], pairs[:, 1]
            apq = a[p, q]
            mag = np.abs(apq)
            keep = mag > skip
            if not keep.any():
                continue
            p, q, apq, mag = p[keep], q[keep], apq[keep], mag[keep]
            app = a[p, p].real
            aqq = a[q, q].real
            ph = apq / mag
            phc = ph.conj()
            theta = (aqq - app) / (2.0 * mag)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c

            xp, xq = a[:, p], a[:, q]
            a[:, p] = c * xp - s * phc * xq
            a[:, q] = s * xp + c * phc * xq
            xp, xq = a[p, :], a[q, :]
            a[p, :] = c[:, None] * xp - (s * ph)[:, None] * xq
            a[q, :] = s[:, None] * xp + (c * ph)[:, None] * xq
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = app - t * mag
            a[q, q] = aqq + t * mag
            xp, xq = vt[p, :], vt[q, :]
            vt[p, :] = c[:, None] * xp - (s * phc)[:, None] * xq
            vt[q, :] = s[:, None] * xp + (c * phc)[:, None] * xq
        sweep += 1
        off = _offdiag_frobenius(a)
    return sweep, off
