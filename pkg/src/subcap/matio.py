"""Plain-text matrix files.

Line 1 holds ``rows cols``; then one ``re im`` line per entry in row-major
order, each written with 17 significant digits so that reading back is
bit-exact.
"""
import numpy as np


class MatrixFormatError(ValueError):
    pass


def format_matrix(a):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    lines.extend(f"{z.real:.17g} {z.imag:.17g}" for z in a.ravel())
    return "\n".join(lines) + "\n"


def parse_matrix(text, allow_nonfinite=False):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    try:
        rows, cols = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise MatrixFormatError(f"bad header line: {lines[0]!r}") from None
    if rows < 1 or cols < 1:
        raise MatrixFormatError(f"dimensions must be positive, got {rows}x{cols}")
    body = lines[1:]
    if len(body) != rows * cols:
        raise MatrixFormatError(f"expected {rows * cols} entries, found {len(body)}")
    vals = np.empty(rows * cols, dtype=np.complex128)
    for k, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != 2:
            raise MatrixFormatError(f"line {k + 2}: expected 're im', got {ln!r}")
        try:
            vals[k] = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise MatrixFormatError(f"line {k + 2}: not a number: {ln!r}") from None
    if not allow_nonfinite and not np.all(np.isfinite(vals)):
        raise MatrixFormatError("matrix contains NaN or Inf entries")
    return vals.reshape(rows, cols)


def write_matrix(path, a):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_matrix(a))


def read_matrix(path, allow_nonfinite=False):
    with open(path, encoding="ascii") as fh:
        return parse_matrix(fh.read(), allow_nonfinite=allow_nonfinite)
