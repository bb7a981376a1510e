"""Complex matrix files.

Format: a header line ``# complex interleaved, rows=R cols=C`` followed by R
comma-separated lines of 2*C numbers, each complex entry written as its real
and imaginary part in adjacent cells. Values are written with ``repr`` so a
write/read round trip is exact.
"""

import re

import numpy as np

from .errors import ParseError

_HEADER = re.compile(r"^#\s*complex interleaved,\s*rows=(\d+)\s+cols=(\d+)\s*$")


def format_complex_matrix(M):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    rows, cols = M.shape
    lines = [f"# complex interleaved, rows={rows} cols={cols}"]
    for row in M:
        cells = []
        for z in row:
            cells.append(repr(float(z.real)))
            cells.append(repr(float(z.imag)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_complex_matrix(M, path):
    with open(path, "w") as fh:
        fh.write(format_complex_matrix(M))


def parse_complex_matrix(text):
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", line=1)
    hdr = _HEADER.match(lines[0].strip())
    if hdr is None:
        raise ParseError("expected header '# complex interleaved, rows=R cols=C'", line=1)
    rows, cols = int(hdr.group(1)), int(hdr.group(2))
    if rows < 1 or cols < 1:
        raise ParseError("rows and cols must be positive", line=1)
    body = [(i + 2, ln) for i, ln in enumerate(lines[1:]) if ln.strip()]
    if len(body) != rows:
        raise ParseError(f"expected {rows} data rows, found {len(body)}", line=len(lines))
    out = np.empty((rows, cols), dtype=np.complex128)
    for r, (lineno, ln) in enumerate(body):
        cells = ln.split(",")
        if len(cells) != 2 * cols:
            raise ParseError(f"expected {2 * cols} cells, found {len(cells)}", line=lineno)
        vals = []
        for c, cell in enumerate(cells):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"not a number: {cell.strip()!r}", line=lineno, field=c + 1) from None
            if not np.isfinite(v):
                raise ParseError(f"non-finite value {cell.strip()!r}", line=lineno, field=c + 1)
            vals.append(v)
        a = np.asarray(vals)
        out[r] = a[0::2] + 1j * a[1::2]
    return out


def read_complex_matrix(path):
    with open(path) as fh:
        return parse_complex_matrix(fh.read())


def read_complex_vector(path):
    M = read_complex_matrix(path)
    if M.shape[1] != 1 and M.shape[0] != 1:
        raise ParseError(f"expected a vector, got a {M.shape[0]}x{M.shape[1]} matrix", line=1)
    return M.reshape(-1)
