"""Plain-text matrix format for fixtures.

A file holds a ``dim=<d>`` header followed by ``d`` rows of ``d``
whitespace-separated ``re,im`` pairs, row-major. Values are written with
``repr`` precision so a round trip is exact.
"""

import numpy as np

from .errors import BadParameter


def format_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise BadParameter(f"only square matrices are serializable, got {m.shape}")
    lines = [f"dim={m.shape[0]}"]
    for row in m:
        lines.append(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dim="):
        raise BadParameter("missing 'dim=<d>' header")
    try:
        d = int(lines[0][4:])
    except ValueError as exc:
        raise BadParameter(f"bad header {lines[0]!r}") from exc
    rows = lines[1:]
    if len(rows) != d:
        raise BadParameter(f"expected {d} rows, found {len(rows)}")
    out = np.empty((d, d), dtype=np.complex128)
    for i, row in enumerate(rows):
        pairs = row.split()
        if len(pairs) != d:
            raise BadParameter(f"row {i} has {len(pairs)} entries, expected {d}")
        for j, pair in enumerate(pairs):
            re, sep, im = pair.partition(",")
            try:
                if not sep:
                    raise ValueError(pair)
                out[i, j] = complex(float(re), float(im))
            except ValueError as exc:
                raise BadParameter(f"row {i}: cannot parse entry {pair!r}") from exc
    return out


def write_matrix(path, m):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_matrix(m))


def read_matrix(path):
    with open(path, encoding="ascii") as fh:
        return parse_matrix(fh.read())
