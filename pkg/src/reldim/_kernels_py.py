"""Pure numpy reference kernels for GF(p) row reduction."""

from __future__ import annotations

import numpy as np


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Return the reduced row echelon form of ``a`` over GF(p) and its pivot columns."""
    r = np.array(a, dtype=np.int64, copy=True) % p
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.flatnonzero(r[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = pow(int(r[row, col]), p - 2, p)
        if inv != 1:
            r[row] = (r[row] * inv) % p
        factors = r[:, col].copy()
        factors[row] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            r[hit] = (r[hit] - np.outer(factors[hit], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots
