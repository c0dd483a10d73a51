"""Dense exact linear algebra over a prime field GF(p).

Matrices are plain ``numpy.int64`` arrays whose entries are kept reduced
into ``[0, p)``.  Vectors are columns.  The row-reduction kernel comes from
the compiled extension when it is importable and falls back to the numpy
implementation otherwise (set ``RELDIM_PURE=1`` to force the fallback).
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from . import _kernels_py

BACKEND = "python"
if not os.environ.get("RELDIM_PURE"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        _rref_kernel = _compiled.rref_mod_p
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _rref_kernel = _kernels_py.rref_mod_p
else:
    _rref_kernel = _kernels_py.rref_mod_p


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise FieldError(f"field modulus must be a prime, got {p!r}")
    return int(p)


def mat(rows, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce nested lists (or an array) to a reduced int64 matrix."""
    a = np.array(rows, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a % p


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def chain(p: int, *ms: np.ndarray) -> np.ndarray:
    """Product ``ms[0] @ ms[1] @ ...`` reduced mod p."""
    out = ms[0]
    for m in ms[1:]:
        out = mul(out, m, p)
    return out


class RREF(NamedTuple):
    r: np.ndarray
    pivots: list[int]
    rank: int


def rref(m: np.ndarray, p: int) -> RREF:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return RREF(zeros(*m.shape), [], 0)
    r, piv = _rref_kernel(m, p)
    piv = [int(c) for c in piv]
    return RREF(np.asarray(r, dtype=np.int64), piv, len(piv))


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    # fewer rows is cheaper for the elimination loop
    if m.shape[0] > m.shape[1]:
        m = m.T
    return rref(m, p).rank


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of ``{v : m v = 0}``."""
    rows, cols = m.shape
    r, piv, rk = rref(m, p)
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    out = zeros(cols, len(free))
    for k, fc in enumerate(free):
        out[fc, k] = 1
        for i, pc in enumerate(piv):
            out[pc, k] = (-r[i, fc]) % p
    return out


def solve(m: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some ``x`` with ``m x = b``, or ``None`` when the system is inconsistent."""
    if m.shape[0] != b.shape[0]:
        raise ValueError(f"solve: rows(m)={m.shape[0]} but rows(b)={b.shape[0]}")
    n = m.shape[1]
    k = b.shape[1]
    if m.shape[0] == 0:
        return zeros(n, k)
    aug = np.hstack([m % p, b % p])
    r, piv, _ = rref(aug, p)
    if any(c >= n for c in piv):
        return None
    x = zeros(n, k)
    for i, pc in enumerate(piv):
        x[pc] = r[i, n:]
    if not np.array_equal(mul(m, x, p), b % p):
        raise AssertionError("solve: re-multiplication check failed")
    return x


def column_basis(m: np.ndarray, p: int) -> np.ndarray:
    """A basis (subset of the columns of ``m``) of its column space."""
    if m.shape[1] == 0:
        return zeros(m.shape[0], 0)
    piv = rref(m, p).pivots
    return m[:, piv] % p


def row_space(m: np.ndarray, p: int) -> np.ndarray:
    r, _, rk = rref(m, p)
    return r[:rk]


def left_inverse(u: np.ndarray, p: int) -> np.ndarray:
    """``L`` with ``L u = I`` for ``u`` of full column rank."""
    d, k = u.shape
    if k == 0:
        return zeros(0, d)
    lt = solve(u.T.copy(), eye(k), p)
    if lt is None:
        raise ValueError("left_inverse: matrix does not have full column rank")
    return lt.T.copy()


def complement(u: np.ndarray, p: int) -> np.ndarray:
    """Standard basis vectors completing the columns of ``u`` to a basis."""
    d = u.shape[0]
    if u.shape[1] == 0:
        return eye(d)
    piv = rref(np.hstack([u, eye(d)]), p).pivots
    extra = [c - u.shape[1] for c in piv if c >= u.shape[1]]
    return eye(d)[:, extra]


def in_span(u: np.ndarray, v: np.ndarray, p: int) -> bool:
    """Whether every column of ``v`` lies in the column span of ``u``."""
    if v.shape[1] == 0:
        return True
    if u.shape[1] == 0:
        return not v.any()
    return rank(np.hstack([u, v]), p) == rank(u, p)


def inverse(m: np.ndarray, p: int) -> np.ndarray | None:
    n = m.shape[0]
    if m.shape != (n, n):
        return None
    x = solve(m, eye(n), p)
    if x is None:
        return None
    return x


def block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    out = zeros(r, c)
    i = j = 0
    for b in blocks:
        out[i : i + b.shape[0], j : j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def random_matrix(rng: np.random.Generator, r: int, c: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(r, c), dtype=np.int64)


def random_invertible(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    while True:
        m = random_matrix(rng, n, n, p)
        if rank(m, p) == n:
            return m
