"""Seeded random modules, maps and complexes for tests and the acceptance harness."""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .algebra import Algebra
from .complexes import ChainMap, Complex
from .modules import (
    Module,
    base_change,
    hom_matrices,
    indecomposable_projective,
    projective,
    quotient,
    zero_module,
)


def random_module(a: Algebra, rng: np.random.Generator, max_dim: int = 4, tries: int = 50) -> Module:
    """A random quotient of an indecomposable projective sum, in scrambled coordinates."""
    k = len(a.primitive_idempotents())
    p = a.p
    for _ in range(tries):
        nsum = int(rng.integers(1, 3))
        parts = [int(rng.integers(0, k)) for _ in range(nsum)]
        P = projective(a, parts).module
        if P.dim == 0:
            continue
        # submodule generated by a few random elements
        ngen = int(rng.integers(0, 3))
        vecs = la.random_matrix(rng, P.dim, ngen, p)
        span = np.hstack([P.action[b] @ vecs for b in range(a.dim)]) % p if ngen else la.zeros(P.dim, 0)
        q = quotient(P, span).module
        if 0 < q.dim <= max_dim:
            return base_change(q, la.random_invertible(rng, q.dim, p))
    return indecomposable_projective(a, 0)[0]


def random_hom(m: Module, n: Module, rng: np.random.Generator) -> np.ndarray:
    hb = hom_matrices(m, n)
    if hb.shape[0] == 0:
        return la.zeros(n.dim, m.dim)
    c = rng.integers(0, m.p, size=hb.shape[0])
    return np.einsum("h,hab->ab", c, hb) % m.p


def random_complex(a: Algebra, rng: np.random.Generator, max_dim: int = 4, width: int = 4, lo: int | None = None) -> Complex:
    """Random bounded complex: d^i is a random map out of coker d^{i-1}, so d^2 = 0."""
    p = a.p
    w = int(rng.integers(1, width + 1))
    if lo is None:
        lo = int(rng.integers(-2, 2))
    terms = []
    for _ in range(w):
        terms.append(random_module(a, rng, max_dim) if rng.random() > 0.1 else zero_module(a))
    diffs = []
    prev = None
    for k in range(w - 1):
        src, tgt = terms[k], terms[k + 1]
        if prev is None:
            d = random_hom(src, tgt, rng)
        else:
            q = quotient(src, prev)
            g = random_hom(q.module, tgt, rng)
            d = la.mul(g, q.projection.matrix, p)
        diffs.append(d)
        prev = d
    return Complex(a, lo, terms, diffs)


def random_chain_map(x: Complex, y: Complex, rng: np.random.Generator) -> ChainMap:
    """Uniform random element of the space of chain maps x -> y."""
    p = x.p
    degs = [i for i in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1) if x.term(i).dim and y.term(i).dim]
    bases = {i: hom_matrices(x.term(i), y.term(i)) for i in degs}
    offs, n = {}, 0
    for i in degs:
        offs[i] = n
        n += bases[i].shape[0]
    if n == 0:
        return ChainMap(x, y, {}, check=False)
    # d_y f^i - f^{i+1} d_x = 0, linear in the coefficients
    rows = []
    for i in range(min(x.lo, y.lo) - 1, max(x.hi, y.hi) + 1):
        block = np.zeros((y.term(i + 1).dim * x.term(i).dim, n), dtype=np.int64)
        if i in bases:
            for k, h in enumerate(bases[i]):
                block[:, offs[i] + k] = la.mul(y.dmat(i), h, p).reshape(-1)
        if i + 1 in bases:
            for k, h in enumerate(bases[i + 1]):
                block[:, offs[i + 1] + k] -= la.mul(h, x.dmat(i), p).reshape(-1)
        rows.append(block % p)
    space = la.kernel_basis(np.vstack(rows), p)
    c = la.mul(space, rng.integers(0, p, size=(space.shape[1], 1)), p)[:, 0] if space.shape[1] else np.zeros(n, np.int64)
    comps = {i: np.einsum("h,hab->ab", c[offs[i] : offs[i] + bases[i].shape[0]], bases[i]) % p for i in degs}
    return ChainMap(x, y, comps)
