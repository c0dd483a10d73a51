"""Bounded cochain complexes of modules (differential of degree +1).

A complex stores its lowest degree ``lo``, one module per degree and one
differential matrix per degree (``d[k]`` maps degree ``lo+k`` to ``lo+k+1``).
Zero terms at either end are trimmed on construction, so two complexes are
structurally equal exactly when their ``lo``, modules and matrices agree.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .algebra import Algebra
from .errors import ReldimError
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    is_equivariant,
    projective_cover,
    quotient,
    submodule,
    zero_module,
)


class ComplexError(ReldimError):
    code = "d-squared"


class ChainMapError(ReldimError):
    code = "chain-map"


class Complex:
    def __init__(self, algebra: Algebra, lo: int, terms: list[Module], diffs: list[np.ndarray], check: bool = True):
        terms = list(terms)
        diffs = [np.asarray(getattr(d, "matrix", d), dtype=np.int64) for d in diffs]
        if len(diffs) != max(len(terms) - 1, 0):
            raise ComplexError(f"{len(terms)} terms need {max(len(terms) - 1, 0)} differentials, got {len(diffs)}")
        while terms and terms[0].dim == 0:
            terms.pop(0)
            if diffs:
                diffs.pop(0)
            lo += 1
        while terms and terms[-1].dim == 0:
            terms.pop()
            if diffs:
                diffs.pop()
        if not terms:
            lo = 0
        self.algebra = algebra
        self.lo = lo
        self.terms = terms
        self.d = [d.reshape(terms[k + 1].dim, terms[k].dim) % algebra.p for k, d in enumerate(diffs)]
        self._zero = zero_module(algebra)
        if check:
            self.verify()

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def hi(self) -> int:
        """Highest nonzero degree (``lo - 1`` for the zero complex)."""
        return self.lo + len(self.terms) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, i: int) -> Module:
        if self.lo <= i <= self.hi:
            return self.terms[i - self.lo]
        return self._zero

    def dmat(self, i: int) -> np.ndarray:
        """Matrix of d^i : term(i) -> term(i+1)."""
        if self.lo <= i < self.hi:
            return self.d[i - self.lo]
        return la.zeros(self.term(i + 1).dim, self.term(i).dim)

    def diff(self, i: int) -> ModuleMap:
        return ModuleMap(self.term(i), self.term(i + 1), self.dmat(i), check=False)

    def dims(self) -> list[int]:
        return [t.dim for t in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def verify(self) -> None:
        for t in self.terms:
            if not t.algebra.same_as(self.algebra):
                raise ComplexError("terms over different algebras", reason="algebra-mismatch")
        for i in range(self.lo, self.hi):
            if not is_equivariant(self.term(i), self.term(i + 1), self.dmat(i)):
                raise ChainMapError(f"differential in degree {i} is not a module map")
        for i in range(self.lo, self.hi - 1):
            if la.mul(self.dmat(i + 1), self.dmat(i), self.p).any():
                raise ComplexError(f"d^{i + 1} d^{i} != 0")

    def same(self, other: "Complex") -> bool:
        if self.lo != other.lo or len(self.terms) != len(other.terms):
            return False
        if not all(a.same(b) for a, b in zip(self.terms, other.terms)):
            return False
        return all(np.array_equal(x, y) for x, y in zip(self.d, other.d))

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"lo={self.lo};".encode())
        for t in self.terms:
            h.update(f"t{t.dim};".encode())
            h.update(np.ascontiguousarray(t.action, dtype=np.int64).tobytes())
        for d in self.d:
            h.update(np.ascontiguousarray(d, dtype=np.int64).tobytes())
        return h.hexdigest()

    def shift(self, k: int = 1) -> "Complex":
        """C[k]: degree i holds C^{i+k}; differentials pick up the sign (-1)^k."""
        sign = -1 if k % 2 else 1
        return Complex(self.algebra, self.lo - k, self.terms, [(sign * d) % self.p for d in self.d], check=False)

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, {i: la.eye(self.term(i).dim) for i in self.degrees()}, check=False)

    def __repr__(self) -> str:
        return f"<Complex lo={self.lo} dims={self.dims()}>"


def stalk(m: Module, degree: int = 0) -> Complex:
    return Complex(m.algebra, degree, [m], [], check=False)


def zero_complex(a: Algebra) -> Complex:
    return Complex(a, 0, [], [], check=False)


def layer(algebra: Algebra, lo: int, terms: list[Module]) -> Complex:
    """Complex with zero differentials (a direct sum of shifted modules)."""
    diffs = [la.zeros(terms[k + 1].dim, terms[k].dim) for k in range(len(terms) - 1)]
    return Complex(algebra, lo, terms, diffs, check=False)


class ChainMap:
    def __init__(self, source: Complex, target: Complex, comps: dict[int, np.ndarray], check: bool = True):
        self.source = source
        self.target = target
        p = source.p
        self.comps: dict[int, np.ndarray] = {}
        for i in range(min(source.lo, target.lo), max(source.hi, target.hi) + 1):
            shape = (target.term(i).dim, source.term(i).dim)
            m = comps.get(i)
            if m is None:
                m = la.zeros(*shape)
            m = np.asarray(getattr(m, "matrix", m), dtype=np.int64).reshape(shape) % p
            if shape[0] and shape[1]:
                self.comps[i] = m
        if check:
            self.verify()

    @property
    def p(self) -> int:
        return self.source.p

    def comp(self, i: int) -> np.ndarray:
        m = self.comps.get(i)
        if m is None:
            return la.zeros(self.target.term(i).dim, self.source.term(i).dim)
        return m

    def component(self, i: int) -> ModuleMap:
        return ModuleMap(self.source.term(i), self.target.term(i), self.comp(i), check=False)

    def degrees(self) -> range:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def verify(self) -> None:
        if not is_chain_map(self):
            raise ChainMapError("not a chain map")

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        p = self.p
        degs = set(self.comps) & set(other.comps)
        return ChainMap(other.source, self.target, {i: la.mul(self.comps[i], other.comps[i], p) for i in degs}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: (-m) % self.p for i, m in self.comps.items()}, check=False)

    def shift(self, k: int = 1) -> "ChainMap":
        return ChainMap(self.source.shift(k), self.target.shift(k), {i - k: m for i, m in self.comps.items()}, check=False)


def is_chain_map(f: ChainMap) -> bool:
    p = f.p
    s, t = f.source, f.target
    for i in f.degrees():
        if not is_equivariant(s.term(i), t.term(i), f.comp(i)):
            return False
        lhs = la.mul(t.dmat(i), f.comp(i), p)
        rhs = la.mul(f.comp(i + 1), s.dmat(i), p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


# ---------------------------------------------------------------------------
# homology


@dataclass
class Homology:
    """H^i with the splitting data needed for induced maps."""

    module: Module
    cycles: np.ndarray  # columns: basis of Z^i inside term(i)
    cycles_inv: np.ndarray  # left inverse of ``cycles``
    proj: np.ndarray  # Z-coordinates -> H-coordinates
    section: np.ndarray  # H-coordinates -> Z-coordinates (linear)

    def cls(self, x: np.ndarray, p: int) -> np.ndarray:
        """Homology class of a cycle (columns of x)."""
        return la.chain(p, self.proj, self.cycles_inv, x)

    def rep(self, h: np.ndarray, p: int) -> np.ndarray:
        """A cycle representing the class h."""
        return la.chain(p, self.cycles, self.section, h)


def homology(c: Complex, i: int) -> Homology:
    p = c.p
    t = c.term(i)
    zb = la.kernel_basis(c.dmat(i), p)
    zmod, _ = submodule(t, zb)
    zinv = la.left_inverse(zb, p)
    bdry = la.mul(zinv, c.dmat(i - 1), p) if zb.shape[1] else la.zeros(0, c.term(i - 1).dim)
    q = quotient(zmod, bdry, name=f"H{i}")
    return Homology(q.module, zb, zinv, q.projection.matrix, q.section)


def homology_dim(c: Complex, i: int) -> int:
    p = c.p
    return c.term(i).dim - la.rank(c.dmat(i), p) - la.rank(c.dmat(i - 1), p)


def homology_dims(c: Complex) -> dict[int, int]:
    return {i: homology_dim(c, i) for i in c.degrees()}


def is_acyclic(c: Complex) -> bool:
    return all(homology_dim(c, i) == 0 for i in c.degrees())


def induced(f: ChainMap, i: int, hs: Homology | None = None, ht: Homology | None = None) -> ModuleMap:
    p = f.p
    hs = hs or homology(f.source, i)
    ht = ht or homology(f.target, i)
    m = la.chain(p, ht.proj, ht.cycles_inv, f.comp(i), hs.cycles, hs.section) if hs.module.dim and ht.module.dim else la.zeros(ht.module.dim, hs.module.dim)
    return ModuleMap(hs.module, ht.module, m, check=False)


def euler_characteristic(c: Complex) -> tuple[int, int]:
    terms = sum((-1) ** (i % 2) * c.term(i).dim for i in c.degrees())
    hom = sum((-1) ** (i % 2) * homology_dim(c, i) for i in c.degrees())
    return terms, hom


# ---------------------------------------------------------------------------
# cones


@dataclass
class Cone:
    complex: Complex
    inclusion: ChainMap  # target -> cone
    projection: ChainMap  # cone -> source[1]


def cone_complex(f: ChainMap) -> Complex:
    return cone(f).complex


def cone(f: ChainMap) -> Cone:
    """cone(f)^i = X^{i+1} + Y^i with d = [[-d_X, 0], [f, d_Y]]."""
    x, y = f.source, f.target
    a, p = x.algebra, x.p
    if x.is_zero() and y.is_zero():
        z = zero_complex(a)
        return Cone(z, ChainMap(y, z, {}, check=False), ChainMap(z, x.shift(1), {}, check=False))
    lo = min(x.lo - 1 if not x.is_zero() else y.lo, y.lo if not y.is_zero() else x.lo - 1)
    hi = max(x.hi - 1 if not x.is_zero() else y.hi, y.hi if not y.is_zero() else x.hi - 1)
    terms, sums = [], []
    for i in range(lo, hi + 1):
        ds = direct_sum([x.term(i + 1), y.term(i)], algebra=a)
        sums.append(ds)
        terms.append(ds.module)
    diffs = []
    for k, i in enumerate(range(lo, hi)):
        top = np.hstack([(-x.dmat(i + 1)) % p, la.zeros(x.term(i + 2).dim, y.term(i).dim)])
        bot = np.hstack([f.comp(i + 1), y.dmat(i)])
        diffs.append(np.vstack([top, bot]) % p)
    c = Complex(a, lo, terms, diffs, check=False)
    # inclusion Y -> cone and projection cone -> X[1]
    inc, prj = {}, {}
    for i in range(lo, hi + 1):
        dx, dy = x.term(i + 1).dim, y.term(i).dim
        inc[i] = np.vstack([la.zeros(dx, dy), la.eye(dy)])
        prj[i] = np.hstack([la.eye(dx), la.zeros(dx, dy)])
    return Cone(c, ChainMap(y, c, inc, check=False), ChainMap(c, x.shift(1), prj, check=False))


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f).complex)


def direct_sum_complex(cs: list[Complex], algebra: Algebra) -> Complex:
    nonzero = [c for c in cs if not c.is_zero()]
    if not nonzero:
        return zero_complex(algebra)
    lo = min(c.lo for c in nonzero)
    hi = max(c.hi for c in nonzero)
    terms = [direct_sum([c.term(i) for c in cs], algebra=algebra).module for i in range(lo, hi + 1)]
    diffs = [la.block_diag([c.dmat(i) for c in cs]) for i in range(lo, hi)]
    return Complex(algebra, lo, terms, diffs, check=False)


# ---------------------------------------------------------------------------
# normal form


@dataclass
class NormalForm:
    complex: Complex
    comparison: ChainMap  # complex -> original, a quasi-isomorphism


def _is_projective_fast(m: Module) -> bool:
    return projective_cover(m).projective.module.dim == m.dim


def has_normal_shape(c: Complex) -> bool:
    """Projective above the lowest degree; the lowest term is projective or embeds."""
    if c.is_zero():
        return True
    if not all(_is_projective_fast(c.term(i)) for i in range(c.lo + 1, c.hi + 1)):
        return False
    low = c.term(c.lo)
    return la.rank(c.dmat(c.lo), c.p) == low.dim or _is_projective_fast(low)


def syzygy_normal_form(c: Complex) -> NormalForm:
    """A quasi-isomorphic complex with projective terms above its lowest degree.

    Built from the top down: P^i is the projective cover of
    W^i = {(x, y) in P^{i+1} + c^i : d x = 0, phi x = d y}; below the original
    support the last W (a syzygy-like cycle module) is kept as is.
    """
    if has_normal_shape(c):
        return NormalForm(c, c.identity())
    a, p = c.algebra, c.p
    lo, hi = c.lo, c.hi
    proj: dict[int, Module] = {}
    dd: dict[int, np.ndarray] = {}
    phi: dict[int, np.ndarray] = {}
    zero = zero_module(a)
    for i in range(hi, lo - 2, -1):
        up = proj.get(i + 1, zero)
        up_d = dd.get(i + 1, la.zeros(proj.get(i + 2, zero).dim, up.dim))
        up_phi = phi.get(i + 1, la.zeros(c.term(i + 1).dim, up.dim))
        ds = direct_sum([up, c.term(i)], algebra=a)
        # (x, y) -> (d x, phi x - d_c y)
        top = np.hstack([up_d, la.zeros(up_d.shape[0], c.term(i).dim)])
        bot = np.hstack([up_phi, (-c.dmat(i)) % p])
        cond = np.vstack([top, bot]) % p
        wb = la.kernel_basis(cond, p)
        w, winc = submodule(ds.module, wb)
        if i == lo - 1:
            proj[i] = w
            dd[i] = la.mul(ds.projections[0].matrix, winc.matrix, p)
            phi[i] = la.zeros(0, w.dim)
            break
        cov = projective_cover(w)
        pi = la.mul(winc.matrix, cov.epi.matrix, p)
        proj[i] = cov.projective.module
        dd[i] = la.mul(ds.projections[0].matrix, pi, p)
        phi[i] = la.mul(ds.projections[1].matrix, pi, p)
    degs = sorted(proj)
    terms = [proj[i] for i in degs]
    diffs = [dd[i] for i in degs[:-1]]
    n = Complex(a, degs[0], terms, diffs, check=False)
    q = ChainMap(n, c, {i: phi[i] for i in degs if phi[i].size}, check=False)
    return NormalForm(n, q)
