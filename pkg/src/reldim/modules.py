"""The module category mod A for a finite-dimensional algebra A.

A right module of dimension d is stored as one d x d matrix per algebra basis
element: ``action[i]`` sends the coordinates of v to those of v * b_i.  Since
the action is on the right, ``action[j] @ action[i] == sum_k table[i, j, k] action[k]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import linalg as la
from .algebra import Algebra
from .errors import InputError, ReldimError

DEFAULT_CAP = 64


class ModuleError(ReldimError):
    code = "module-action"


class Module:
    def __init__(self, algebra: Algebra, action, name: str = "", check: bool = True):
        self.algebra = algebra
        p = algebra.p
        action = np.asarray(action, dtype=np.int64)
        if action.ndim != 3 or action.shape[0] != algebra.dim or action.shape[1] != action.shape[2]:
            raise ModuleError(f"action must have shape ({algebra.dim}, d, d), got {action.shape}")
        self.action = action % p
        self.action.setflags(write=False)
        self.dim = action.shape[1]
        self.name = name
        if check:
            self.verify()

    @property
    def p(self) -> int:
        return self.algebra.p

    def act(self, x: np.ndarray) -> np.ndarray:
        """Matrix of v -> v * x for an algebra element x."""
        return np.einsum("i,ijk->jk", x, self.action) % self.p

    def verify(self) -> None:
        a, p = self.algebra, self.p
        if not np.array_equal(self.act(a.unit), la.eye(self.dim)):
            raise ModuleError("unit does not act as the identity")
        if self.dim == 0:
            return
        lhs = np.einsum("jab,ibc->ijac", self.action, self.action) % p
        rhs = np.einsum("ijk,kac->ijac", a.table, self.action) % p
        if not np.array_equal(lhs, rhs):
            raise ModuleError("action does not respect the multiplication table")

    def same(self, other: "Module") -> bool:
        """Structural equality (identical matrices), not isomorphism."""
        return (
            self.algebra.same_as(other.algebra)
            and self.dim == other.dim
            and np.array_equal(self.action, other.action)
        )

    def identity(self) -> "ModuleMap":
        return ModuleMap(self, self, la.eye(self.dim), check=False)

    def zero_map(self, other: "Module") -> "ModuleMap":
        return ModuleMap(self, other, la.zeros(other.dim, self.dim), check=False)

    def dimension_vector(self) -> tuple[int, ...]:
        return tuple(la.rank(self.act(e), self.p) if self.dim else 0 for e in self.algebra.primitive_idempotents())

    def __repr__(self) -> str:
        nm = f" {self.name}" if self.name else ""
        return f"<Module{nm} dim={self.dim} over {self.algebra!r}>"


class ModuleMap:
    def __init__(self, source: Module, target: Module, matrix, check: bool = True):
        self.source = source
        self.target = target
        m = np.asarray(matrix, dtype=np.int64).reshape(target.dim, source.dim) % source.p
        self.matrix = m
        if check:
            self.verify()

    @property
    def p(self) -> int:
        return self.source.p

    def verify(self) -> None:
        if not is_equivariant(self.source, self.target, self.matrix):
            raise ModuleError("map is not equivariant")

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(other.source, self.target, la.mul(self.matrix, other.matrix, self.p), check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, (self.matrix + other.matrix) % self.p, check=False)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, (-self.matrix) % self.p, check=False)

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, (c * self.matrix) % self.p, check=False)

    def rank(self) -> int:
        return la.rank(self.matrix, self.p)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def __repr__(self) -> str:
        return f"<ModuleMap {self.source.dim}->{self.target.dim}>"


def is_equivariant(m: Module, n: Module, f: np.ndarray) -> bool:
    if f.shape != (n.dim, m.dim):
        return False
    if m.dim == 0 or n.dim == 0:
        return True
    p = m.p
    lhs = np.einsum("ab,ibc->iac", f, m.action) % p
    rhs = np.einsum("iab,bc->iac", n.action, f) % p
    return np.array_equal(lhs, rhs)


# ---------------------------------------------------------------------------
# hom spaces


def hom_matrices(m: Module, n: Module) -> np.ndarray:
    """Basis of Hom(m, n) as an array of shape (h, dim n, dim m)."""
    if not m.algebra.same_as(n.algebra):
        raise InputError("hom: modules over different algebras")
    dm, dn, p = m.dim, n.dim, m.p
    if dm == 0 or dn == 0:
        return np.zeros((0, dn, dm), dtype=np.int64)
    gens = m.algebra.generators()
    rows = la.zeros(0, dm * dn)
    for g in range(gens.shape[1]):
        x = gens[:, g]
        am, an = m.act(x), n.act(x)
        block = (np.kron(la.eye(dn), am.T) - np.kron(an, la.eye(dm))) % p
        rows = la.row_space(np.vstack([rows, block]), p)
        if rows.shape[0] == dm * dn:
            return np.zeros((0, dn, dm), dtype=np.int64)
    ker = la.kernel_basis(rows, p) if rows.shape[0] else la.eye(dm * dn)
    return np.ascontiguousarray(ker.T.reshape(-1, dn, dm))


def hom_basis(m: Module, n: Module) -> list[ModuleMap]:
    return [ModuleMap(m, n, f, check=False) for f in hom_matrices(m, n)]


def hom_dim(m: Module, n: Module) -> int:
    return hom_matrices(m, n).shape[0]


# ---------------------------------------------------------------------------
# constructions


def submodule(m: Module, basis: np.ndarray, name: str = "") -> tuple[Module, ModuleMap]:
    """The submodule spanned by the columns of ``basis`` (assumed invariant)."""
    p = m.p
    basis = np.asarray(basis, dtype=np.int64) % p
    k = basis.shape[1]
    linv = la.left_inverse(basis, p)
    act = np.einsum("ab,ibc,cd->iad", linv, m.action, basis) % p if k else np.zeros((m.algebra.dim, 0, 0), dtype=np.int64)
    sub = Module(m.algebra, act, name=name)
    return sub, ModuleMap(sub, m, basis, check=False)


@dataclass
class Quotient:
    module: Module
    projection: ModuleMap
    section: np.ndarray  # linear (not equivariant) right inverse of the projection


def quotient(m: Module, basis: np.ndarray, name: str = "") -> Quotient:
    """m / span(basis), with a chosen linear section."""
    p = m.p
    basis = np.asarray(basis, dtype=np.int64)
    if basis.ndim != 2:
        basis = basis.reshape(m.dim, -1)
    basis = la.column_basis(basis % p, p)
    comp = la.complement(basis, p)
    change = np.hstack([basis, comp])
    inv = la.inverse(change, p)
    proj = inv[basis.shape[1] :]
    q = comp.shape[1]
    act = np.einsum("ab,ibc,cd->iad", proj, m.action, comp) % p if q else np.zeros((m.algebra.dim, 0, 0), dtype=np.int64)
    mod = Module(m.algebra, act, name=name)
    return Quotient(mod, ModuleMap(m, mod, proj, check=False), comp)


@dataclass
class Factorization:
    kernel: Module
    kernel_inclusion: ModuleMap
    image: Module
    image_inclusion: ModuleMap
    coimage_map: ModuleMap  # source -> image
    cokernel: Module
    cokernel_projection: ModuleMap


def factorize(f: ModuleMap) -> Factorization:
    p = f.p
    kb = la.kernel_basis(f.matrix, p)
    ker, kin = submodule(f.source, kb, "ker")
    ib = la.column_basis(f.matrix, p)
    im, iin = submodule(f.target, ib, "im")
    to_im = ModuleMap(f.source, im, la.mul(la.left_inverse(ib, p), f.matrix, p), check=False)
    q = quotient(f.target, ib, "coker")
    return Factorization(ker, kin, im, iin, to_im, q.module, q.projection)


@dataclass
class DirectSum:
    module: Module
    inclusions: list[ModuleMap]
    projections: list[ModuleMap]


def direct_sum(mods: list[Module], algebra: Algebra | None = None) -> DirectSum:
    if not mods:
        if algebra is None:
            raise ValueError("empty direct sum needs the algebra")
        z = zero_module(algebra)
        return DirectSum(z, [], [])
    a = mods[0].algebra
    n = a.dim
    act = np.stack([la.block_diag([m.action[i] for m in mods]) for i in range(n)]) if n else np.zeros((0, 0, 0), np.int64)
    total = sum(m.dim for m in mods)
    s = Module(a, act.reshape(n, total, total), check=False)
    incs, projs = [], []
    off = 0
    for m in mods:
        e = la.zeros(total, m.dim)
        e[off : off + m.dim] = la.eye(m.dim)
        incs.append(ModuleMap(m, s, e, check=False))
        projs.append(ModuleMap(s, m, e.T.copy(), check=False))
        off += m.dim
    return DirectSum(s, incs, projs)


def zero_module(a: Algebra) -> Module:
    return Module(a, np.zeros((a.dim, 0, 0), dtype=np.int64), name="0", check=False)


def regular_module(a: Algebra) -> Module:
    key = "regular"
    if key not in a._cache:
        act = np.stack([a.right_matrix(a.basis_vector(i)) for i in range(a.dim)])
        a._cache[key] = Module(a, act, name="A")
    return a._cache[key]


def dual(m: Module) -> Module:
    """Vector-space dual, a right module over the opposite algebra."""
    return Module(m.algebra.opposite(), np.transpose(m.action, (0, 2, 1)), name=f"D({m.name})" if m.name else "")


def base_change(m: Module, g: np.ndarray) -> Module:
    """The module with coordinates changed by the invertible matrix g (isomorphic to m)."""
    p = m.p
    gi = la.inverse(g, p)
    return Module(m.algebra, np.einsum("ab,ibc,cd->iad", g, m.action, gi) % p, check=False)


def module_from_arrows(a: Algebra, dims: dict[str, int] | list[int], arrow_maps: dict[str, np.ndarray], name: str = "") -> Module:
    """Build a module over a quiver algebra from a representation."""
    q = a.quiver
    if q is None:
        raise InputError("algebra has no quiver presentation")
    if not isinstance(dims, dict):
        dims = dict(zip(q.vertices, dims))
    off = {}
    tot = 0
    for v in q.vertices:
        off[v] = tot
        tot += int(dims.get(v, 0))
    p = a.p
    arrows = {}
    for nm, s, t in q.arrows:
        blk = la.zeros(tot, tot)
        mat_ = np.asarray(arrow_maps.get(nm, la.zeros(dims[t], dims[s])), dtype=np.int64)
        if mat_.shape != (dims[t], dims[s]):
            raise InputError(f"arrow {nm}: expected a {dims[t]}x{dims[s]} matrix, got {mat_.shape}")
        blk[off[t] : off[t] + dims[t], off[s] : off[s] + dims[s]] = mat_ % p
        arrows[nm] = blk
    act = []
    for pth in a.paths:
        if pth.length == 0:
            e = la.zeros(tot, tot)
            v = pth.source
            e[off[v] : off[v] + dims[v], off[v] : off[v] + dims[v]] = la.eye(dims[v])
            act.append(e)
        else:
            r = la.eye(tot)
            for nm in pth.arrows:
                r = la.mul(arrows[nm], r, p)
            act.append(r)
    return Module(a, np.stack(act) if act else np.zeros((0, tot, tot), np.int64), name=name)


# ---------------------------------------------------------------------------
# projectives and covers


@dataclass
class Projective:
    """A direct sum of indecomposable projectives e_i A, with generators."""

    module: Module
    summands: list[int]  # indices into algebra.primitive_idempotents()
    generators: np.ndarray  # column k is the generator e_{summands[k]} of summand k
    bases: list[np.ndarray]  # per summand: basis of e_i A as vectors in A
    offsets: list[int]

    def element_of(self, v: np.ndarray, k: int) -> np.ndarray:
        """Algebra element represented by the k-th summand component of v."""
        b = self.bases[k]
        seg = v[self.offsets[k] : self.offsets[k] + b.shape[1]]
        return la.mul(b, seg.reshape(-1, 1), self.module.p)[:, 0]


def indecomposable_projective(a: Algebra, i: int) -> tuple[Module, np.ndarray, np.ndarray]:
    key = ("P", i)
    if key not in a._cache:
        p = a.p
        e = a.primitive_idempotents()[i]
        basis = la.column_basis(a.left_matrix(e), p)
        linv = la.left_inverse(basis, p)
        act = np.stack([la.chain(p, linv, a.right_matrix(a.basis_vector(j)), basis) for j in range(a.dim)])
        mod = Module(a, act, name=f"P{i}")
        gen = la.mul(linv, e.reshape(-1, 1), p)[:, 0]
        a._cache[key] = (mod, basis, gen)
    return a._cache[key]


def projective(a: Algebra, summands: list[int]) -> Projective:
    parts = [indecomposable_projective(a, i) for i in summands]
    ds = direct_sum([q[0] for q in parts], algebra=a)
    total = ds.module.dim
    gens = la.zeros(total, len(summands))
    offs = []
    off = 0
    for k, (mod, _, g) in enumerate(parts):
        gens[off : off + mod.dim, k] = g
        offs.append(off)
        off += mod.dim
    return Projective(ds.module, list(summands), gens, [q[1] for q in parts], offs)


def map_from_projective(P: Projective, target: Module, images: list[np.ndarray]) -> ModuleMap:
    """The module map sending generator k to images[k] (which must satisfy w = w*e)."""
    p = P.module.p
    cols = []
    for k, w in enumerate(images):
        b = P.bases[k]
        w = np.asarray(w, dtype=np.int64).reshape(-1)
        for c in range(b.shape[1]):
            cols.append(la.mul(target.act(b[:, c]), w.reshape(-1, 1), p)[:, 0])
    m = np.column_stack(cols) if cols else la.zeros(target.dim, 0)
    return ModuleMap(P.module, target, m.reshape(target.dim, P.module.dim), check=False)


def hom_from_projective(P: Projective, n: Module) -> np.ndarray:
    """Basis of Hom(P, n) via generator images (Yoneda): shape (h, dim n, dim P)."""
    a = n.algebra
    p = n.p
    idem = a.primitive_idempotents()
    out = []
    for k, i in enumerate(P.summands):
        ne = la.column_basis(n.act(idem[i]), p) if n.dim else la.zeros(0, 0)
        for c in range(ne.shape[1]):
            imgs = [np.zeros(n.dim, dtype=np.int64) for _ in P.summands]
            imgs[k] = ne[:, c]
            out.append(map_from_projective(P, n, imgs).matrix)
    if not out:
        return np.zeros((0, n.dim, P.module.dim), dtype=np.int64)
    return np.stack(out)


def radical_span(m: Module) -> np.ndarray:
    """Column basis of m * rad(A)."""
    rad = m.algebra.radical()
    if m.dim == 0 or rad.shape[1] == 0:
        return la.zeros(m.dim, 0)
    mats = np.hstack([m.act(rad[:, j]) for j in range(rad.shape[1])])
    return la.column_basis(mats, m.p)


def vertex_classes(a: Algebra) -> list[int]:
    """class_of[i] = index of the representative of e_i's isomorphism class."""
    key = "classes"
    if key not in a._cache:
        idem = a.primitive_idempotents()
        reps: list[int] = []
        classes = []
        for i in range(len(idem)):
            s = simple_module(a, i)
            for r in reps:
                if la.rank(s.act(idem[r]), a.p):
                    classes.append(r)
                    break
            else:
                reps.append(i)
                classes.append(i)
        a._cache[key] = classes
    return a._cache[key]


def class_representatives(a: Algebra) -> list[int]:
    cl = vertex_classes(a)
    return [i for i, c in enumerate(cl) if c == i]


def simple_module(a: Algebra, i: int) -> Module:
    key = ("S", i)
    if key not in a._cache:
        P = indecomposable_projective(a, i)[0]
        a._cache[key] = quotient(P, radical_span(P), name=f"S{i}").module
    return a._cache[key]


def top(m: Module) -> Quotient:
    return quotient(m, radical_span(m), name="top")


@dataclass
class Cover:
    projective: Projective
    epi: ModuleMap


def projective_cover(m: Module) -> Cover:
    a, p = m.algebra, m.p
    idem = a.primitive_idempotents()
    t = top(m)
    tm = t.module
    gens_top: list[np.ndarray] = []
    summands: list[int] = []
    generated = la.zeros(tm.dim, 0)
    full_action = [tm.action[b] for b in range(a.dim)]
    for r in class_representatives(a):
        if tm.dim == 0:
            break
        te = la.column_basis(tm.act(idem[r]), p)
        for c in range(te.shape[1]):
            v = te[:, [c]]
            if la.in_span(generated, v, p):
                continue
            orbit = np.hstack([la.mul(x, v, p) for x in full_action])
            generated = la.column_basis(np.hstack([generated, orbit]), p)
            gens_top.append(v[:, 0])
            summands.append(r)
    P = projective(a, summands)
    lifts = [la.mul(m.act(idem[i]), la.mul(t.section, v.reshape(-1, 1), p), p)[:, 0] for v, i in zip(gens_top, summands)]
    epi = map_from_projective(P, m, lifts)
    if epi.rank() != m.dim:
        raise ReldimError("projective cover: map is not surjective")
    return Cover(P, epi)


def syzygy_step(m: Module) -> tuple[Module, ModuleMap, Cover]:
    """Omega(m) with its inclusion into the cover."""
    cov = projective_cover(m)
    kb = la.kernel_basis(cov.epi.matrix, m.p)
    k, inc = submodule(cov.projective.module, kb, "syz")
    return k, inc, cov


def syzygy(m: Module, n: int) -> Module:
    cur = m
    for _ in range(n):
        if cur.dim == 0:
            return cur
        cur = syzygy_step(cur)[0]
    return cur


@dataclass
class Resolution:
    """P_0 -> m and P_{j+1} -> P_j; ``maps[0]`` is the augmentation."""

    target: Module
    terms: list[Projective]
    maps: list[ModuleMap]


def projective_resolution(m: Module, length: int, pad: int = 0, pad_summand: int = 0) -> Resolution:
    """Resolution with ``length + 1`` terms; ``pad`` adds spare summands per step (non-minimal)."""
    a, p = m.algebra, m.p
    terms: list[Projective] = []
    maps: list[ModuleMap] = []
    cur, cur_inc = m, None
    for j in range(length + 1):
        cov = projective_cover(cur)
        P = cov.projective
        epi = cov.epi
        if pad:
            big = projective(a, P.summands + [pad_summand] * pad)
            imgs = [la.mul(epi.matrix, P.generators[:, [k]], p)[:, 0] for k in range(len(P.summands))]
            imgs += [np.zeros(cur.dim, dtype=np.int64)] * pad
            P, epi = big, map_from_projective(big, cur, imgs)
        d = epi if cur_inc is None else cur_inc @ epi
        terms.append(P)
        maps.append(d)
        kb = la.kernel_basis(epi.matrix, p)
        cur, cur_inc = submodule(P.module, kb)
    return Resolution(m, terms, maps)


def ext_dim(m: Module, n: Module, i: int, pad: int = 0) -> int:
    """dim Ext^i(m, n): cohomology of Hom(P_*, n) at position i."""
    if i < 0:
        raise ValueError("i must be >= 0")
    if m.dim == 0 or n.dim == 0:
        return 0
    p = m.p
    res = projective_resolution(m, i + 1, pad=pad)

    def delta_rank(j: int) -> int:
        # Hom(P_j, n) -> Hom(P_{j+1}, n), g -> g o d_{j+1}
        hb = hom_from_projective(res.terms[j], n)
        if hb.shape[0] == 0:
            return 0
        d = res.maps[j + 1].matrix
        imgs = np.stack([la.mul(g, d, p).reshape(-1) for g in hb], axis=1)
        return la.rank(imgs, p)

    h_i = hom_from_projective(res.terms[i], n).shape[0]
    ker = h_i - delta_rank(i)
    im = delta_rank(i - 1) if i > 0 else 0
    return ker - im


@dataclass(frozen=True)
class AtLeast:
    """An unbounded answer: the quantity is at least ``bound``."""

    bound: int

    def __str__(self) -> str:
        return f">= {self.bound}"


def proj_dim(m: Module, cap: int = DEFAULT_CAP) -> int | AtLeast:
    cur = m
    if cur.dim == 0:
        return 0
    for n in range(cap):
        cur = syzygy_step(cur)[0]
        if cur.dim == 0:
            return n
    return AtLeast(cap)


def inj_dim(m: Module, cap: int = DEFAULT_CAP) -> int | AtLeast:
    return proj_dim(dual(m), cap)


def global_dim(a: Algebra, cap: int = DEFAULT_CAP) -> int | AtLeast:
    best = 0
    for r in class_representatives(a):
        d = proj_dim(simple_module(a, r), cap)
        if isinstance(d, AtLeast):
            return d
        best = max(best, d)
    return best


@dataclass
class HomDims:
    algebra: Algebra
    cap: int

    def pd(self, m: Module) -> int | AtLeast:
        return proj_dim(m, self.cap)

    def id(self, m: Module) -> int | AtLeast:
        return inj_dim(m, self.cap)

    @property
    def gldim(self) -> int | AtLeast:
        return global_dim(self.algebra, self.cap)


def hom_dims(a: Algebra, cap: int = DEFAULT_CAP) -> HomDims:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return HomDims(a, cap)


@dataclass
class Canonical:
    projectives: list[Module]
    simples: list[Module]
    injectives: list[Module]


def canonical_modules(a: Algebra) -> Canonical:
    k = len(a.primitive_idempotents())
    op = a.opposite()
    ps = [indecomposable_projective(a, i)[0] for i in range(k)]
    ss = [simple_module(a, i) for i in range(k)]
    inj = []
    for i in range(k):
        m = dual(indecomposable_projective(op, i)[0])
        inj.append(Module(a, m.action, name=f"I{i}"))
    return Canonical(ps, ss, inj)


# ---------------------------------------------------------------------------
# add-closure and isomorphism


def in_add(t: Module, x: Module) -> bool:
    """x in add(t): is id_x in the span of composites x -> t -> x?"""
    if x.dim == 0:
        return True
    if t.dim == 0:
        return False
    p = x.p
    g = hom_matrices(x, t)
    f = hom_matrices(t, x)
    if g.shape[0] == 0 or f.shape[0] == 0:
        return False
    comps = np.einsum("fab,gbc->fgac", f, g).reshape(-1, x.dim * x.dim) % p
    return la.in_span(comps.T.copy(), la.eye(x.dim).reshape(-1, 1), p)


def is_projective(x: Module) -> bool:
    return in_add(regular_module(x.algebra), x)


def find_isomorphism(m: Module, n: Module, seed: int = 0, tries: int = 64, exhaustive_limit: int = 4096) -> tuple[ModuleMap | None, bool]:
    """Search for an isomorphism m -> n.

    Returns ``(map, True)`` on success, ``(None, True)`` when non-isomorphism
    is certain, and ``(None, False)`` when the search bound was hit.
    """
    if m.dim != n.dim:
        return None, True
    if m.dim == 0:
        return ModuleMap(m, n, la.zeros(0, 0), check=False), True
    if m.dimension_vector() != n.dimension_vector():
        return None, True
    p = m.p
    hb = hom_matrices(m, n)
    h = hb.shape[0]
    if h == 0:
        return None, True

    def ok(f: np.ndarray) -> bool:
        return la.rank(f, p) == m.dim

    for f in hb:
        if ok(f):
            return ModuleMap(m, n, f, check=False), True
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        c = rng.integers(0, p, size=h)
        f = np.einsum("h,hab->ab", c, hb) % p
        if ok(f):
            return ModuleMap(m, n, f, check=False), True
    if p**h <= exhaustive_limit:
        for c in product(range(p), repeat=h):
            f = np.einsum("h,hab->ab", np.array(c, dtype=np.int64), hb) % p
            if ok(f):
                return ModuleMap(m, n, f, check=False), True
        return None, True
    return None, False


def is_isomorphic(m: Module, n: Module, seed: int = 0) -> bool | None:
    """True / False when certain, None when the search bound was hit."""
    f, certain = find_isomorphism(m, n, seed=seed)
    if f is not None:
        return True
    return False if certain else None
