"""mod add(t) realized as mod End(t).

``psi`` sends a module M to Hom(t, M), a right End(t)-module under
precomposition.  ``phi`` goes back: present an End(t)-module by projectives,
read each projective as Hom(t, t_j) for a summand t_j of t, pull the
presentation matrix back to a map between objects of add(t) and take its
cokernel.  Towers built over End(t) are transported through ``phi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra
from .complexes import ChainMap, Complex, cone
from .errors import GldimAtCap, IsoUncertified, NotAGenerator
from .modules import (
    AtLeast,
    Module,
    ModuleMap,
    Projective,
    direct_sum,
    find_isomorphism,
    global_dim,
    hom_matrices,
    in_add,
    is_equivariant,
    projective_resolution,
    quotient,
    regular_module,
    submodule,
)
from .towers import (
    ConeTriangle,
    Leaf,
    Node,
    SESTriangle,
    Step,
    SubcatOracle,
    WitnessTower,
    resolving_tower,
)


def _coords(basis: np.ndarray, p: int) -> np.ndarray:
    """Left inverse of a (vectorized) basis given as an array of shape (h, r, c)."""
    flat = basis.reshape(basis.shape[0], -1).T
    return la.left_inverse(flat, p)


@dataclass
class PhiValue:
    """Phi(F) with the presentation data used to build it."""

    module: Module
    x0: Module  # object of add(t) covering Phi(F)
    x1: Module
    alpha: np.ndarray  # x1 -> x0
    projection: np.ndarray  # x0 -> module
    section: np.ndarray  # module -> x0 (linear)
    p0: Projective
    epi: np.ndarray  # P0 -> F
    summands0: list[int]


@dataclass
class EndContext:
    t: Module
    algebra: Algebra  # End(t)
    basis: np.ndarray  # (n, dim t, dim t): the basis of End(t) as matrices
    pieces: list[np.ndarray] = field(default_factory=list)  # U_j: basis of t_j = im(e_j) in t
    pieces_inv: list[np.ndarray] = field(default_factory=list)
    summands: list[Module] = field(default_factory=list)  # t_j as Lambda-modules
    _psi_cache: dict = field(default_factory=dict)
    _phi_cache: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.t.p

    @property
    def base(self) -> Algebra:
        return self.t.algebra

    def element_matrix(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("k,kab->ab", np.asarray(x, dtype=np.int64), self.basis) % self.p

    # -- psi ---------------------------------------------------------------
    def _hom_data(self, m: Module):
        key = _module_key(m)
        hit = self._psi_cache.get(key)
        if hit is None:
            hb = hom_matrices(self.t, m)
            inv = _coords(hb, self.p) if hb.shape[0] else la.zeros(0, m.dim * self.t.dim)
            e = self.algebra
            act = np.zeros((e.dim, hb.shape[0], hb.shape[0]), dtype=np.int64)
            for j in range(e.dim):
                if hb.shape[0] == 0:
                    continue
                imgs = np.stack([la.mul(h, self.basis[j], self.p).reshape(-1) for h in hb], axis=1)
                act[j] = la.mul(inv, imgs, self.p)
            mod = Module(e, act, name=f"Psi({m.name})" if m.name else "")
            hit = (hb, inv, mod)
            self._psi_cache[key] = hit
        return hit

    def psi(self, m: Module) -> Module:
        return self._hom_data(m)[2]

    def psi_map(self, g: ModuleMap) -> ModuleMap:
        hs, _, ms = self._hom_data(g.source)
        _, inv_t, mt = self._hom_data(g.target)
        if hs.shape[0] == 0 or mt.dim == 0:
            return ModuleMap(ms, mt, la.zeros(mt.dim, ms.dim), check=False)
        imgs = np.stack([la.mul(g.matrix, h, self.p).reshape(-1) for h in hs], axis=1)
        return ModuleMap(ms, mt, la.mul(inv_t, imgs, self.p), check=False)

    def as_hom(self, m: Module, v: np.ndarray) -> np.ndarray:
        """The Lambda-map t -> m represented by a vector of psi(m)."""
        hb = self._hom_data(m)[0]
        return np.einsum("h,hab->ab", np.asarray(v, dtype=np.int64).reshape(-1), hb) % self.p

    def psi_complex(self, c: Complex) -> Complex:
        terms = [self.psi(x) for x in c.terms]
        diffs = [self.psi_map(c.diff(i)).matrix for i in range(c.lo, c.hi)]
        return Complex(self.algebra, c.lo, terms, diffs, check=False)

    # -- phi ---------------------------------------------------------------
    def _block(self, x: np.ndarray, src: int, tgt: int) -> np.ndarray:
        """Lambda-map t_src -> t_tgt for x in e_tgt End(t) e_src."""
        return la.chain(self.p, self.pieces_inv[tgt], self.element_matrix(x), self.pieces[src])

    def _sum_of_pieces(self, idx: list[int]) -> Module:
        return direct_sum([self.summands[j] for j in idx], algebra=self.base).module

    def _pullback(self, P1: Projective, P0: Projective, d: np.ndarray) -> np.ndarray:
        """Block matrix of the add(t) map corresponding to d: P1 -> P0."""
        p = self.p
        rows = []
        for l, s in enumerate(P0.summands):
            row = []
            for k, r in enumerate(P1.summands):
                v = la.mul(d, P1.generators[:, [k]], p)[:, 0]
                x = P0.element_of(v, l)
                row.append(self._block(x, r, s))
            rows.append(row)
        if not P0.summands:
            return la.zeros(0, sum(self.summands[r].dim for r in P1.summands))
        if not P1.summands:
            return la.zeros(sum(self.summands[s].dim for s in P0.summands), 0)
        return np.block(rows) % p

    def _phi_from(self, f: Module, pad: int) -> PhiValue:
        res = projective_resolution(f, 1, pad=pad)
        P0, P1 = res.terms
        alpha = self._pullback(P1, P0, res.maps[1].matrix)
        x0 = self._sum_of_pieces(P0.summands)
        x1 = self._sum_of_pieces(P1.summands)
        if not is_equivariant(x1, x0, alpha):
            raise AssertionError("phi: pulled-back presentation is not a module map")
        q = quotient(x0, la.column_basis(alpha, self.p) if alpha.size else la.zeros(x0.dim, 0), name="Phi")
        return PhiValue(q.module, x0, x1, alpha, q.projection.matrix, q.section, P0, res.maps[0].matrix, list(P0.summands))

    def phi_value(self, f: Module) -> PhiValue:
        key = _module_key(f)
        hit = self._phi_cache.get(key)
        if hit is None:
            hit = self._phi_from(f, 0)
            self._phi_cache[key] = hit
        return hit

    def phi(self, f: Module) -> Module:
        return self.phi_value(f).module

    def phi_check(self, f: Module, seed: int = 0) -> bool:
        """Recompute phi from a padded presentation and certify an isomorphism."""
        a = self.phi_value(f).module
        b = self._phi_from(f, 1).module
        iso, certain = find_isomorphism(a, b, seed=seed)
        if iso is None and not certain:
            raise IsoUncertified("phi: padded presentation gave an uncertified result")
        return iso is not None

    def _lift_to_p0(self, pv: PhiValue, w: np.ndarray) -> np.ndarray:
        x = la.solve(pv.epi, w.reshape(-1, 1), self.p)
        if x is None:
            raise AssertionError("phi_map: element not in the image of the cover")
        return x[:, 0]

    def _x0_map(self, src: PhiValue, tgt: PhiValue, g: np.ndarray) -> np.ndarray:
        """Lift of g: F -> G to the add(t) covers, as a block matrix x0(F) -> x0(G)."""
        p = self.p
        e = self.algebra
        idem = e.primitive_idempotents()
        cols = []
        for k, s in enumerate(src.summands0):
            img = la.chain(p, g, src.epi, src.p0.generators[:, [k]])[:, 0]
            y = self._lift_to_p0(tgt, img)
            y = la.mul(tgt.p0.module.act(idem[s]), y.reshape(-1, 1), p)[:, 0]
            blocks = [self._block(tgt.p0.element_of(y, l), s, s2) for l, s2 in enumerate(tgt.summands0)]
            cols.append(np.vstack(blocks) if blocks else la.zeros(0, self.summands[s].dim))
        if not cols:
            return la.zeros(tgt.x0.dim, 0)
        return np.hstack(cols) % p

    def phi_map(self, g: ModuleMap) -> ModuleMap:
        src, tgt = self.phi_value(g.source), self.phi_value(g.target)
        if src.module.dim == 0 or tgt.module.dim == 0:
            return ModuleMap(src.module, tgt.module, la.zeros(tgt.module.dim, src.module.dim), check=False)
        b0 = self._x0_map(src, tgt, g.matrix)
        m = la.chain(self.p, tgt.projection, b0, src.section)
        return ModuleMap(src.module, tgt.module, m, check=False)

    def phi_complex(self, c: Complex) -> Complex:
        terms = [self.phi(x) for x in c.terms]
        diffs = [self.phi_map(c.diff(i)).matrix for i in range(c.lo, c.hi)]
        return Complex(self.base, c.lo, terms, diffs, check=False)

    def phi_chain_map(self, f: ChainMap, source: Complex | None = None, target: Complex | None = None) -> ChainMap:
        src = source if source is not None else self.phi_complex(f.source)
        tgt = target if target is not None else self.phi_complex(f.target)
        comps = {i: self.phi_map(f.component(i)).matrix for i in f.degrees()}
        return ChainMap(src, tgt, comps, check=False)

    # -- counit and adjunction --------------------------------------------
    def counit(self, m: Module) -> ModuleMap:
        """The evaluation map Phi(Psi(m)) -> m."""
        pv = self.phi_value(self.psi(m))
        p = self.p
        cols = []
        for k, s in enumerate(pv.summands0):
            v = la.mul(pv.epi, pv.p0.generators[:, [k]], p)[:, 0]
            h = self.as_hom(m, v)
            cols.append(la.mul(h, self.pieces[s], p))
        ev = np.hstack(cols) if cols else la.zeros(m.dim, 0)
        if pv.alpha.size and la.mul(ev, pv.alpha, p).any():
            raise AssertionError("counit: evaluation does not vanish on the relations")
        return ModuleMap(pv.module, m, la.mul(ev, pv.section, p), check=False)

    def counit_is_iso(self, m: Module) -> bool:
        eps = self.counit(m)
        return eps.source.dim == m.dim and eps.rank() == m.dim and is_equivariant(eps.source, m, eps.matrix)

    def adjunction_map(self, f: Module, m: Module) -> np.ndarray:
        """Images of a basis of Hom(Phi f, m) in Hom(f, Psi m), as columns."""
        p = self.p
        pv = self.phi_value(f)
        psim = self.psi(m)
        _, inv_m, _ = self._hom_data(m)
        cols = []
        for u in hom_matrices(pv.module, m):
            up = la.mul(u, pv.projection, p)  # x0 -> m
            # theta: P0 -> Psi(m); generator basis of P0 summand l -> map t -> m
            theta_cols = []
            offs = 0
            blocks = []
            for l, s in enumerate(pv.summands0):
                dim_s = self.summands[s].dim
                blocks.append(up[:, offs : offs + dim_s])
                offs += dim_s
            for c in range(pv.p0.module.dim):
                y = la.eye(pv.p0.module.dim)[:, c]
                hmap = la.zeros(m.dim, self.t.dim)
                for l, s in enumerate(pv.summands0):
                    x = pv.p0.element_of(y, l)
                    hmap = (hmap + la.chain(p, blocks[l], self.pieces_inv[s], self.element_matrix(x))) % p
                theta_cols.append(la.mul(inv_m, hmap.reshape(-1, 1), p)[:, 0])
            theta = np.column_stack(theta_cols) if theta_cols else la.zeros(psim.dim, 0)
            sec = la.solve(pv.epi, la.eye(f.dim), p) if f.dim else la.zeros(pv.p0.module.dim, 0)
            g = la.mul(theta, sec, p)
            if not is_equivariant(f, psim, g):
                raise AssertionError("adjunction: induced map is not a module map")
            cols.append(g.reshape(-1))
        if not cols:
            return la.zeros(psim.dim * f.dim, 0)
        return np.column_stack(cols) % p

    def check_adjunction(self, f: Module, m: Module) -> bool:
        left = hom_matrices(self.phi(f), m).shape[0]
        right = hom_matrices(f, self.psi(m)).shape[0]
        if left != right:
            return False
        imgs = self.adjunction_map(f, m)
        return la.rank(imgs, self.p) == left


def _module_key(m: Module) -> tuple:
    return (id(m.algebra), m.dim, m.action.tobytes())


def end_algebra(t: Module, seed: int = 0) -> EndContext:
    if t.dim == 0:
        raise ValueError("end_algebra: t must be nonzero")
    p = t.p
    hb = hom_matrices(t, t)
    n = hb.shape[0]
    inv = _coords(hb, p)
    table = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            table[i, j] = la.mul(inv, la.mul(hb[i], hb[j], p).reshape(-1, 1), p)[:, 0]
    e = Algebra(p, table, labels=[f"phi{i}" for i in range(n)], name="End(t)")
    ctx = EndContext(t, e, hb)
    for idem in e.primitive_idempotents(seed=seed):
        em = ctx.element_matrix(idem)
        u = la.column_basis(em, p)
        ctx.pieces.append(u)
        ctx.pieces_inv.append(la.left_inverse(u, p))
        ctx.summands.append(submodule(t, u, name="t_j")[0])
    return ctx


def is_generator(t: Module) -> bool:
    return in_add(t, regular_module(t.algebra))


def gldim_end(ctx: EndContext, cap: int = 64) -> int | AtLeast:
    return global_dim(ctx.algebra, cap)


# ---------------------------------------------------------------------------
# tower transport


class _Transport:
    def __init__(self, ctx: EndContext):
        self.ctx = ctx
        self.cx: dict[int, Complex] = {}

    def complex(self, c: Complex) -> Complex:
        out = self.cx.get(id(c))
        if out is None:
            out = self.ctx.phi_complex(c)
            self.cx[id(c)] = out
        return out

    def chain(self, f: ChainMap) -> ChainMap:
        return self.ctx.phi_chain_map(f, self.complex(f.source), self.complex(f.target))

    def steps(self, steps: list[Step]) -> list[Step]:
        return [Step(self.chain(s.map), s.forward) for s in steps]

    def cone_comparison(self, f: ChainMap, cn: Complex, phi_cone: Complex, phi_f: ChainMap) -> Step:
        """Backward step Phi(cone f) <- cone(Phi f), componentwise [Phi iota_X, Phi iota_Y]."""
        ctx = self.ctx
        x, y = f.source, f.target
        lam_cone = cone(phi_f).complex
        comps = {}
        for i in cn.degrees():
            dx, dy = x.term(i + 1).dim, y.term(i).dim
            tgt = cn.term(i)
            ix = ModuleMap(x.term(i + 1), tgt, np.vstack([la.eye(dx), la.zeros(dy, dx)]), check=False)
            iy = ModuleMap(y.term(i), tgt, np.vstack([la.zeros(dx, dy), la.eye(dy)]), check=False)
            comps[i] = np.hstack([ctx.phi_map(ix).matrix, ctx.phi_map(iy).matrix])
        return Step(ChainMap(lam_cone, phi_cone, comps, check=False), False)

    def tree(self, t: Leaf | Node) -> Leaf | Node:
        if isinstance(t, Leaf):
            return Leaf(self.complex(t.layer), self.steps(t.comparison))
        left = self.tree(t.left)
        right = self.tree(t.right)
        tri = t.triangle
        if isinstance(tri, SESTriangle):
            ntri = SESTriangle(
                self.complex(tri.left),
                self.complex(tri.middle),
                self.complex(tri.right),
                self.chain(tri.inc),
                self.chain(tri.proj),
            )
        else:
            pf = self.chain(tri.map)
            ntri = ConeTriangle(pf, cone(pf).complex)
            right.comparison = right.comparison + [self.cone_comparison(tri.map, tri.cone, self.complex(tri.cone), pf)]
        return Node(ntri, left, right, self.steps(t.comparison))


def gldim_bound_tower(ctx: EndContext, c: Complex, seed: int = 0, cap: int = 64) -> WitnessTower:
    """Add(t)-tower for c of depth at most gldim End(t) + 1, built over End(t) and transported."""
    if not is_generator(ctx.t):
        raise NotAGenerator("t is not a generator: no epimorphism from a sum of copies of t onto A")
    d = gldim_end(ctx, cap)
    if isinstance(d, AtLeast):
        raise GldimAtCap(f"gldim End(t) {d}")
    pc = ctx.psi_complex(c)
    we = resolving_tower(pc, SubcatOracle.proj(), d, seed=seed)
    tr = _Transport(ctx)
    root = tr.tree(we.root)
    phipsi = tr.complex(pc)
    eps = ChainMap(phipsi, c, {i: ctx.counit(c.term(i)).matrix for i in c.degrees()}, check=False)
    # the E-side root claims psi(c); after transport it claims phi(psi(c)), then the counit reaches c
    root.comparison = root.comparison + [Step(eps, True)]
    return WitnessTower(c.algebra, SubcatOracle.add(ctx.t), c, root, root.depth, strategy=f"end-algebra(gldim={d})")
