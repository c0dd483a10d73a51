"""Witness towers: explicit certificates that a complex lies in <X>_n.

A tower is a binary tree.  A leaf holds a complex with zero differentials
whose terms all pass a subcategory oracle.  An inner node holds a triangle
(either a degreewise short exact sequence of complexes or a mapping cone)
and certifies its middle object from the two outer ones.  Every node also
carries a zigzag of quasi-isomorphisms from that natural object to the object
it claims; the root must claim the target complex exactly.

Depth is 1 for a leaf and additive at inner nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra
from .complexes import (
    ChainMap,
    Complex,
    cone,
    homology,
    is_quasi_iso,
    layer,
    syzygy_normal_form,
)
from .errors import HypothesisFailed, IsoUncertified, ReldimError
from .modules import (
    Module,
    direct_sum,
    ext_dim,
    find_isomorphism,
    hom_matrices,
    in_add,
    map_from_projective,
    projective_cover,
    quotient,
    regular_module,
    submodule,
    syzygy,
    zero_module,
)
from .serialize import enc_comps, enc_complex, enc_module

# ---------------------------------------------------------------------------
# subcategory oracles


@dataclass
class SubcatOracle:
    """Decidable membership test standing for a subcategory of mod A."""

    kind: str  # "proj" | "add" | "extorth" | "all"
    t: Module | None = None
    bound: int = 0

    @classmethod
    def proj(cls) -> "SubcatOracle":
        return cls("proj")

    @classmethod
    def add(cls, t: Module) -> "SubcatOracle":
        return cls("add", t)

    @classmethod
    def ext_orth(cls, t: Module, bound: int) -> "SubcatOracle":
        return cls("extorth", t, bound)

    @classmethod
    def all(cls) -> "SubcatOracle":
        return cls("all")

    def accepts(self, m: Module) -> bool:
        if m.dim == 0 or self.kind == "all":
            return True
        if self.kind == "proj":
            return in_add(regular_module(m.algebra), m)
        if self.kind == "add":
            return in_add(self.t, m)
        if self.kind == "extorth":
            return all(ext_dim(m, self.t, i) == 0 for i in range(1, self.bound + 1))
        raise ValueError(f"unknown oracle kind {self.kind!r}")

    def label(self) -> str:
        if self.kind == "extorth":
            return f"extorth(bound={self.bound})"
        return self.kind

    def encode(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.t is not None:
            d["t"] = enc_module(self.t)
        if self.kind == "extorth":
            d["bound"] = int(self.bound)
        return d


# ---------------------------------------------------------------------------
# tree


@dataclass
class Step:
    """One arrow of a zigzag; ``forward`` means current -> next."""

    map: ChainMap
    forward: bool = True

    def far_end(self) -> Complex:
        return self.map.target if self.forward else self.map.source


@dataclass
class SESTriangle:
    left: Complex
    middle: Complex
    right: Complex
    inc: ChainMap  # left -> middle
    proj: ChainMap  # middle -> right


@dataclass
class ConeTriangle:
    """left -> middle -> cone(map) -> left[1], with ``map``: left -> middle."""

    map: ChainMap
    cone: Complex

    @property
    def left(self) -> Complex:
        return self.map.source

    @property
    def middle(self) -> Complex:
        return self.map.target

    @property
    def right(self) -> Complex:
        return self.cone


@dataclass
class Leaf:
    layer: Complex
    comparison: list[Step] = field(default_factory=list)

    @property
    def natural(self) -> Complex:
        return self.layer

    @property
    def depth(self) -> int:
        return 1


@dataclass
class Node:
    triangle: SESTriangle | ConeTriangle
    left: "Leaf | Node"
    right: "Leaf | Node"
    comparison: list[Step] = field(default_factory=list)

    @property
    def natural(self) -> Complex:
        return self.triangle.middle

    @property
    def depth(self) -> int:
        return self.left.depth + self.right.depth


def claimed(t: Leaf | Node) -> Complex:
    cur = t.natural
    for s in t.comparison:
        cur = s.far_end()
    return cur


@dataclass
class WitnessTower:
    algebra: Algebra
    oracle: SubcatOracle
    target: Complex
    root: Leaf | Node
    depth: int
    strategy: str = ""

    def leaves(self) -> list[Leaf]:
        out: list[Leaf] = []

        def walk(t):
            if isinstance(t, Leaf):
                out.append(t)
            else:
                walk(t.left)
                walk(t.right)

        walk(self.root)
        return out


# ---------------------------------------------------------------------------
# Z/B decomposition


def _leaf(c: Complex) -> Leaf:
    return Leaf(c, [])


def zb_triangle(n: Complex) -> SESTriangle:
    """0 -> Z -> n -> n/Z -> 0 with Z^j = ker d^j; both outer terms have zero differential."""
    a, p = n.algebra, n.p
    zmods, qmods, inc, prj = [], [], {}, {}
    for j in n.degrees():
        zb = la.kernel_basis(n.dmat(j), p)
        zm, _ = submodule(n.term(j), zb, name=f"Z{j}")
        q = quotient(n.term(j), zb, name=f"B{j}")
        zmods.append(zm)
        qmods.append(q.module)
        inc[j] = zb
        prj[j] = q.projection.matrix
    lo = n.lo
    zc = layer(a, lo, zmods)
    bc = layer(a, lo, qmods)
    return SESTriangle(zc, n, bc, ChainMap(zc, n, inc, check=False), ChainMap(n, bc, prj, check=False))


def decompose_zb(c: Complex) -> tuple[SESTriangle, ChainMap]:
    """Z/B triangle of the normal form of c, plus the comparison normal form -> c."""
    nf = syzygy_normal_form(c)
    return zb_triangle(nf.complex), nf.comparison


def _is_identity(f: ChainMap) -> bool:
    if not f.source.same(f.target):
        return False
    return all(np.array_equal(m, la.eye(m.shape[0])) for m in f.comps.values())


def zb_tower(c: Complex) -> Node:
    tri, q = decompose_zb(c)
    comp = [] if _is_identity(q) else [Step(q, True)]
    return Node(tri, _leaf(tri.left), _leaf(tri.right), comp)


def pullback_sequence(c: Complex, i: int):
    """0 -> Omega H^i -> B^i + Q -> Z^i -> 0, a diagnostic for Z/B leaf membership.

    Returns the three modules and the two maps as matrices.
    """
    p = c.p
    h = homology(c, i)
    cov = projective_cover(h.module)
    zmod, _ = submodule(c.term(i), h.cycles)
    bmat = la.mul(h.cycles_inv, c.dmat(i - 1), p)
    bcols = la.column_basis(bmat, p)
    bmod, binc = submodule(zmod, bcols)
    ds = direct_sum([bmod, cov.projective.module], algebra=c.algebra)
    # (b, q) -> b + lift(q) in Z^i where lift sends q to a cycle with class epi(q)
    lift_imgs = []
    P = cov.projective
    for k, idx in enumerate(P.summands):
        hv = la.mul(cov.epi.matrix, P.generators[:, [k]], p)
        z = la.chain(p, h.section, hv)
        e = c.algebra.primitive_idempotents()[idx]
        lift_imgs.append(la.mul(zmod.act(e), z, p)[:, 0])
    lift = map_from_projective(P, zmod, lift_imgs).matrix
    g = np.hstack([binc.matrix, lift]) % p
    kb = la.kernel_basis(g, p)
    kmod, _ = submodule(ds.module, kb)
    return kmod, ds.module, zmod, kb, g


# ---------------------------------------------------------------------------
# Cartan-Eilenberg step


def ce_step(c: Complex, seed: int = 0) -> tuple[ConeTriangle, Leaf]:
    """Triangle Q -> c -> cone(f) with Q a layer of projective covers of homology.

    The cone is N[1] where H^i(N) is isomorphic to Omega H^i(c); that isomorphism
    is certified for each degree (IsoUncertified otherwise).
    """
    a, p = c.algebra, c.p
    idem = a.primitive_idempotents()
    qterms, comps = {}, {}
    homs = {}
    for i in c.degrees():
        h = homology(c, i)
        homs[i] = h
        if h.module.dim == 0:
            continue
        cov = projective_cover(h.module)
        P = cov.projective
        imgs = []
        for k, idx in enumerate(P.summands):
            hv = la.mul(cov.epi.matrix, P.generators[:, [k]], p)
            z = h.rep(hv, p)
            imgs.append(la.mul(c.term(i).act(idem[idx]), z, p)[:, 0])
        qterms[i] = P.module
        comps[i] = map_from_projective(P, c.term(i), imgs).matrix
    if qterms:
        lo, hi = min(qterms), max(qterms)
        z = zero_module(a)
        q = layer(a, lo, [qterms.get(i, z) for i in range(lo, hi + 1)])
    else:
        q = layer(a, 0, [])
    f = ChainMap(q, c, comps, check=False)
    cn = cone(f).complex
    for i, h in homs.items():
        if h.module.dim == 0:
            continue
        want = syzygy(h.module, 1)
        got = homology(cn, i - 1).module
        iso, certain = find_isomorphism(got, want, seed=seed)
        if iso is None:
            if certain:
                raise ReldimError(f"CE step: H^{i - 1}(cone) is not a syzygy of H^{i}")
            raise IsoUncertified(f"CE step: could not certify H^{i - 1}(cone) ~ Omega H^{i}")
    return ConeTriangle(f, cn), _leaf(q)


# ---------------------------------------------------------------------------
# split leaf: c is quasi-isomorphic to its homology via an equivariant section


def split_leaf(c: Complex, oracle: SubcatOracle) -> Leaf | None:
    a, p = c.algebra, c.p
    terms, comps = {}, {}
    for i in c.degrees():
        h = homology(c, i)
        if h.module.dim == 0:
            continue
        if not oracle.accepts(h.module):
            return None
        zmod, _ = submodule(c.term(i), h.cycles)
        hb = hom_matrices(h.module, zmod)
        if hb.shape[0] == 0:
            return None
        # find g in Hom(H, Z) with proj g = id
        sys = np.stack([la.mul(h.proj, g, p).reshape(-1) for g in hb], axis=1)
        x = la.solve(sys, la.eye(h.module.dim).reshape(-1, 1), p)
        if x is None:
            return None
        g = np.einsum("h,hab->ab", x[:, 0], hb) % p
        terms[i] = h.module
        comps[i] = la.mul(h.cycles, g, p)
    if terms:
        lo, hi = min(terms), max(terms)
        a_zero = zero_module(a)
        lay = layer(a, lo, [terms.get(i, a_zero) for i in range(lo, hi + 1)])
    else:
        lay = layer(a, 0, [])
    s = ChainMap(lay, c, comps, check=False)
    if not is_quasi_iso(s):
        return None
    comp = [] if _is_identity(s) else [Step(s, True)]
    return Leaf(lay, comp)


# ---------------------------------------------------------------------------
# resolving tower


def check_hypothesis(c: Complex, oracle: SubcatOracle, d: int) -> list[int]:
    bad = []
    for i in c.degrees():
        h = homology(c, i).module
        if h.dim and not oracle.accepts(syzygy(h, d)):
            bad.append(i)
    return bad


def _build(c: Complex, oracle: SubcatOracle, d: int, seed: int) -> Leaf | Node:
    sl = split_leaf(c, oracle)
    if sl is not None:
        return sl
    if d >= 2:
        tri, qleaf = ce_step(c, seed=seed)
        right = _build(tri.cone, oracle, d - 1, seed)
        return Node(tri, qleaf, right, [])
    node = zb_tower(c)
    for leaf in (node.left, node.right):
        for t in leaf.layer.terms:
            if not oracle.accepts(t):
                raise HypothesisFailed("Z/B leaf term outside the subcategory", degrees=[])
    return node


def resolving_tower(c: Complex, oracle: SubcatOracle, d: int, seed: int = 0) -> WitnessTower:
    """Tower of depth at most max(2, d + 1) when Omega^d H^i(c) passes the oracle for all i."""
    if d < 0:
        raise ValueError("d must be >= 0")
    bad = check_hypothesis(c, oracle, d)
    if bad:
        raise HypothesisFailed(f"Omega^{d} H^i fails the oracle in degrees {bad}", degrees=bad)
    root = _build(c, oracle, d, seed)
    return WitnessTower(c.algebra, oracle, c, root, root.depth, strategy=f"resolving(d={d})")


# ---------------------------------------------------------------------------
# shifting


def _shift_steps(steps: list[Step], k: int) -> list[Step]:
    return [Step(s.map.shift(k), s.forward) for s in steps]


def shift_tree(t: Leaf | Node, k: int = 1) -> Leaf | Node:
    if k == 0:
        return t
    if isinstance(t, Leaf):
        return Leaf(t.layer.shift(k), _shift_steps(t.comparison, k))
    tri = t.triangle
    if isinstance(tri, SESTriangle):
        ntri = SESTriangle(tri.left.shift(k), tri.middle.shift(k), tri.right.shift(k), tri.inc.shift(k), tri.proj.shift(k))
        return Node(ntri, shift_tree(t.left, k), shift_tree(t.right, k), _shift_steps(t.comparison, k))
    # cone(-f[1]) = cone(f)[1]; repeat one step at a time
    cur = t
    for _ in range(k):
        tr = cur.triangle
        g = -tr.map.shift(1)
        cur = Node(
            ConeTriangle(g, tr.cone.shift(1)),
            shift_tree(cur.left, 1),
            shift_tree(cur.right, 1),
            _shift_steps(cur.comparison, 1),
        )
    return cur


def shift_tower(w: WitnessTower, k: int = 1) -> WitnessTower:
    if k < 0:
        raise ValueError("only nonnegative shifts are supported")
    return WitnessTower(w.algebra, w.oracle, w.target.shift(k), shift_tree(w.root, k), w.depth, w.strategy)


# ---------------------------------------------------------------------------
# encoding (consumed by the verifier and the certificate writer)


def _enc_steps(steps: list[Step]) -> list[dict]:
    return [{"dir": "fwd" if s.forward else "bwd", "to": enc_complex(s.far_end()), "comps": enc_comps(s.map)} for s in steps]


def encode_tree(t: Leaf | Node) -> dict:
    if isinstance(t, Leaf):
        return {"kind": "leaf", "layer": enc_complex(t.layer), "comparison": _enc_steps(t.comparison)}
    tri = t.triangle
    if isinstance(tri, SESTriangle):
        td = {
            "form": "ses",
            "left": enc_complex(tri.left),
            "middle": enc_complex(tri.middle),
            "right": enc_complex(tri.right),
            "inc": enc_comps(tri.inc),
            "proj": enc_comps(tri.proj),
        }
    else:
        td = {
            "form": "cone",
            "left": enc_complex(tri.left),
            "middle": enc_complex(tri.middle),
            "map": enc_comps(tri.map),
            "cone": enc_complex(tri.cone),
        }
    return {
        "kind": "node",
        "triangle": td,
        "left": encode_tree(t.left),
        "right": encode_tree(t.right),
        "comparison": _enc_steps(t.comparison),
    }


def encode_tower(w: WitnessTower) -> dict:
    return {
        "algebra": {"p": int(w.algebra.p), "dim": int(w.algebra.dim), "digest": w.algebra.digest()},
        "oracle": w.oracle.encode(),
        "target": enc_complex(w.target),
        "target_digest": w.target.digest(),
        "depth": int(w.depth),
        "strategy": w.strategy,
        "tower": encode_tree(w.root),
    }


def verify_tower(w: WitnessTower, oracle: SubcatOracle | None = None, target: Complex | None = None):
    """Re-verify from scratch over a freshly rebuilt algebra (no shared caches)."""
    from .verifier import verify_data

    data = encode_tower(w)
    if oracle is not None:
        data["oracle"] = oracle.encode()
    if target is not None:
        data["target"] = enc_complex(target)
        data["target_digest"] = target.digest()
    return verify_data(data, w.algebra.fresh())


# ---------------------------------------------------------------------------
# level upper bound


def level_upper(c: Complex, oracle: SubcatOracle, budget: int = 4, seed: int = 0, end_context=None) -> int | str:
    """Smallest verified depth over the available strategies, or "unknown"."""
    best: int | None = None
    for d in range(budget + 1):
        try:
            w = resolving_tower(c, oracle, d, seed=seed)
        except (HypothesisFailed, IsoUncertified):
            continue
        if verify_tower(w) and (best is None or w.depth < best):
            best = w.depth
        if best == 1:
            break
    if end_context is not None and oracle.kind == "add" and best != 1:
        from .functor import gldim_bound_tower

        try:
            w = gldim_bound_tower(end_context, c, seed=seed)
            if verify_tower(w) and (best is None or w.depth < best):
                best = w.depth
        except ReldimError:
            pass
    return "unknown" if best is None else best
