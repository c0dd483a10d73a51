import numpy as np
import pytest

from reldim.complexes import Complex, homology_dims, is_acyclic, stalk, syzygy_normal_form
from reldim.errors import HypothesisFailed
from reldim.modules import (
    direct_sum,
    ext_dim,
    indecomposable_projective,
    is_isomorphic,
    is_projective,
    regular_module,
    simple_module,
    syzygy,
)
from reldim.samples import random_complex, random_module
from reldim.towers import (
    Leaf,
    Node,
    SESTriangle,
    SubcatOracle,
    ce_step,
    decompose_zb,
    level_upper,
    resolving_tower,
    shift_tower,
    verify_tower,
)


def test_oracles_accept_projectives(a2, dual, k_dual, t_dual, rng):
    for a in (a2, dual):
        lam = regular_module(a)
        t = random_module(a, rng)
        for o in (SubcatOracle.proj(), SubcatOracle.all(), SubcatOracle.ext_orth(t, 3), SubcatOracle.add(lam)):
            assert o.accepts(lam)
            assert all(o.accepts(indecomposable_projective(a, i)[0]) for i in range(len(a.primitive_idempotents())))
    assert not SubcatOracle.proj().accepts(k_dual)
    assert SubcatOracle.add(t_dual).accepts(k_dual)


def test_zb_examples(a2, dual, k_dual):
    p0 = indecomposable_projective(a2, 0)[0]
    tri, _ = decompose_zb(stalk(p0))
    assert isinstance(tri, SESTriangle)
    assert tri.left.dims() == [p0.dim] and tri.right.is_zero()
    # 0 -> k -> Lambda -> 0: the cycles are all of Lambda, the quotient is the boundary k
    n = syzygy_normal_form(stalk(k_dual)).complex
    tri, _ = decompose_zb(n)
    assert tri.left.term(-1).dim == 0 and is_isomorphic(tri.left.term(0), regular_module(dual))
    assert is_isomorphic(tri.right.term(-1), k_dual) and tri.right.dims() == [1]


def test_zb_acyclic_projective(a2):
    p = indecomposable_projective(a2, 0)[0]
    c = Complex(a2, 0, [p, p], [p.identity().matrix])
    tri, _ = decompose_zb(c)
    # cycles and boundaries are both a single copy of p
    for side in (tri.left, tri.right):
        nz = [side.term(i) for i in side.degrees() if side.term(i).dim]
        assert len(nz) == 1 and is_isomorphic(nz[0], p)


def test_ce_step(dual, k_dual, a2, rng):
    tri, leaf = ce_step(stalk(k_dual))
    assert leaf.layer.dims() == [2]
    assert _nonzero(homology_dims(tri.cone)) == {-1: 1}
    assert is_isomorphic(_homology(tri.cone, -1), k_dual)
    lam = regular_module(dual)
    c = Complex(dual, 0, [lam, lam], [lam.identity().matrix])
    tri, leaf = ce_step(c)
    assert leaf.layer.is_zero() and _nonzero(homology_dims(tri.cone)) == {}
    for _ in range(10):
        c = random_complex(a2, rng)
        tri, _ = ce_step(c)
        for i, h in homology_dims(c).items():
            if h:
                want = syzygy(_homology(c, i), 1).dim
                assert homology_dims(tri.cone).get(i - 1, 0) == want


def _nonzero(d):
    return {k: v for k, v in d.items() if v}


def _homology(c, i):
    from reldim.complexes import homology

    return homology(c, i).module


def test_resolving_tower_depths(gf7, a2, dual, rng):
    for _ in range(10):
        c = random_complex(a2, rng)
        w = resolving_tower(c, SubcatOracle.proj(), 1)
        assert w.depth <= 2 and verify_tower(w)
        w = resolving_tower(random_complex(gf7, rng), SubcatOracle.proj(), 0)
        assert w.depth == 1 and verify_tower(w)
        w = resolving_tower(random_complex(dual, rng), SubcatOracle.all(), 0)
        assert w.depth <= 2 and verify_tower(w)


def test_stalk_projective_is_a_leaf(a2):
    w = resolving_tower(stalk(regular_module(a2)), SubcatOracle.proj(), 1)
    assert isinstance(w.root, Leaf) and w.depth == 1


def test_hypothesis_failure(dual, k_dual):
    with pytest.raises(HypothesisFailed) as err:
        resolving_tower(stalk(k_dual), SubcatOracle.proj(), 1)
    assert err.value.code == "hypothesis-failed"


def test_ce_route_over_higher_d(end_ctx, rng):
    e = end_ctx.algebra
    for _ in range(8):
        c = random_complex(e, rng, max_dim=3, width=3)
        w = resolving_tower(c, SubcatOracle.proj(), 2, seed=1)
        assert w.depth <= 3 and verify_tower(w)


def test_shifted_towers_verify(a2, rng):
    for k in (1, 2):
        c = random_complex(a2, rng)
        w = shift_tower(resolving_tower(c, SubcatOracle.proj(), 1), k)
        assert verify_tower(w) and w.target.lo == c.lo - k


def test_depth_is_additive(a2, rng):
    def depth(t):
        return 1 if isinstance(t, Leaf) else depth(t.left) + depth(t.right)

    for _ in range(10):
        w = resolving_tower(random_complex(a2, rng), SubcatOracle.proj(), 1)
        assert depth(w.root) == w.depth
        assert isinstance(w.root, (Leaf, Node))


def test_level_upper(a2, dual, k_dual, t_dual):
    assert level_upper(stalk(regular_module(a2)), SubcatOracle.proj()) == 1
    s = next(simple_module(a2, i) for i in range(2) if not is_projective(simple_module(a2, i)))
    assert level_upper(stalk(s), SubcatOracle.proj()) == 2
    assert level_upper(stalk(k_dual), SubcatOracle.add(t_dual)) == 1
    assert level_upper(stalk(k_dual), SubcatOracle.proj(), budget=3) == "unknown"


def test_extorth_oracle(dual, k_dual):
    lam = regular_module(dual)
    o = SubcatOracle.ext_orth(k_dual, 2)
    assert o.accepts(lam) and not o.accepts(k_dual)
    assert ext_dim(k_dual, k_dual, 1) == 1
    o = SubcatOracle.ext_orth(direct_sum([lam]).module, 0)
    assert o.accepts(k_dual)
