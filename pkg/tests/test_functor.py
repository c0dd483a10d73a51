import numpy as np
import pytest

from reldim import linalg as la
from reldim.complexes import stalk
from reldim.errors import NotAGenerator
from reldim.functor import end_algebra, gldim_bound_tower, gldim_end, is_generator
from reldim.modules import (
    hom_dim,
    is_isomorphic,
    regular_module,
    simple_module,
    zero_module,
)
from reldim.samples import random_complex, random_module
from reldim.towers import verify_tower


def test_end_of_field(gf7):
    ctx = end_algebra(regular_module(gf7))
    assert ctx.algebra.dim == 1 and gldim_end(ctx) == 0


def test_end_of_regular_is_the_algebra(a2):
    ctx = end_algebra(regular_module(a2))
    e = ctx.algebra
    assert e.dim == a2.dim
    basis = ctx.basis.reshape(e.dim, -1).T

    def coords(mat):
        return la.solve(basis, mat.reshape(-1, 1), 7)[:, 0]

    lefts = [a2.left_matrix(a2.basis_vector(i)) for i in range(a2.dim)]
    for i in range(a2.dim):
        for j in range(a2.dim):
            prod = e.mult(coords(lefts[i]), coords(lefts[j]))
            want = coords(a2.left_matrix(a2.mult(a2.basis_vector(i), a2.basis_vector(j))))
            assert np.array_equal(prod, want)


def test_end_of_lambda_plus_k(end_ctx, dual, k_dual, t_dual):
    e = end_ctx.algebra
    assert e.dim == 5 == hom_dim(t_dual, t_dual)
    assert len(e.primitive_idempotents()) == 2
    assert sorted(s.dim for s in end_ctx.summands) == [1, 2]
    assert gldim_end(end_ctx) == 2
    assert end_ctx.psi(k_dual).dim == 2
    assert end_ctx.psi(zero_module(dual)).dim == 0
    assert is_isomorphic(end_ctx.psi(t_dual), regular_module(e))


def test_phi_basics(end_ctx, dual, t_dual):
    e = end_ctx.algebra
    assert is_isomorphic(end_ctx.phi(regular_module(e)), t_dual)
    assert end_ctx.phi(zero_module(e)).dim == 0


def test_counit_iso(end_ctx, dual, rng):
    for _ in range(10):
        m = random_module(dual, rng, max_dim=5)
        assert end_ctx.counit_is_iso(m)
        assert is_isomorphic(end_ctx.phi(end_ctx.psi(m)), m)


def test_adjunction(end_ctx, dual, rng):
    e = end_ctx.algebra
    for _ in range(10):
        f = random_module(e, rng, max_dim=5)
        m = random_module(dual, rng, max_dim=5)
        assert end_ctx.check_adjunction(f, m)
        assert end_ctx.phi_check(f)
    m = random_module(dual, rng)
    assert hom_dim(end_ctx.phi(regular_module(e)), m) == hom_dim(end_ctx.t, m)
    assert end_ctx.check_adjunction(regular_module(e), zero_module(dual))


def test_gldim_bound_towers(end_ctx, dual, k_dual, rng):
    for _ in range(6):
        w = gldim_bound_tower(end_ctx, random_complex(dual, rng))
        assert w.depth <= 3 and verify_tower(w)
    w = gldim_bound_tower(end_ctx, stalk(k_dual))
    assert w.depth == 1 and verify_tower(w)


def test_hereditary_route(a2, rng):
    ctx = end_algebra(regular_module(a2))
    assert gldim_end(ctx) == 1
    for _ in range(5):
        w = gldim_bound_tower(ctx, random_complex(a2, rng))
        assert w.depth <= 2 and verify_tower(w)


def test_not_a_generator(dual, k_dual):
    ctx = end_algebra(k_dual)
    assert not is_generator(k_dual)
    with pytest.raises(NotAGenerator):
        gldim_bound_tower(ctx, stalk(k_dual))
    assert simple_module(dual, 0).dim == 1
