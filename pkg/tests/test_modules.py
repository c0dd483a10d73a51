import itertools

import numpy as np
import pytest

from reldim import linalg as la
from reldim.modules import (
    AtLeast,
    ModuleError,
    ModuleMap,
    direct_sum,
    ext_dim,
    factorize,
    find_isomorphism,
    global_dim,
    hom_dim,
    hom_dims,
    in_add,
    indecomposable_projective,
    inj_dim,
    is_equivariant,
    is_isomorphic,
    is_projective,
    module_from_arrows,
    proj_dim,
    projective_cover,
    projective_resolution,
    regular_module,
    simple_module,
    syzygy,
    zero_module,
    Module,
)
from reldim.samples import random_module


def brute_hom_dim(m, n):
    """Count equivariant matrices by enumeration; the count is p^dim."""
    p = m.p
    count = 0
    for entries in itertools.product(range(p), repeat=m.dim * n.dim):
        f = np.array(entries, dtype=np.int64).reshape(n.dim, m.dim)
        count += is_equivariant(m, n, f)
    dim = round(np.log(count) / np.log(p))
    assert p**dim == count
    return dim


def test_action_is_checked(dual):
    bad = np.zeros((2, 2, 2), dtype=np.int64)
    with pytest.raises(ModuleError):
        Module(dual, bad)


def test_hom_examples(a2, k_dual):
    assert hom_dim(k_dual, k_dual) == 1 == brute_hom_dim(k_dual, k_dual)
    ps = [indecomposable_projective(a2, i)[0] for i in range(2)]
    for x, y in itertools.product(ps, repeat=2):
        assert hom_dim(x, y) == brute_hom_dim(x, y)


def test_hom_small_random_brute_force(a2, dual):
    rng = np.random.default_rng(5)
    for a in (a2, dual):
        for _ in range(6):
            m, n = random_module(a, rng, max_dim=2), random_module(a, rng, max_dim=2)
            if m.dim * n.dim <= 4:
                assert hom_dim(m, n) == brute_hom_dim(m, n)


def test_factorize(dual, k_dual):
    lam = regular_module(dual)
    ident = factorize(lam.identity())
    assert ident.kernel.dim == 0 and ident.cokernel.dim == 0 and ident.image.dim == 2
    zero = factorize(ModuleMap(lam, lam, la.zeros(2, 2)))
    assert zero.kernel.dim == 2 and zero.cokernel.dim == 2
    x = dual.basis_vector(dual.labels.index("x"))
    fx = factorize(ModuleMap(lam, lam, dual.left_matrix(x)))
    for part in (fx.kernel, fx.image, fx.cokernel):
        assert is_isomorphic(part, k_dual)


def test_projective_cover(dual, k_dual):
    cov = projective_cover(k_dual)
    assert cov.projective.module.dim == 2 and la.kernel_basis(cov.epi.matrix, 7).shape[1] == 1
    lam = regular_module(dual)
    assert projective_cover(lam).projective.module.dim == 2
    assert projective_cover(zero_module(dual)).projective.module.dim == 0


def test_syzygy(a2, dual, k_dual):
    assert syzygy(regular_module(dual), 1).dim == 0
    for n in range(4):
        assert is_isomorphic(syzygy(k_dual, n), k_dual)
    dims = sorted(syzygy(simple_module(a2, i), 1).dim for i in range(2))
    assert dims == [0, 1]


def test_ext(dual, k_dual, a2):
    lam = regular_module(dual)
    for i in range(5):
        assert ext_dim(k_dual, k_dual, i) == 1
        assert ext_dim(k_dual, k_dual, i, pad=2) == 1
    assert ext_dim(k_dual, lam, 0) == hom_dim(k_dual, lam)
    assert all(ext_dim(lam, k_dual, i) == 0 for i in range(1, 4))
    s = [simple_module(a2, i) for i in range(2)]
    assert sum(ext_dim(x, y, 1) for x in s for y in s) == 1


def test_dimensions(gf7, a2, dual, k_dual):
    assert global_dim(gf7) == 0
    assert global_dim(a2) == 1
    assert global_dim(dual, cap=8) == AtLeast(8)
    assert inj_dim(regular_module(dual)) == 0
    assert proj_dim(k_dual, 8) == AtLeast(8)
    assert proj_dim(zero_module(dual)) == 0
    hd = hom_dims(a2)
    assert sorted(hd.pd(simple_module(a2, i)) for i in range(2)) == [0, 1]
    assert sorted(hd.id(simple_module(a2, i)) for i in range(2)) == [0, 1]


def test_resolution_is_exact(a2, rng):
    for _ in range(10):
        m = random_module(a2, rng)
        res = projective_resolution(m, 3, pad=1)
        assert res.maps[0].rank() == m.dim
        for j in range(1, 3):
            d0, d1 = res.maps[j - 1].matrix, res.maps[j].matrix
            assert not la.mul(d0, d1, 7).any()
            assert la.rank(d1, 7) == d0.shape[1] - la.rank(d0, 7)


def test_in_add(dual, k_dual, t_dual):
    lam = regular_module(dual)
    assert in_add(t_dual, t_dual) and in_add(t_dual, zero_module(dual))
    assert not in_add(lam, k_dual)
    assert in_add(t_dual, k_dual)
    assert is_projective(lam) and not is_projective(k_dual)


def test_isomorphism(a2, rng):
    for _ in range(10):
        m = random_module(a2, rng)
        g = la.random_invertible(rng, m.dim, 7)
        n = Module(a2, np.einsum("ab,ibc,cd->iad", la.inverse(g, 7), m.action, g) % 7)
        f, certain = find_isomorphism(m, n)
        assert certain and f is not None and la.rank(f.matrix, 7) == m.dim
    s = [simple_module(a2, i) for i in range(2)]
    assert is_isomorphic(s[0], s[1]) is False


def test_module_from_arrows(a2):
    m = module_from_arrows(a2, {"1": 1, "2": 1}, {"a": la.mat([[1]], 7)})
    assert m.dim == 2 and m.dimension_vector() == (1, 1)
    # the only indecomposable of dimension vector (1, 1) is projective
    assert is_projective(m)
