import pytest

from reldim.complexes import stalk
from reldim.cotilting import cluster_tilt_check, cotilting_tower, ext_degree, is_cotilting, xt_oracle
from reldim.errors import IdAtCap
from reldim.modules import AtLeast, canonical_modules, direct_sum, ext_dim, inj_dim, regular_module, simple_module
from reldim.samples import random_complex, random_module
from reldim.towers import verify_tower


def _dual_of_regular(a):
    return direct_sum(canonical_modules(a).injectives).module


def test_xt_oracle(a2, dual, k_dual, rng):
    o = xt_oracle(regular_module(dual))
    assert o.bound == 0 and o.accepts(k_dual)
    assert all(o.accepts(random_module(dual, rng)) for _ in range(5))
    o = xt_oracle(_dual_of_regular(a2))
    assert o.bound == 0
    assert all(o.accepts(random_module(a2, rng)) for _ in range(5))
    with pytest.raises(IdAtCap):
        xt_oracle(k_dual, cap=6)


def test_cotilting_reports(a2, dual, k_dual, rng):
    samples = [random_module(dual, rng) for _ in range(6)]
    rep = is_cotilting(regular_module(dual), samples)
    assert rep.ok and rep.id_t == 0 and all(s.status == "witnessed" for s in rep.samples)
    rep = is_cotilting(_dual_of_regular(a2), [random_module(a2, rng) for _ in range(4)])
    assert rep.ok and rep.id_t == 0
    rep = is_cotilting(k_dual, [], cap=6)
    assert not rep.ok and isinstance(rep.id_t, AtLeast)
    assert any("condition 1" in line for line in rep.lines())


def test_ext_degree_bounded_by_id(a2, rng):
    s = [simple_module(a2, i) for i in range(2)]
    t = direct_sum(s).module
    d = inj_dim(t)
    for _ in range(10):
        m = random_module(a2, rng)
        n = ext_degree(m, t, d)
        assert n <= d
        assert all(ext_dim(m, t, i) == 0 for i in range(n + 1, d + 1))


def test_cotilting_towers(a2, dual, k_dual, rng):
    for _ in range(5):
        w = cotilting_tower(regular_module(dual), random_complex(dual, rng))
        assert w.depth <= 2 and verify_tower(w)
        w = cotilting_tower(_dual_of_regular(a2), random_complex(a2, rng))
        assert w.depth <= 2 and verify_tower(w)
    w = cotilting_tower(regular_module(dual), stalk(k_dual))
    assert w.depth == 1


def test_cluster_tilt_check(dual, k_dual):
    lam = regular_module(dual)
    assert cluster_tilt_check(lam, [lam, k_dual], 1) == (True, None)
    assert cluster_tilt_check(lam, [lam, k_dual], 1, [k_dual, lam]) == (True, None)
    ok, why = cluster_tilt_check(lam, [lam, k_dual], 2)
    assert not ok and why[0] == "non-orthogonal-pair" and why[3] == 1
    ok, why = cluster_tilt_check(lam, [lam], 1, [k_dual])
    assert not ok and why[:2] == ("orthogonal-outsider", 0)
