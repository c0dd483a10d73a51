"""Small built-in sanity run used by ``reldim selftest``."""

from __future__ import annotations

import copy

import numpy as np

from .algebra import path_algebra_example
from .functor import end_algebra, gldim_bound_tower, gldim_end
from .modules import direct_sum, ext_dim, global_dim, regular_module, simple_module
from .samples import random_complex
from .towers import SubcatOracle, encode_tower, resolving_tower
from .verifier import verify_data


def run(seed: int = 0):
    rng = np.random.default_rng(seed)
    field, a2, dual = (path_algebra_example(k) for k in ("field", "A2", "dual"))
    k = simple_module(dual, 0)

    yield "gldim A2 = 1", global_dim(a2) == 1
    yield "gldim GF(7) = 0", global_dim(field) == 0
    yield "Ext^3(k, k) = 1 over k[x]/x^2", ext_dim(k, k, 3) == 1

    ok = True
    for _ in range(5):
        w = resolving_tower(random_complex(a2, rng), SubcatOracle.proj(), 1, seed=seed)
        ok &= w.depth <= 2 and bool(verify_data(encode_tower(w), a2.fresh()))
    yield "A2 projective towers of depth <= 2 verify", ok

    ctx = end_algebra(direct_sum([regular_module(dual), k]).module, seed=seed)
    yield "gldim End(A + k) = 2", gldim_end(ctx) == 2
    w = gldim_bound_tower(ctx, random_complex(dual, rng), seed=seed)
    data = encode_tower(w)
    yield "Add(t) tower verifies", w.depth <= 3 and bool(verify_data(data, dual.fresh()))

    bad = copy.deepcopy(data)
    bad["depth"] = data["depth"] + 1
    yield "tampered depth is rejected", verify_data(bad, dual.fresh()).reason == "depth"
