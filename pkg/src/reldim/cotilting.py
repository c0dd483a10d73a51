"""Cotilting modules, their Ext-orthogonal class and cluster-tilting checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .complexes import Complex
from .errors import IdAtCap
from .modules import (
    AtLeast,
    Module,
    direct_sum,
    ext_dim,
    hom_matrices,
    in_add,
    inj_dim,
    quotient,
)
from .towers import SubcatOracle, WitnessTower, resolving_tower


def xt_oracle(t: Module, cap: int = 64) -> SubcatOracle:
    """Oracle for {X : Ext^i(X, t) = 0 for i > 0}; degrees above id t vanish automatically."""
    d = inj_dim(t, cap)
    if isinstance(d, AtLeast):
        raise IdAtCap(f"id t {d}")
    return SubcatOracle.ext_orth(t, d)


def ext_degree(m: Module, t: Module, bound: int) -> int:
    """Smallest n with Ext^i(m, t) = 0 for all n < i <= bound."""
    for i in range(bound, 0, -1):
        if ext_dim(m, t, i):
            return i
    return 0


@dataclass
class SampleWitness:
    index: int
    status: str  # "witnessed" | "not-in-class" | "approximation-failed"
    middle_dim: int = 0
    cokernel_dim: int = 0


@dataclass
class CotiltingReport:
    id_t: int | AtLeast
    finite_id: bool
    self_ext: dict[int, int] = field(default_factory=dict)
    self_orthogonal: bool = False
    samples: list[SampleWitness] = field(default_factory=list)
    ext_degrees: dict[int, int] = field(default_factory=dict)

    @property
    def approximations_ok(self) -> bool:
        return all(s.status != "approximation-failed" for s in self.samples)

    @property
    def ok(self) -> bool:
        """Conditions (1) and (2) hold exactly and (3) holds on every sample in the class."""
        return self.finite_id and self.self_orthogonal and self.approximations_ok

    def lines(self) -> list[str]:
        out = [
            f"injective dimension: {self.id_t}",
            f"condition 1 (finite injective dimension): {'yes' if self.finite_id else 'no'}",
            f"condition 2 (self-orthogonal): {'yes' if self.self_orthogonal else 'no'} {self.self_ext}",
        ]
        wit = sum(s.status == "witnessed" for s in self.samples)
        out.append(f"condition 3: witnessed on {wit} of {len(self.samples)} samples (not proved for the whole class)")
        for s in self.samples:
            out.append(f"  sample {s.index}: {s.status}")
        for k, v in self.ext_degrees.items():
            out.append(f"  ext degree of sample {k}: {v}")
        return out


def approximation(x: Module, t: Module) -> tuple[np.ndarray, Module]:
    """The universal map x -> t^h (h = dim Hom(x, t)) and the target t^h."""
    hb = hom_matrices(x, t)
    big = direct_sum([t] * hb.shape[0], algebra=t.algebra).module
    m = np.vstack(list(hb)) if hb.shape[0] else la.zeros(0, x.dim)
    return m % t.p, big


def is_cotilting(t: Module, samples: list[Module], cap: int = 64) -> CotiltingReport:
    d = inj_dim(t, cap)
    rep = CotiltingReport(d, not isinstance(d, AtLeast))
    if not rep.finite_id:
        return rep
    rep.self_ext = {i: ext_dim(t, t, i) for i in range(1, d + 1)}
    rep.self_orthogonal = not any(rep.self_ext.values())
    oracle = SubcatOracle.ext_orth(t, d)
    for k, x in enumerate(samples):
        rep.ext_degrees[k] = ext_degree(x, t, d)
        if not oracle.accepts(x):
            rep.samples.append(SampleWitness(k, "not-in-class"))
            continue
        m, big = approximation(x, t)
        if la.rank(m, t.p) != x.dim:
            rep.samples.append(SampleWitness(k, "approximation-failed", big.dim))
            continue
        coker = quotient(big, m).module
        status = "witnessed" if oracle.accepts(coker) else "approximation-failed"
        rep.samples.append(SampleWitness(k, status, big.dim, coker.dim))
    return rep


def cotilting_tower(t: Module, c: Complex, seed: int = 0, cap: int = 64) -> WitnessTower:
    """X_T-tower of depth at most max(1, id t) + 1."""
    oracle = xt_oracle(t, cap)
    w = resolving_tower(c, oracle, oracle.bound, seed=seed)
    w.strategy = f"cotilting(id={oracle.bound})"
    return w


def cluster_tilt_check(t: Module, candidates: list[Module], n: int, test_list: list[Module] = (), cap: int = 64):
    """Ext-orthogonality premise of n-cluster tilting, on the given lists only.

    Returns ``(True, None)`` or ``(False, counterexample)``.  Functorial
    finiteness is not checked.
    """
    oracle = xt_oracle(t, cap)
    degs = range(1, n)
    for a_i, a in enumerate(candidates):
        for b_i, b in enumerate(candidates):
            for i in degs:
                if ext_dim(a, b, i):
                    return False, ("non-orthogonal-pair", a_i, b_i, i)
    if not candidates:
        return True, None
    total = direct_sum(list(candidates), algebra=t.algebra).module
    for x_i, x in enumerate(test_list):
        if not oracle.accepts(x) or in_add(total, x):
            continue
        right = all(ext_dim(c, x, i) == 0 for c in candidates for i in degs)
        left = all(ext_dim(x, c, i) == 0 for c in candidates for i in degs)
        if right or left:
            return False, ("orthogonal-outsider", x_i, "right" if right else "left")
    return True, None
