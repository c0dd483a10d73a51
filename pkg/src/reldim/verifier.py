"""Independent checker for encoded witness towers.

Works only on plain data and a freshly built algebra.  Checks run bottom-up
(children before parents) in a fixed order, so the first failing check and
its reason are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .algebra import Algebra
from .complexes import Complex, cone, is_acyclic, is_chain_map
from .modules import AtLeast, ext_dim, in_add, inj_dim, regular_module
from .serialize import chain_map_from, dec_comps, dec_complex, dec_module


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else f"{self.reason}: {self.detail}" if self.detail else self.reason


class _Fail(Exception):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(reason)
        self.reason = reason
        self.detail = detail


def _complex(d: dict, a: Algebra, where: str) -> Complex:
    try:
        return dec_complex(d, a, check=False)
    except Exception as exc:  # malformed or non-module data
        raise _Fail("module-action", f"{where}: {exc}") from None


def _valid_complex(c: Complex, where: str) -> None:
    try:
        c.verify()
    except Exception as exc:
        raise _Fail("d-squared", f"{where}: {exc}") from None


def _same(x: Complex, y: Complex) -> bool:
    return x.same(y)


class _Oracle:
    def __init__(self, data: dict, a: Algebra):
        self.kind = data.get("kind")
        self.t = None
        self.bound = int(data.get("bound", 0))
        if self.kind not in ("proj", "add", "extorth", "all"):
            raise _Fail("oracle-invalid", f"unknown kind {self.kind!r}")
        if self.kind in ("add", "extorth"):
            try:
                self.t = dec_module(data["t"], a)
            except Exception as exc:
                raise _Fail("oracle-invalid", str(exc)) from None
        if self.kind == "extorth":
            idt = inj_dim(self.t)
            if isinstance(idt, AtLeast) or self.bound < idt:
                raise _Fail("oracle-invalid", f"bound {self.bound} below id t = {idt}")
        self.regular = regular_module(a) if self.kind == "proj" else None

    def accepts(self, m) -> bool:
        if m.dim == 0 or self.kind == "all":
            return True
        if self.kind == "proj":
            return in_add(self.regular, m)
        if self.kind == "add":
            return in_add(self.t, m)
        return all(ext_dim(m, self.t, i) == 0 for i in range(1, self.bound + 1))


def _zigzag(start: Complex, steps: list, a: Algebra, where: str) -> Complex:
    cur = start
    for k, s in enumerate(steps):
        other = _complex(s["to"], a, f"{where} step {k}")
        _valid_complex(other, f"{where} step {k}")
        fwd = s.get("dir") == "fwd"
        if s.get("dir") not in ("fwd", "bwd"):
            raise _Fail("quasi-iso", f"{where} step {k}: bad direction")
        try:
            comps = dec_comps(s["comps"])
            f = chain_map_from(cur, other, comps) if fwd else chain_map_from(other, cur, comps)
        except Exception as exc:
            raise _Fail("quasi-iso", f"{where} step {k}: {exc}") from None
        if not is_chain_map(f):
            raise _Fail("quasi-iso", f"{where} step {k}: not a chain map")
        if not is_acyclic(cone(f).complex):
            raise _Fail("quasi-iso", f"{where} step {k}: cone is not acyclic")
        cur = other
    return cur


def _check_ses(td: dict, a: Algebra, where: str) -> tuple[Complex, Complex, Complex]:
    left = _complex(td["left"], a, where)
    mid = _complex(td["middle"], a, where)
    right = _complex(td["right"], a, where)
    for c, nm in ((left, "left"), (mid, "middle"), (right, "right")):
        _valid_complex(c, f"{where} {nm}")
    p = a.p
    try:
        inc = chain_map_from(left, mid, dec_comps(td["inc"]))
        prj = chain_map_from(mid, right, dec_comps(td["proj"]))
    except Exception as exc:
        raise _Fail("ses-exactness", f"{where}: {exc}") from None
    if not is_chain_map(inc) or not is_chain_map(prj):
        raise _Fail("ses-exactness", f"{where}: maps are not chain maps")
    lo = min(left.lo, mid.lo, right.lo)
    hi = max(left.hi, mid.hi, right.hi)
    for i in range(lo, hi + 1):
        f, g = inc.comp(i), prj.comp(i)
        dl, dm, dr = left.term(i).dim, mid.term(i).dim, right.term(i).dim
        if la.mul(g, f, p).any():
            raise _Fail("ses-exactness", f"{where}: composite nonzero in degree {i}")
        if la.rank(f, p) != dl or la.rank(g, p) != dr or dl + dr != dm:
            raise _Fail("ses-exactness", f"{where}: not short exact in degree {i}")
    return left, mid, right


def _check_cone(td: dict, a: Algebra, where: str) -> tuple[Complex, Complex, Complex]:
    left = _complex(td["left"], a, where)
    mid = _complex(td["middle"], a, where)
    stored = _complex(td["cone"], a, where)
    for c, nm in ((left, "left"), (mid, "middle"), (stored, "cone")):
        _valid_complex(c, f"{where} {nm}")
    try:
        f = chain_map_from(left, mid, dec_comps(td["map"]))
    except Exception as exc:
        raise _Fail("cone", f"{where}: {exc}") from None
    if not is_chain_map(f):
        raise _Fail("cone", f"{where}: map is not a chain map")
    if not _same(cone(f).complex, stored):
        raise _Fail("cone", f"{where}: stored cone differs from the recomputed cone")
    return left, mid, stored


def _check(node: dict, oracle: _Oracle, a: Algebra, where: str) -> tuple[Complex, int]:
    """Returns (claimed object, depth)."""
    kind = node.get("kind")
    if kind == "leaf":
        lay = _complex(node["layer"], a, where)
        for x in lay.d:
            if np.asarray(x).any():
                raise _Fail("leaf-differential", f"{where}: nonzero differential")
        for i in lay.degrees():
            if not oracle.accepts(lay.term(i)):
                raise _Fail("leaf-membership", f"{where}: term in degree {i}")
        return _zigzag(lay, node.get("comparison", []), a, where), 1
    if kind != "node":
        raise _Fail("object-mismatch", f"{where}: unknown node kind {kind!r}")
    lobj, ld = _check(node["left"], oracle, a, where + ".L")
    robj, rd = _check(node["right"], oracle, a, where + ".R")
    td = node["triangle"]
    form = td.get("form")
    if form == "ses":
        left, mid, right = _check_ses(td, a, where)
    elif form == "cone":
        left, mid, right = _check_cone(td, a, where)
    else:
        raise _Fail("object-mismatch", f"{where}: unknown triangle form {form!r}")
    if not _same(lobj, left):
        raise _Fail("object-mismatch", f"{where}: left child does not certify the left object")
    if not _same(robj, right):
        raise _Fail("object-mismatch", f"{where}: right child does not certify the right object")
    return _zigzag(mid, node.get("comparison", []), a, where), ld + rd


def verify_data(data: dict, algebra: Algebra) -> Verdict:
    """Check an encoded tower against ``algebra`` (which should be freshly built)."""
    try:
        alg = data.get("algebra", {})
        if alg.get("digest") != algebra.digest() or int(alg.get("p", -1)) != algebra.p:
            raise _Fail("algebra-mismatch", "certificate was made for a different algebra")
        oracle = _Oracle(data["oracle"], algebra)
        target = _complex(data["target"], algebra, "target")
        _valid_complex(target, "target")
        if target.digest() != data.get("target_digest"):
            raise _Fail("target-mismatch", "target digest does not match the target")
        obj, depth = _check(data["tower"], oracle, algebra, "root")
        if not _same(obj, target):
            raise _Fail("target-mismatch", "root does not certify the target complex")
        if depth != int(data.get("depth", -1)):
            raise _Fail("depth", f"declared {data.get('depth')} but the tree has depth {depth}")
    except _Fail as f:
        return Verdict(False, f.reason, f.detail)
    except (KeyError, TypeError, ValueError) as exc:
        return Verdict(False, "malformed", str(exc))
    return Verdict(True)
