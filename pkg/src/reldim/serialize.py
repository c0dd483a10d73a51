"""Plain-data (JSON-ready) encodings of matrices, modules and complexes."""

from __future__ import annotations

import numpy as np

from .algebra import Algebra
from .complexes import ChainMap, Complex
from .modules import Module


def enc_matrix(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=np.int64)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": [int(x) for x in m.reshape(-1)]}


def dec_matrix(d: dict) -> np.ndarray:
    rows, cols = int(d["rows"]), int(d["cols"])
    data = np.asarray(d["data"], dtype=np.int64)
    if data.size != rows * cols:
        raise ValueError(f"matrix data has {data.size} entries, expected {rows}x{cols}")
    return data.reshape(rows, cols)


def enc_module(m: Module) -> dict:
    return {"dim": int(m.dim), "action": [int(x) for x in m.action.reshape(-1)]}


def dec_module(d: dict, a: Algebra, check: bool = True) -> Module:
    dim = int(d["dim"])
    act = np.asarray(d["action"], dtype=np.int64)
    if act.size != a.dim * dim * dim:
        raise ValueError(f"module action has {act.size} entries, expected {a.dim}*{dim}*{dim}")
    return Module(a, act.reshape(a.dim, dim, dim), check=check)


def enc_complex(c: Complex) -> dict:
    return {"lo": int(c.lo), "terms": [enc_module(t) for t in c.terms], "diffs": [enc_matrix(d) for d in c.d]}


def dec_complex(d: dict, a: Algebra, check: bool = False) -> Complex:
    terms = [dec_module(t, a) for t in d["terms"]]
    diffs = [dec_matrix(x) for x in d["diffs"]]
    for k, x in enumerate(diffs):
        if k + 1 >= len(terms) or x.shape != (terms[k + 1].dim, terms[k].dim):
            raise ValueError(f"differential {k} has the wrong shape")
    return Complex(a, int(d["lo"]), terms, diffs, check=check)


def enc_comps(f: ChainMap) -> dict:
    return {str(i): enc_matrix(m) for i, m in sorted(f.comps.items())}


def dec_comps(d: dict) -> dict[int, np.ndarray]:
    return {int(k): dec_matrix(v) for k, v in d.items()}


def chain_map_from(source: Complex, target: Complex, comps: dict[int, np.ndarray]) -> ChainMap:
    """Build a chain map, rejecting components whose shapes do not fit."""
    for i, m in comps.items():
        if m.shape != (target.term(i).dim, source.term(i).dim):
            raise ValueError(f"component in degree {i} has shape {m.shape}")
    return ChainMap(source, target, comps, check=False)
