"""Single-entry mutations of encoded towers, each with the reason the verifier must give."""

from __future__ import annotations

import copy

import numpy as np


def walk(node, path=()):
    """Post-order list of (path, node) for the encoded tree."""
    out = []
    if node["kind"] == "node":
        out += walk(node["left"], path + ("left",))
        out += walk(node["right"], path + ("right",))
    out.append((path, node))
    return out


def at(data, path):
    node = data["tower"]
    for key in path:
        node = node[key]
    return node


def leaf_differential(data, p, rng):
    """Flip one (zero) entry of a leaf's differential."""
    leaves = [(pa, n) for pa, n in walk(data["tower"]) if n["kind"] == "leaf"]
    cands = [(pa, k) for pa, n in leaves for k, d in enumerate(n["layer"]["diffs"]) if d["rows"] * d["cols"]]
    if not cands:
        return None
    pa, k = cands[rng.integers(len(cands))]
    out = copy.deepcopy(data)
    d = at(out, pa)["layer"]["diffs"][k]
    j = int(rng.integers(len(d["data"])))
    d["data"][j] = (d["data"][j] + 1) % p
    return out, "leaf-differential"


def ses_exactness(data, p, rng):
    """Flip proj[r, c] in an SES triangle where inc has a nonzero row c, so proj o inc != 0."""
    cands = []
    for pa, n in walk(data["tower"]):
        if n["kind"] != "node" or n["triangle"]["form"] != "ses":
            continue
        tri = n["triangle"]
        for deg, g in tri["proj"].items():
            f = tri["inc"].get(deg)
            if f is None or not g["rows"]:
                continue
            fm = np.array(f["data"]).reshape(f["rows"], f["cols"])
            for c in np.flatnonzero(fm.any(axis=1)):
                for r in range(g["rows"]):
                    cands.append((pa, deg, r, int(c)))
    if not cands:
        return None
    pa, deg, r, c = cands[rng.integers(len(cands))]
    out = copy.deepcopy(data)
    g = at(out, pa)["triangle"]["proj"][deg]
    j = r * g["cols"] + c
    g["data"][j] = (g["data"][j] + 1) % p
    return out, "ses-exactness"


def leaf_membership(data, p, rng, outsider):
    """Replace a leaf term with a module the oracle rejects; zero the adjacent differentials."""
    cands = [
        (pa, k)
        for pa, n in walk(data["tower"])
        if n["kind"] == "leaf"
        for k, t in enumerate(n["layer"]["terms"])
    ]
    if not cands:
        return None
    pa, k = cands[rng.integers(len(cands))]
    out = copy.deepcopy(data)
    lay = at(out, pa)["layer"]
    lay["terms"][k] = copy.deepcopy(outsider)
    dims = [t["dim"] for t in lay["terms"]]
    lay["diffs"] = [{"rows": dims[i + 1], "cols": dims[i], "data": [0] * (dims[i] * dims[i + 1])} for i in range(len(dims) - 1)]
    return out, "leaf-membership"


def depth(data, p, rng):
    out = copy.deepcopy(data)
    out["depth"] = int(data["depth"]) + int(rng.integers(1, 3))
    return out, "depth"


def digest(data, p, rng):
    out = copy.deepcopy(data)
    dg = out["algebra"]["digest"]
    j = int(rng.integers(len(dg)))
    out["algebra"]["digest"] = dg[:j] + ("0" if dg[j] != "0" else "1") + dg[j + 1 :]
    return out, "algebra-mismatch"
