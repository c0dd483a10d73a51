"""Finite-dimensional algebras over GF(p) given by structure constants.

An :class:`Algebra` stores a multiplication tensor ``table`` with
``b_i * b_j = sum_k table[i, j, k] b_k``.  Bound quiver algebras are built
into this form by :func:`build_from_quiver`, which keeps the quiver around
for the fast primitive-idempotent path and the radical cross-check.

Path convention: ``"a.b"`` means *first a, then b*, so right modules are
covariant quiver representations.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import (
    FieldTooSmall,
    InconsistentRelation,
    InputError,
    NotFiniteDimensional,
    RadicalVerificationFailed,
    SplittingFailed,
)

DEFAULT_LENGTH_CAP = 32


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (name, source, target)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex ids")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise InputError("duplicate arrow names")
        if set(names) & set(self.vertices):
            raise InputError("arrow names must differ from vertex ids")
        for name, s, t in self.arrows:
            if s not in self.vertices or t not in self.vertices:
                raise InputError(f"arrow {name}: endpoint is not a declared vertex")

    def arrow(self, name: str) -> tuple[str, str, str]:
        for a in self.arrows:
            if a[0] == name:
                return a
        raise InputError(f"unknown arrow {name!r}")

    def reversed(self) -> "Quiver":
        return Quiver(self.vertices, tuple((n, t, s) for n, s, t in self.arrows))


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def label(self) -> str:
        return "e" + self.source if not self.arrows else ".".join(self.arrows)


# A relation is a list of (coefficient, arrow-name sequence).
Relation = list[tuple[int, tuple[str, ...]]]


def _make_path(q: Quiver, names: tuple[str, ...]) -> Path:
    if not names:
        raise InconsistentRelation("empty path in relation")
    first = q.arrow(names[0])
    cur = first[2]
    for n in names[1:]:
        _, s, t = q.arrow(n)
        if s != cur:
            raise InconsistentRelation(f"path {'.'.join(names)} is not composable")
        cur = t
    return Path(first[1], cur, tuple(names))


def _compose(u: Path, v: Path) -> Path | None:
    if u.target != v.source:
        return None
    return Path(u.source, v.target, u.arrows + v.arrows)


class Algebra:
    """Associative unital algebra over GF(p) with a fixed basis."""

    def __init__(
        self,
        p: int,
        table: np.ndarray,
        labels: list[str] | None = None,
        unit: np.ndarray | None = None,
        idempotents: list[np.ndarray] | None = None,
        quiver: Quiver | None = None,
        paths: list[Path] | None = None,
        name: str = "",
        check: bool = True,
    ):
        self.p = la.check_modulus(p)
        table = np.asarray(table, dtype=np.int64) % self.p
        n = table.shape[0]
        if table.shape != (n, n, n):
            raise InputError(f"structure constants must have shape (n, n, n), got {table.shape}")
        self.table = table
        self.table.setflags(write=False)
        self.dim = n
        self.labels = list(labels) if labels else [f"b{i}" for i in range(n)]
        self.quiver = quiver
        self.paths = paths
        self.name = name
        if n >= self.p:
            raise FieldTooSmall(f"dim A = {n} must be smaller than p = {self.p}")
        self.unit = self._find_unit() if unit is None else np.asarray(unit, dtype=np.int64) % self.p
        self.unit_decomposition = [np.asarray(e, dtype=np.int64) % self.p for e in (idempotents or [self.unit])]
        self._radical: np.ndarray | None = None
        self._idempotents: list[np.ndarray] | None = None
        self._generators: np.ndarray | None = None
        self._opposite: Algebra | None = None
        self._digest: str | None = None
        self._cache: dict = {}
        if check:
            self.verify()

    # -- arithmetic -------------------------------------------------------
    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def mult(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.table) % self.p

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> x*y``."""
        return np.einsum("i,ijk->kj", x, self.table) % self.p

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> y*x``."""
        return np.einsum("j,ijk->ki", x, self.table) % self.p

    def power(self, x: np.ndarray, k: int) -> np.ndarray:
        out = self.unit.copy()
        base = x % self.p
        while k:
            if k & 1:
                out = self.mult(out, base)
            base = self.mult(base, base)
            k >>= 1
        return out

    def _find_unit(self) -> np.ndarray:
        # u*b_j = b_j and b_j*u = b_j for all j
        n, p = self.dim, self.p
        rows = []
        rhs = []
        for j in range(n):
            rows.append(self.table[:, j, :].T)  # (k, i): coefficient of u_i in (u*b_j)_k
            rhs.append(np.eye(n, dtype=np.int64)[:, [j]])
            rows.append(self.table[j, :, :].T)
            rhs.append(np.eye(n, dtype=np.int64)[:, [j]])
        u = la.solve(np.vstack(rows), np.vstack(rhs), p) if n else la.zeros(0, 1)
        if u is None:
            raise InputError("structure constants have no two-sided unit")
        return u[:, 0]

    # -- verification -----------------------------------------------------
    def verify(self) -> None:
        t, p, n = self.table, self.p, self.dim
        lhs = np.einsum("ijm,mkl->ijkl", t, t) % p
        rhs = np.einsum("jkm,iml->ijkl", t, t) % p
        if not np.array_equal(lhs, rhs):
            raise InputError("multiplication table is not associative")
        eye = np.eye(n, dtype=np.int64)
        if not (np.array_equal(self.left_matrix(self.unit), eye) and np.array_equal(self.right_matrix(self.unit), eye)):
            raise InputError("unit vector is not a two-sided identity")
        total = np.zeros(n, dtype=np.int64)
        for i, e in enumerate(self.unit_decomposition):
            total = (total + e) % p
            for j, f in enumerate(self.unit_decomposition):
                want = e if i == j else np.zeros(n, dtype=np.int64)
                if not np.array_equal(self.mult(e, f), want):
                    raise InputError("unit decomposition is not a set of orthogonal idempotents")
        if not np.array_equal(total, self.unit):
            raise InputError("unit decomposition does not sum to 1")

    def digest(self) -> str:
        if self._digest is None:
            h = hashlib.sha256()
            h.update(f"p={self.p};n={self.dim};".encode())
            h.update(np.ascontiguousarray(self.table).tobytes())
            h.update(np.ascontiguousarray(self.unit).tobytes())
            self._digest = h.hexdigest()
        return self._digest

    def fresh(self) -> "Algebra":
        """An equal algebra with empty caches (used by the independent verifier)."""
        return Algebra(
            self.p,
            self.table.copy(),
            labels=self.labels,
            unit=self.unit.copy(),
            idempotents=[e.copy() for e in self.unit_decomposition],
            quiver=self.quiver,
            paths=self.paths,
            name=self.name,
        )

    def same_as(self, other: "Algebra") -> bool:
        return self is other or (self.p == other.p and self.digest() == other.digest())

    def __repr__(self) -> str:
        nm = f" {self.name}" if self.name else ""
        return f"<Algebra{nm} dim={self.dim} over GF({self.p})>"

    # -- structure --------------------------------------------------------
    def span_products(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Column basis of span{x*y} for columns x of ``xs``, y of ``ys``."""
        if xs.shape[1] == 0 or ys.shape[1] == 0:
            return la.zeros(self.dim, 0)
        prods = np.einsum("ia,jb,ijk->kab", xs, ys, self.table) % self.p
        return la.column_basis(prods.reshape(self.dim, -1), self.p)

    def radical(self) -> np.ndarray:
        """Column basis of the Jacobson radical (trace-form radical, verified)."""
        if self._radical is None:
            self._radical = radical(self)
        return self._radical

    def primitive_idempotents(self, seed: int = 0) -> list[np.ndarray]:
        if self._idempotents is None:
            self._idempotents = primitive_idempotents(self, seed=seed)
        return self._idempotents

    def generators(self) -> np.ndarray:
        """Columns generate the algebra (used to cut down equivariance systems)."""
        if self._generators is None:
            self._generators = _generating_set(self)
        return self._generators

    def opposite(self) -> "Algebra":
        if self._opposite is None:
            op = Algebra(
                self.p,
                np.transpose(self.table, (1, 0, 2)),
                labels=self.labels,
                unit=self.unit,
                idempotents=self.unit_decomposition,
                quiver=self.quiver.reversed() if self.quiver else None,
                paths=[Path(q.target, q.source, q.arrows[::-1]) for q in self.paths] if self.paths else None,
                name=(self.name + "^op") if self.name else "",
                check=False,
            )
            op._opposite = self
            op._radical = self._radical
            op._idempotents = self._idempotents
            self._opposite = op
        return self._opposite


# ---------------------------------------------------------------------------
# construction from a bound quiver


def build_from_quiver(
    q: Quiver,
    relations: list[Relation],
    p: int,
    length_cap: int = DEFAULT_LENGTH_CAP,
    name: str = "",
) -> Algebra:
    """Path algebra of ``q`` modulo length-homogeneous relations."""
    p = la.check_modulus(p)
    if length_cap < 1:
        raise InputError("length_cap must be >= 1")
    rels: list[tuple[Path, list[tuple[int, Path]]]] = []
    for rel in relations:
        terms = [(int(c) % p, _make_path(q, tuple(ps))) for c, ps in rel]
        terms = [(c, t) for c, t in terms if c]
        if not terms:
            continue
        head = terms[0][1]
        for _, t in terms:
            if (t.source, t.target, t.length) != (head.source, head.target, head.length):
                raise InconsistentRelation(
                    f"relation mixes paths with different endpoints or lengths: {head.label} vs {t.label}"
                )
        if head.length < 2:
            raise InconsistentRelation(f"relation of length {head.length} < 2")
        rels.append((head, terms))

    by_length: list[list[Path]] = [[Path(v, v) for v in q.vertices]]
    arrows = [Path(s, t, (nm,)) for nm, s, t in q.arrows]
    # degree -> (survivors, reduction map from all paths to survivor coords)
    survivors: list[list[Path]] = [by_length[0]]
    reducers: list[dict[Path, np.ndarray]] = [
        {b: np.eye(len(by_length[0]), dtype=np.int64)[i] for i, b in enumerate(by_length[0])}
    ]
    degree = 1
    while True:
        if degree == 1:
            level = list(arrows)
        else:
            level = [c for u in by_length[-1] for a in arrows if (c := _compose(u, a)) is not None]
        if not level:
            break
        index = {pth: i for i, pth in enumerate(level)}
        rows = []
        for head, terms in rels:
            ell = head.length
            if ell > degree:
                continue
            for i in range(degree - ell + 1):
                lefts = by_length[i] if i else None
                rights = by_length[degree - ell - i] if degree - ell - i else None
                for u in lefts or [Path(head.source, head.source)]:
                    if u.target != head.source:
                        continue
                    for v in rights or [Path(head.target, head.target)]:
                        if v.source != head.target:
                            continue
                        row = np.zeros(len(level), dtype=np.int64)
                        for c, t in terms:
                            pth = Path(u.source, v.target, u.arrows + t.arrows + v.arrows)
                            row[index[pth]] = (row[index[pth]] + c) % p
                        rows.append(row)
        if rows:
            r, piv, rk = la.rref(np.array(rows), p)
        else:
            r, piv, rk = la.zeros(0, len(level)), [], 0
        pivset = set(piv)
        free = [i for i in range(len(level)) if i not in pivset]
        if not free:
            break
        if degree >= length_cap:
            raise NotFiniteDimensional(
                f"{len(free)} path(s) of length {degree} survive reduction at length_cap={length_cap}"
            )
        pos = {f: k for k, f in enumerate(free)}
        red: dict[Path, np.ndarray] = {}
        for i, pth in enumerate(level):
            vec = np.zeros(len(free), dtype=np.int64)
            if i in pos:
                vec[pos[i]] = 1
            red[pth] = vec
        for row_i, pc in enumerate(piv):
            vec = np.zeros(len(free), dtype=np.int64)
            for f in free:
                vec[pos[f]] = (-r[row_i, f]) % p
            red[level[pc]] = vec
        by_length.append(level)
        survivors.append([level[f] for f in free])
        reducers.append(red)
        degree += 1

    basis = [b for lvl in survivors for b in lvl]
    offsets = np.cumsum([0] + [len(lvl) for lvl in survivors])
    n = len(basis)
    if n >= p:
        raise FieldTooSmall(f"dim A = {n} must be smaller than p = {p}")
    table = np.zeros((n, n, n), dtype=np.int64)
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            w = _compose(u, v)
            if w is None:
                continue
            if u.length == 0:
                w = v
            elif v.length == 0:
                w = u
            d = w.length
            if d >= len(reducers):
                continue
            table[i, j, offsets[d] : offsets[d + 1]] = reducers[d][w]
    idem = [np.eye(n, dtype=np.int64)[i] for i in range(len(q.vertices))]
    alg = Algebra(
        p,
        table,
        labels=[b.label for b in basis],
        idempotents=idem,
        quiver=q,
        paths=basis,
        name=name,
    )
    alg.length_cap = length_cap
    return alg


def from_structure_constants(p: int, dim: int, products: dict[tuple[int, int], dict[int, int]], name: str = "") -> Algebra:
    p = la.check_modulus(p)
    table = np.zeros((dim, dim, dim), dtype=np.int64)
    for (i, j), comb in products.items():
        for k, c in comb.items():
            table[i, j, k] = (table[i, j, k] + c) % p
    return Algebra(p, table, name=name)


# ---------------------------------------------------------------------------
# radical


def radical(a: Algebra) -> np.ndarray:
    p, n = a.p, a.dim
    if n >= p:
        raise FieldTooSmall(f"radical needs p > dim A (dim {n}, p {p})")
    lefts = [a.left_matrix(a.basis_vector(i)) for i in range(n)]
    gram = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            gram[i, j] = gram[j, i] = int(np.trace(lefts[i] @ lefts[j])) % p
    rad = la.kernel_basis(gram, p)
    _verify_radical(a, rad)
    if a.paths is not None:
        arrow_ideal = np.eye(n, dtype=np.int64)[:, [i for i, b in enumerate(a.paths) if b.length > 0]]
        if not (la.in_span(rad, arrow_ideal, p) and la.in_span(arrow_ideal, rad, p)):
            raise RadicalVerificationFailed("trace-form radical differs from the arrow ideal")
    return rad


def _verify_radical(a: Algebra, rad: np.ndarray) -> None:
    p, n = a.p, a.dim
    full = np.eye(n, dtype=np.int64)
    if not (la.in_span(rad, a.span_products(rad, full), p) and la.in_span(rad, a.span_products(full, rad), p)):
        raise RadicalVerificationFailed("radical is not a two-sided ideal")
    power = rad
    for _ in range(n + 1):
        if power.shape[1] == 0:
            break
        power = a.span_products(power, rad)
    else:
        raise RadicalVerificationFailed("radical is not nilpotent")
    if power.shape[1] != 0:
        raise RadicalVerificationFailed("radical is not nilpotent")
    comp = la.complement(rad, p)
    q = comp.shape[1]
    if q == 0:
        return
    change = np.hstack([rad, comp])
    inv = la.inverse(change, p)
    proj = inv[rad.shape[1] :]  # coordinates in the quotient
    ops = [la.chain(p, proj, a.left_matrix(comp[:, i]), comp) for i in range(q)]
    gram = np.array([[int(np.trace(x @ y)) % p for y in ops] for x in ops], dtype=np.int64)
    if la.rank(gram, p) != q:
        raise RadicalVerificationFailed("quotient by the radical has a degenerate trace form")


# ---------------------------------------------------------------------------
# idempotents


def _corner(a: Algebra, e: np.ndarray, space: np.ndarray) -> np.ndarray:
    """Column basis of e*space*e."""
    if space.shape[1] == 0:
        return la.zeros(a.dim, 0)
    le = a.left_matrix(e)
    re = a.right_matrix(e)
    return la.column_basis(la.chain(a.p, le, re, space), a.p)


def is_local_corner(a: Algebra, e: np.ndarray) -> bool:
    """Whether e*A*e is local (equivalently e is primitive).

    e*A*e is local iff Q = eAe / eJe is a field, i.e. Q is commutative and its
    Frobenius-fixed subalgebra {y : y^p = y} is one-dimensional.
    """
    p = a.p
    if not e.any():
        return False
    eae = _corner(a, e, np.eye(a.dim, dtype=np.int64))
    eje = _corner(a, e, a.radical())
    comp_cols = [c for c in range(eae.shape[1])]
    # basis of eAe modulo eJe: greedily extend eJe by columns of eAe
    basis = eje
    qcols = []
    for c in comp_cols:
        v = eae[:, [c]]
        if not la.in_span(basis, v, p):
            basis = np.hstack([basis, v])
            qcols.append(v)
    dq = len(qcols)
    if dq == 0:
        return False
    qb = np.hstack(qcols)
    full = np.hstack([eje, qb])

    def qcoords(x: np.ndarray) -> np.ndarray:
        sol = la.solve(full, x.reshape(-1, 1), p)
        return sol[eje.shape[1] :, 0]

    for i in range(dq):
        for j in range(i + 1, dq):
            x, y = qb[:, i], qb[:, j]
            if qcoords((a.mult(x, y) - a.mult(y, x)) % p).any():
                return False
    frob = np.column_stack([qcoords(a.power(qb[:, i], p)) for i in range(dq)])
    fixed = dq - la.rank((frob - np.eye(dq, dtype=np.int64)) % p, p)
    return fixed == 1


def _split(a: Algebra, e: np.ndarray, rng: np.random.Generator, tries: int) -> tuple[np.ndarray, np.ndarray] | None:
    p = a.p
    ea = la.column_basis(a.left_matrix(e), p)
    dim_ea = ea.shape[1]
    lpinv = la.left_inverse(ea, p)
    eae = _corner(a, e, np.eye(a.dim, dtype=np.int64))
    e_coords = la.mul(lpinv, e.reshape(-1, 1), p)
    for _ in range(tries):
        x = la.mul(eae, rng.integers(0, p, size=(eae.shape[1], 1)), p)[:, 0]
        for lam in range(p):
            y = (x - lam * e) % p
            m = la.chain(p, lpinv, a.left_matrix(y), ea)
            mp = np.eye(dim_ea, dtype=np.int64)
            for _ in range(dim_ea):
                mp = la.mul(mp, m, p)
            im = la.column_basis(mp, p)
            if 0 < im.shape[1] < dim_ea:
                ker = la.kernel_basis(mp, p)
                change = np.hstack([im, ker])
                coords = la.solve(change, e_coords, p)
                f_coords = la.mul(im, coords[: im.shape[1]], p)
                f = la.mul(ea, f_coords, p)[:, 0]
                g = (e - f) % p
                if (
                    np.array_equal(a.mult(f, f), f)
                    and np.array_equal(a.mult(f, e), f)
                    and np.array_equal(a.mult(e, f), f)
                    and f.any()
                    and g.any()
                ):
                    return f, g
    return None


def primitive_idempotents(a: Algebra, seed: int = 0, tries: int = 64) -> list[np.ndarray]:
    """Complete set of orthogonal primitive idempotents (verified)."""
    p = a.p
    rng = np.random.default_rng(seed)
    queue = list(a.unit_decomposition)
    done: list[np.ndarray] = []
    while queue:
        e = queue.pop(0)
        if is_local_corner(a, e):
            done.append(e)
            continue
        parts = _split(a, e, rng, tries)
        if parts is None:
            raise SplittingFailed(f"could not split idempotent after {tries} attempts")
        queue = list(parts) + queue
    total = np.zeros(a.dim, dtype=np.int64)
    for i, e in enumerate(done):
        total = (total + e) % p
        for j, f in enumerate(done):
            want = e if i == j else np.zeros(a.dim, dtype=np.int64)
            if not np.array_equal(a.mult(e, f), want):
                raise SplittingFailed("idempotents are not orthogonal")
    if not np.array_equal(total, a.unit):
        raise SplittingFailed("idempotents do not sum to 1")
    return done


def _generating_set(a: Algebra) -> np.ndarray:
    p, n = a.p, a.dim
    if n == 0:
        return la.zeros(0, 0)
    rad = a.radical()
    rad2 = a.span_products(rad, rad)
    gens = [e.reshape(-1, 1) for e in a.primitive_idempotents()]
    for i in range(rad.shape[1]):
        v = rad[:, [i]]
        if not la.in_span(rad2, v, p):
            rad2 = np.hstack([rad2, v])
            gens.append(v)
    g = np.hstack(gens)
    while True:
        sub = _subalgebra(a, g)
        if sub.shape[1] == n:
            return g
        for i in range(n):
            v = np.eye(n, dtype=np.int64)[:, [i]]
            if not la.in_span(sub, v, p):
                g = np.hstack([g, v])
                break


def _subalgebra(a: Algebra, gens: np.ndarray) -> np.ndarray:
    span = la.column_basis(np.hstack([a.unit.reshape(-1, 1), gens]), a.p)
    while True:
        bigger = la.column_basis(np.hstack([span, a.span_products(span, gens)]), a.p)
        if bigger.shape[1] == span.shape[1]:
            return span
        span = bigger


def path_algebra_example(kind: str, p: int = 7) -> Algebra:
    """The three small test algebras: ``"field"``, ``"A2"`` and ``"dual"`` (k[x]/x^2)."""
    if kind == "field":
        return build_from_quiver(Quiver(("1",), ()), [], p, name=f"GF({p})")
    if kind == "A2":
        return build_from_quiver(Quiver(("1", "2"), (("a", "1", "2"),)), [], p, name="A2")
    if kind == "dual":
        return build_from_quiver(Quiver(("1",), (("x", "1", "1"),)), [[(1, ("x", "x"))]], p, name="k[x]/(x^2)")
    raise ValueError(f"unknown example algebra {kind!r}")
