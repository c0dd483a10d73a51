"""Text formats: algebra, module and complex files, and certificates.

Algebra file::

    field 7
    vertices 1 2
    arrows
      a: 1 -> 2
    relations
      1*a.b - 1*c.d = 0
    length-cap 32

or, instead of vertices/arrows/relations::

    structure-constants 2
      0*0 = 1*0
      0*1 = 1*1
      1*0 = 1*1

Module file (quiver algebra)::

    dims 1=2 2=1
    arrow a
      1 0

Module file (structure constants): ``dim d`` then ``basis i`` followed by the
d x d matrix of v -> v * b_i.  Matrices are given row by row; an empty
matrix (no rows or no columns) takes no lines.

Complex file::

    degrees -1 0
    term -1 s1.mod
    term 0 p1.mod
    diff -1
      1
      0

``#`` starts a comment everywhere.  Certificates are a header line
``reldim-certificate v1`` followed by one JSON document.
"""

from __future__ import annotations

import json
import re
from pathlib import Path as FsPath

import numpy as np

from .algebra import DEFAULT_LENGTH_CAP, Algebra, Quiver, build_from_quiver, from_structure_constants
from .complexes import Complex
from .linalg import FieldError, is_prime
from .errors import InputError, ReldimError
from .modules import Module, module_from_arrows, zero_module

CERT_HEADER = "reldim-certificate"
CERT_VERSION = 1


class _Lines:
    def __init__(self, text: str, path: str):
        self.path = path
        self.items: list[tuple[int, list[str]]] = []
        self.cols: dict[int, list[int]] = {}
        for n, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            found = list(re.finditer(r"\S+", line))
            if found:
                self.items.append((n, [m.group(0) for m in found]))
                self.cols[n] = [m.start() + 1 for m in found]
        self.pos = 0

    def peek(self) -> tuple[int, list[str]] | None:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self) -> tuple[int, list[str]]:
        item = self.peek()
        if item is None:
            raise InputError("unexpected end of file", path=self.path, line=self.last_line() + 1)
        self.pos += 1
        return item

    def last_line(self) -> int:
        return self.items[-1][0] if self.items else 0

    def error(self, msg: str, line: int, column: int | None = None) -> InputError:
        return InputError(msg, path=self.path, line=line, column=column)

    def column(self, line: int, k: int) -> int | None:
        cols = self.cols.get(line, [])
        return cols[k] if k < len(cols) else None

    def int_(self, tok: str, line: int, k: int | None = None) -> int:
        try:
            return int(tok)
        except ValueError:
            col = self.column(line, k) if k is not None else None
            raise self.error(f"expected an integer, got {tok!r}", line, col) from None

    def matrix(self, rows: int, cols: int) -> np.ndarray:
        out = np.zeros((rows, cols), dtype=np.int64)
        if cols == 0:
            return out
        for r in range(rows):
            n, toks = self.next()
            if len(toks) != cols:
                raise self.error(f"expected {cols} entries in matrix row, got {len(toks)}", n, self.column(n, min(len(toks), cols)))
            out[r] = [self.int_(t, n, k) for k, t in enumerate(toks)]
        return out


def _read(path) -> str:
    try:
        return FsPath(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", path=str(path)) from None


# ---------------------------------------------------------------------------
# algebra


_TERM = re.compile(r"^([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z_][\w.]*)$")


def _parse_relation(text: str, line: int, lines: _Lines) -> list[tuple[int, tuple[str, ...]]]:
    if "=" not in text:
        raise lines.error("relation must end in '= 0'", line)
    lhs, rhs = text.split("=", 1)
    if rhs.strip() != "0":
        raise lines.error("relation right-hand side must be 0", line)
    terms = []
    for m in re.finditer(r"[+-]?[^+-]+", lhs.replace(" ", "")):
        tok = m.group(0)
        tm = _TERM.match(tok)
        if not tm:
            raise lines.error(f"cannot parse relation term {tok!r}", line, m.start() + 1)
        sign = -1 if tm.group(1) == "-" else 1
        coef = int(tm.group(2)) if tm.group(2) else 1
        terms.append((sign * coef, tuple(tm.group(3).split("."))))
    return terms


def parse_algebra(text: str, path: str = "<algebra>") -> Algebra:
    lines = _Lines(text, path)
    p = None
    vertices: list[str] = []
    arrows: list[tuple[str, str, str]] = []
    rels = []
    cap = DEFAULT_LENGTH_CAP
    sc_dim = None
    products: dict[tuple[int, int], dict[int, int]] = {}
    section = None
    name = FsPath(path).stem
    while lines.peek() is not None:
        n, toks = lines.next()
        key = toks[0]
        if key == "field":
            if len(toks) != 2:
                raise lines.error("usage: field <prime>", n)
            p = lines.int_(toks[1], n, 1)
            if not is_prime(p):
                raise lines.error(f"field modulus must be a prime, got {p}", n, lines.column(n, 1))
            section = None
        elif key == "vertices":
            vertices = toks[1:]
            section = None
        elif key == "arrows":
            section = "arrows"
        elif key == "relations":
            section = "relations"
        elif key == "length-cap":
            cap = lines.int_(toks[1], n, 1) if len(toks) == 2 else 0
            if cap < 1:
                raise lines.error("length-cap must be a positive integer", n)
        elif key == "structure-constants":
            if len(toks) != 2:
                raise lines.error("usage: structure-constants <dim>", n)
            sc_dim = lines.int_(toks[1], n, 1)
            section = "products"
        elif key == "name":
            name = " ".join(toks[1:])
        elif section == "arrows":
            m = re.match(r"^(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", " ".join(toks))
            if not m:
                raise lines.error("arrow lines look like 'name: source -> target'", n)
            for end, k in ((m.group(2), 1), (m.group(3), len(toks) - 1)):
                if end not in vertices:
                    raise lines.error(f"arrow {m.group(1)}: {end!r} is not a declared vertex", n, lines.column(n, k))
            arrows.append((m.group(1), m.group(2), m.group(3)))
        elif section == "relations":
            rels.append((n, _parse_relation(" ".join(toks), n, lines)))
        elif section == "products":
            m = re.match(r"^(\d+)\s*\*\s*(\d+)\s*=\s*(.+)$", " ".join(toks))
            if not m:
                raise lines.error("product lines look like 'i*j = c*k + ...'", n)
            i, j = int(m.group(1)), int(m.group(2))
            comb: dict[int, int] = {}
            rhs = m.group(3).replace(" ", "")
            if rhs != "0":
                for t in re.finditer(r"[+-]?[^+-]+", rhs):
                    tm = re.match(r"^([+-]?)(\d+)\*(\d+)$", t.group(0))
                    if not tm:
                        raise lines.error(f"cannot parse product term {t.group(0)!r}", n)
                    c = int(tm.group(2)) * (-1 if tm.group(1) == "-" else 1)
                    k = int(tm.group(3))
                    comb[k] = comb.get(k, 0) + c
            for idx in (i, j, *comb):
                if sc_dim is not None and not 0 <= idx < sc_dim:
                    raise lines.error(f"basis index {idx} out of range", n)
            products[(i, j)] = comb
        else:
            raise lines.error(f"unexpected line starting with {key!r}", n, lines.column(n, 0))
    if p is None:
        raise InputError("missing 'field p' line", path=path)
    try:
        if sc_dim is not None:
            return from_structure_constants(p, sc_dim, products, name=name)
        if not vertices:
            raise InputError("missing 'vertices' line", path=path)
        q = Quiver(tuple(vertices), tuple(arrows))
        return build_from_quiver(q, [r for _, r in rels], p, length_cap=cap, name=name)
    except InputError as exc:
        if exc.path is None:
            raise type(exc)(str(exc), path=path) from None
        raise
    except FieldError as exc:
        raise InputError(str(exc), path=path) from None


def load_algebra(path) -> Algebra:
    return parse_algebra(_read(path), str(path))


def format_algebra(a: Algebra) -> str:
    """Structure-constant form of any algebra."""
    out = [f"field {a.p}", f"structure-constants {a.dim}"]
    for i in range(a.dim):
        for j in range(a.dim):
            row = a.table[i, j]
            terms = [f"{int(c)}*{k}" for k, c in enumerate(row) if c]
            if terms:
                out.append(f"  {i}*{j} = " + " + ".join(terms))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# modules


def parse_module(text: str, a: Algebra, path: str = "<module>") -> Module:
    lines = _Lines(text, path)
    head = lines.peek()
    if head is None:
        raise InputError("empty module file", path=path)
    n, toks = lines.next()
    try:
        if toks[0] == "dims":
            if a.quiver is None:
                raise lines.error("'dims' needs a quiver-presented algebra", n)
            dims = {v: 0 for v in a.quiver.vertices}
            for k, tok in enumerate(toks[1:], start=1):
                if "=" not in tok:
                    raise lines.error(f"expected vertex=dim, got {tok!r}", n, lines.column(n, k))
                v, d = tok.split("=", 1)
                if v not in dims:
                    raise lines.error(f"unknown vertex {v!r}", n, lines.column(n, k))
                dims[v] = lines.int_(d, n, k)
            maps = {}
            while lines.peek() is not None:
                n, toks = lines.next()
                if toks[0] != "arrow" or len(toks) != 2:
                    raise lines.error("expected 'arrow <name>'", n)
                if toks[1] not in [x[0] for x in a.quiver.arrows]:
                    raise lines.error(f"unknown arrow {toks[1]!r}", n, lines.column(n, 1))
                name, s, t = a.quiver.arrow(toks[1])
                maps[name] = lines.matrix(dims[t], dims[s])
            return module_from_arrows(a, dims, maps, name=FsPath(path).stem)
        if toks[0] == "dim":
            d = lines.int_(toks[1], n, 1)
            act = np.zeros((a.dim, d, d), dtype=np.int64)
            seen = set()
            while lines.peek() is not None:
                n, toks = lines.next()
                if toks[0] != "basis" or len(toks) != 2:
                    raise lines.error("expected 'basis <index>'", n)
                i = lines.int_(toks[1], n, 1)
                if not 0 <= i < a.dim:
                    raise lines.error(f"basis index {i} out of range", n)
                act[i] = lines.matrix(d, d)
                seen.add(i)
            if len(seen) != a.dim:
                raise InputError(f"module gives {len(seen)} of {a.dim} basis actions", path=path)
            return Module(a, act, name=FsPath(path).stem)
    except InputError:
        raise
    except ReldimError as exc:
        raise InputError(f"not a module: {exc}", path=path, line=head[0], column=1) from None
    raise lines.error("module files start with 'dims' or 'dim'", n)


def load_module(path, a: Algebra) -> Module:
    return parse_module(_read(path), a, str(path))


def format_matrix(m: np.ndarray, indent: str = "  ") -> list[str]:
    if m.shape[1] == 0:
        return []
    return [indent + " ".join(str(int(x)) for x in row) for row in m]


def format_module(m: Module) -> str:
    out = [f"dim {m.dim}"]
    for i in range(m.algebra.dim):
        out.append(f"basis {i}")
        out.extend(format_matrix(m.action[i]))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# complexes


def parse_complex(text: str, a: Algebra, path: str = "<complex>") -> Complex:
    lines = _Lines(text, path)
    base = FsPath(path).parent
    n, toks = lines.next()
    if toks[0] != "degrees" or len(toks) != 3:
        raise lines.error("complex files start with 'degrees <lo> <hi>'", n)
    lo, hi = lines.int_(toks[1], n, 1), lines.int_(toks[2], n, 2)
    if hi < lo:
        raise lines.error("degrees: hi < lo", n)
    terms: dict[int, Module] = {}
    diffs: dict[int, np.ndarray] = {}
    while lines.peek() is not None:
        n, toks = lines.next()
        if toks[0] == "term" and len(toks) == 3:
            i = lines.int_(toks[1], n, 1)
            if not lo <= i <= hi:
                raise lines.error(f"term degree {i} outside {lo}..{hi}", n)
            terms[i] = load_module(base / toks[2], a)
        elif toks[0] == "diff" and len(toks) == 2:
            i = lines.int_(toks[1], n, 1)
            if i not in terms or i + 1 not in terms:
                raise lines.error(f"diff {i} must follow terms {i} and {i + 1}", n)
            diffs[i] = lines.matrix(terms[i + 1].dim, terms[i].dim)
        else:
            raise lines.error("expected 'term <deg> <file>' or 'diff <deg>'", n)
    z = zero_module(a)
    mods = [terms.get(i, z) for i in range(lo, hi + 1)]
    ds = [diffs.get(i, np.zeros((mods[k + 1].dim, mods[k].dim), dtype=np.int64)) for k, i in enumerate(range(lo, hi))]
    try:
        return Complex(a, lo, mods, ds)
    except ReldimError as exc:
        raise InputError(f"invalid complex: {exc}", path=path) from None


def load_complex(path, a: Algebra) -> Complex:
    return parse_complex(_read(path), a, str(path))


def write_complex(c: Complex, directory, stem: str = "c") -> FsPath:
    """Write c as a complex file plus one module file per term."""
    d = FsPath(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = [f"degrees {c.lo} {max(c.hi, c.lo)}"]
    for i in c.degrees():
        fn = f"{stem}_{i}.mod".replace("-", "m")
        (d / fn).write_text(format_module(c.term(i)))
        out.append(f"term {i} {fn}")
    for i in range(c.lo, c.hi):
        out.append(f"diff {i}")
        out.extend(format_matrix(c.dmat(i)))
    path = d / f"{stem}.cx"
    path.write_text("\n".join(out) + "\n")
    return path


# ---------------------------------------------------------------------------
# certificates


def dump_certificate(data: dict) -> str:
    body = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return f"{CERT_HEADER} v{CERT_VERSION}\n{body}\n"


def parse_certificate(text: str, path: str = "<certificate>") -> dict:
    first, _, rest = text.partition("\n")
    parts = first.strip().split()
    if len(parts) != 2 or parts[0] != CERT_HEADER or not parts[1].startswith("v"):
        raise InputError(f"missing '{CERT_HEADER} v{CERT_VERSION}' header", path=path, line=1, column=1)
    if parts[1] != f"v{CERT_VERSION}":
        raise InputError(f"unsupported certificate version {parts[1]!r}", path=path, line=1, column=len(parts[0]) + 2)
    try:
        data = json.loads(rest)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed certificate: {exc.msg}", path=path, line=exc.lineno + 1, column=exc.colno) from None
    if not isinstance(data, dict) or "tower" not in data or "algebra" not in data:
        raise InputError("certificate lacks the tower or algebra section", path=path, line=2)
    return data


def load_certificate(path) -> dict:
    return parse_certificate(_read(path), str(path))


def save_certificate(data: dict, path) -> None:
    FsPath(path).write_text(dump_certificate(data))
