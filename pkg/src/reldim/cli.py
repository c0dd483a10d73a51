"""Command-line front end.

Exit status: 0 on success, 1 when a mathematical check fails (hypothesis not
met, certificate rejected, ...), 2 on malformed input.  A short run log with
the modulus, caps, seed and input digests goes to stderr (or ``--log``).
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__, linalg as la
from .cotilting import cotilting_tower, is_cotilting
from .errors import AlgebraMismatch, InputError, ReldimError
from .functor import end_algebra, gldim_bound_tower, gldim_end
from .modules import AtLeast, ext_dim, global_dim, inj_dim, proj_dim, syzygy
from .textio import format_algebra, format_module, load_algebra, load_certificate, load_complex, load_module, save_certificate
from .towers import SubcatOracle, encode_tower, resolving_tower
from .verifier import verify_data


def _fmt(v) -> str:
    return str(v) if not isinstance(v, AtLeast) else f">= {v.bound}"


def _digest(path) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
    except OSError:
        return "unreadable"


class RunLog:
    def __init__(self, args):
        self.lines = [f"command {args.command}", f"seed {args.seed}", f"caps resolution={args.cap} iso-tries=64", f"backend {la.BACKEND}"]
        self.dest = getattr(args, "log", None)

    def add(self, line: str) -> None:
        self.lines.append(line)

    def inputs(self, *paths) -> None:
        for p in paths:
            if p:
                self.add(f"input {p} sha256:{_digest(p)}")

    def flush(self) -> None:
        text = "".join(f"# {x}\n" for x in self.lines)
        if self.dest:
            Path(self.dest).write_text(text)
        else:
            sys.stderr.write(text)


def _alg(args, log: RunLog):
    a = load_algebra(args.algebra)
    log.inputs(args.algebra)
    log.add(f"p {a.p}")
    if getattr(a, "length_cap", None):
        log.add(f"length-cap {a.length_cap}")
    return a


# ---------------------------------------------------------------------------
# commands


def cmd_gldim(args, log):
    a = _alg(args, log)
    print(_fmt(global_dim(a, args.cap)))
    return 0


def cmd_pd(args, log):
    a = _alg(args, log)
    log.inputs(args.module)
    print(_fmt(proj_dim(load_module(args.module, a), args.cap)))
    return 0


def cmd_id(args, log):
    a = _alg(args, log)
    log.inputs(args.module)
    print(_fmt(inj_dim(load_module(args.module, a), args.cap)))
    return 0


def cmd_syzygy(args, log):
    a = _alg(args, log)
    log.inputs(args.module)
    s = syzygy(load_module(args.module, a), args.n)
    text = format_module(s)
    if args.out:
        Path(args.out).write_text(text)
        print(f"dim {s.dim}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_ext(args, log):
    a = _alg(args, log)
    log.inputs(args.m, args.n)
    m, n = load_module(args.m, a), load_module(args.n, a)
    print(ext_dim(m, n, args.i))
    return 0


def cmd_end_algebra(args, log):
    a = _alg(args, log)
    log.inputs(args.module)
    ctx = end_algebra(load_module(args.module, a), seed=args.seed)
    text = format_algebra(ctx.algebra)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"dim {ctx.algebra.dim}; primitive idempotents {len(ctx.algebra.primitive_idempotents())}", file=sys.stderr)
    return 0


def cmd_gldim_end(args, log):
    a = _alg(args, log)
    log.inputs(args.module)
    ctx = end_algebra(load_module(args.module, a), seed=args.seed)
    print(_fmt(gldim_end(ctx, args.cap)))
    return 0


def _oracle(choice: str, a, log, cap):
    if choice in ("proj", "all"):
        return SubcatOracle(choice), None
    kind, _, path = choice.partition(":")
    if kind not in ("add", "extorth") or not path:
        raise InputError(f"unknown oracle {choice!r} (use proj, all, add:FILE or extorth:FILE)")
    log.inputs(path)
    t = load_module(path, a)
    if kind == "add":
        return SubcatOracle.add(t), t
    d = inj_dim(t, cap)
    if isinstance(d, AtLeast):
        raise ReldimError(f"id-at-cap: injective dimension of {path} is {d}")
    return SubcatOracle.ext_orth(t, d), t


def _default_d(oracle: SubcatOracle, a, cap) -> int:
    if oracle.kind == "proj":
        d = global_dim(a, cap)
        if isinstance(d, AtLeast):
            raise ReldimError(f"gldim-at-cap: global dimension {d}; pass --d")
        return d
    if oracle.kind == "extorth":
        return oracle.bound
    return 0


def cmd_tower(args, log):
    a = _alg(args, log)
    oracle, t = _oracle(args.oracle, a, log, args.cap)
    log.add(f"oracle {oracle.label()}")
    complexes = []
    for path in args.complex:
        log.inputs(path)
        complexes.append(load_complex(path, a))
    ctx = None
    if args.via_endalgebra:
        if oracle.kind != "add":
            raise InputError("--via-endalgebra needs --oracle add:FILE")
        ctx = end_algebra(t, seed=args.seed)
    d = args.d if args.d is not None else (None if ctx else _default_d(oracle, a, args.cap))
    if d is not None:
        log.add(f"d {d}")

    def work(idx):
        seed = args.seed + idx
        c = complexes[idx]
        if ctx is not None:
            w = gldim_bound_tower(ctx, c, seed=seed, cap=args.cap)
        else:
            w = resolving_tower(c, oracle, d, seed=seed)
        data = encode_tower(w)
        return w, data, verify_data(data, a.fresh())

    threads = max(1, args.threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(work, i) for i in range(len(complexes))]
        results = []
        status = 0
        for i, fut in enumerate(futures):
            try:
                results.append(fut.result())
            except ReldimError as exc:
                if isinstance(exc, InputError):
                    raise
                print(f"complex {i}: {exc.code}: {exc}")
                status = 1
                results.append(None)
    for i, res in enumerate(results):
        if res is None:
            continue
        w, data, verdict = res
        print(f"complex {i}: depth {w.depth} ({w.strategy}) {'verified' if verdict else 'REJECTED ' + str(verdict)}")
        if not verdict:
            status = 1
        if args.out:
            out = Path(args.out)
            if len(complexes) > 1:
                out.mkdir(parents=True, exist_ok=True)
                out = out / f"cert_{i}.txt"
            save_certificate(data, out)
    return status


def cmd_verify(args, log):
    a = _alg(args, log)
    log.inputs(args.certificate)
    data = load_certificate(args.certificate)
    if data.get("algebra", {}).get("digest") != a.digest():
        raise AlgebraMismatch("certificate was made for a different algebra", path=args.certificate)
    verdict = verify_data(data, a.fresh())
    if verdict:
        print(f"ok: depth {data.get('depth')} oracle {data.get('oracle', {}).get('kind')}")
        return 0
    print(f"rejected: {verdict}")
    return 1


def cmd_cotilting_check(args, log):
    a = _alg(args, log)
    log.inputs(args.module)
    t = load_module(args.module, a)
    samples = []
    if args.samples:
        for path in sorted(Path(args.samples).glob("*.mod")):
            log.inputs(path)
            samples.append(load_module(path, a))
    rep = is_cotilting(t, samples, args.cap)
    for line in rep.lines():
        print(line)
    print("cotilting (samples only for condition 3): " + ("yes" if rep.ok else "no"))
    if rep.ok and args.complex:
        for path in args.complex:
            w = cotilting_tower(t, load_complex(path, a), seed=args.seed, cap=args.cap)
            data = encode_tower(w)
            print(f"tower for {path}: depth {w.depth} {'verified' if verify_data(data, a.fresh()) else 'REJECTED'}")
    return 0 if rep.ok else 1


def cmd_selftest(args, log):
    from .selftest import run

    ok = True
    for name, passed in run(seed=args.seed):
        print(f"{'PASS' if passed else 'FAIL'} {name}")
        ok &= passed
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reldim", description="Homological invariants and witness towers over GF(p).")
    ap.add_argument("--version", action="version", version=f"reldim {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (recorded in the run log)")
    common.add_argument("--cap", type=int, default=64, help="cap for projective/injective/global dimension")
    common.add_argument("--log", help="write the run log here instead of stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("gldim", cmd_gldim, "global dimension")
    p.add_argument("algebra")
    for name, fn in (("pd", cmd_pd), ("id", cmd_id)):
        p = add(name, fn, f"{'projective' if name == 'pd' else 'injective'} dimension of a module")
        p.add_argument("algebra")
        p.add_argument("module")
    p = add("syzygy", cmd_syzygy, "n-th syzygy of a module")
    p.add_argument("algebra")
    p.add_argument("module")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--out")
    p = add("ext", cmd_ext, "dim Ext^i(M, N)")
    p.add_argument("algebra")
    p.add_argument("m")
    p.add_argument("n")
    p.add_argument("-i", type=int, default=1)
    p = add("end-algebra", cmd_end_algebra, "structure constants of End(T)")
    p.add_argument("algebra")
    p.add_argument("module")
    p.add_argument("--out")
    p = add("gldim-end", cmd_gldim_end, "global dimension of End(T)")
    p.add_argument("algebra")
    p.add_argument("module")
    p = add("tower", cmd_tower, "build and verify witness towers")
    p.add_argument("algebra")
    p.add_argument("complex", nargs="+")
    p.add_argument("--oracle", default="proj", help="proj | all | add:FILE | extorth:FILE")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--via-endalgebra", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="certificate file (or directory for several complexes)")
    p = add("verify", cmd_verify, "check a certificate against an algebra")
    p.add_argument("algebra")
    p.add_argument("certificate")
    p = add("cotilting-check", cmd_cotilting_check, "check the cotilting conditions")
    p.add_argument("algebra")
    p.add_argument("--module", required=True)
    p.add_argument("--samples", help="directory of *.mod sample modules")
    p.add_argument("--complex", nargs="*", default=[])
    add("selftest", cmd_selftest, "quick built-in checks")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    log = RunLog(args)
    try:
        status = args.func(args, log)
    except InputError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        status = exc.exit_status
    except ReldimError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        status = exc.exit_status
    log.add(f"exit {status}")
    log.flush()
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
