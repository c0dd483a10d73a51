import json
import shutil

import numpy as np
import pytest

from conftest import DATA
from reldim.cli import main
from reldim.errors import InputError
from reldim.samples import random_complex
from reldim.textio import (
    format_algebra,
    format_module,
    load_algebra,
    load_complex,
    parse_algebra,
    parse_certificate,
    parse_module,
    write_complex,
)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def work(tmp_path):
    for f in DATA.iterdir():
        shutil.copy(f, tmp_path / f.name)
    return tmp_path


def test_gldim(capsys, work):
    code, out, err = run(capsys, "gldim", work / "a2.alg")
    assert code == 0 and out.strip() == "1"
    assert "# p 7" in err and "# seed 0" in err and "sha256:" in err
    assert run(capsys, "gldim", work / "gf7.alg")[1].strip() == "0"
    assert run(capsys, "gldim", work / "dual.alg", "--cap", "5")[1].strip() == ">= 5"


def test_module_commands(capsys, work):
    assert run(capsys, "pd", work / "a2.alg", work / "a2_s1.mod")[1].strip() == "1"
    assert run(capsys, "id", work / "dual.alg", work / "dual_free.mod")[1].strip() == "0"
    assert run(capsys, "ext", work / "dual.alg", work / "dual_k.mod", work / "dual_k.mod", "-i", "3")[1].strip() == "1"
    code, out, _ = run(capsys, "syzygy", work / "dual.alg", work / "dual_k.mod")
    assert code == 0 and out.startswith("dim 1")
    code, out, _ = run(capsys, "gldim-end", work / "dual.alg", work / "dual_t.mod")
    assert out.strip() == "2"
    code, _, _ = run(capsys, "end-algebra", work / "dual.alg", work / "dual_t.mod", "--out", work / "end.alg")
    assert code == 0 and load_algebra(work / "end.alg").dim == 5


def test_tower_and_verify(capsys, work):
    code, out, _ = run(capsys, "tower", work / "a2.alg", work / "a2_s1.cx", work / "a2_p.cx", "--out", work / "certs")
    assert code == 0 and out.count("verified") == 2
    cert = work / "certs" / "cert_0.txt"
    code, out, _ = run(capsys, "verify", work / "a2.alg", cert)
    assert code == 0 and out.startswith("ok")
    # mutated certificate: exit 1 with the reason
    data = parse_certificate(cert.read_text())
    data["depth"] += 1
    bad = work / "bad.txt"
    bad.write_text("reldim-certificate v1\n" + json.dumps(data) + "\n")
    code, out, _ = run(capsys, "verify", work / "a2.alg", bad)
    assert code == 1 and "depth" in out
    # different algebra: exit 2
    code, _, err = run(capsys, "verify", work / "dual.alg", cert)
    assert code == 2 and "algebra-mismatch" in err
    # truncated file: exit 2
    bad.write_text(cert.read_text()[:200])
    code, _, err = run(capsys, "verify", work / "a2.alg", bad)
    assert code == 2 and ":2:" in err
    bad.write_text(cert.read_text().replace("v1", "v9", 1))
    code, _, err = run(capsys, "verify", work / "a2.alg", bad)
    assert code == 2 and "version" in err


def test_hypothesis_failed(capsys, work):
    code, out, _ = run(capsys, "tower", work / "dual.alg", work / "dual_k.cx", "--oracle", "proj", "--d", "1")
    assert code == 1 and "hypothesis-failed" in out


def test_tower_oracles(capsys, work):
    code, out, _ = run(capsys, "tower", work / "dual.alg", work / "dual_k.cx", "--oracle", f"add:{work / 'dual_t.mod'}", "--via-endalgebra")
    assert code == 0 and "verified" in out
    code, out, _ = run(capsys, "tower", work / "dual.alg", work / "dual_k.cx", "--oracle", "all", "--d", "0")
    assert code == 0
    code, out, _ = run(capsys, "tower", work / "dual.alg", work / "dual_k.cx", "--oracle", f"extorth:{work / 'dual_free.mod'}")
    assert code == 0 and "verified" in out
    code, _, err = run(capsys, "tower", work / "dual.alg", work / "dual_k.cx", "--oracle", "bogus")
    assert code == 2


def test_cotilting_check(capsys, work):
    samples = work / "samples"
    samples.mkdir()
    shutil.copy(work / "dual_k.mod", samples / "k.mod")
    shutil.copy(work / "dual_free.mod", samples / "free.mod")
    code, out, _ = run(capsys, "cotilting-check", work / "dual.alg", "--module", work / "dual_free.mod", "--samples", samples)
    assert code == 0 and "witnessed on 2 of 2" in out
    code, out, _ = run(capsys, "cotilting-check", work / "dual.alg", "--module", work / "dual_k.mod", "--cap", "6")
    assert code == 1 and "condition 1 (finite injective dimension): no" in out


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


def test_reproducible_and_ordered(capsys, work, a2):
    rng = np.random.default_rng(3)
    paths = [write_complex(random_complex(a2, rng), work / "cx", f"c{i}") for i in range(5)]
    outs = []
    for threads in ("1", "3", "3"):
        d = work / f"out{threads}{len(outs)}"
        code, out, err = run(capsys, "tower", work / "a2.alg", *paths, "--threads", threads, "--seed", "9", "--out", d)
        assert code == 0
        outs.append((out, err, [(d / f"cert_{i}.txt").read_bytes() for i in range(5)]))
    assert outs[0] == outs[1] == outs[2]


def test_malformed_inputs(capsys, work):
    (work / "bad.mod").write_text("dims 1=2\narrow x\n  0 q\n  0 0\n")
    code, _, err = run(capsys, "pd", work / "dual.alg", work / "bad.mod")
    assert code == 2 and "bad.mod:3:5" in err
    (work / "bad.alg").write_text("field 8\nvertices 1\n")
    code, _, err = run(capsys, "gldim", work / "bad.alg")
    assert code == 2 and "bad.alg:1:7" in err
    code, _, _ = run(capsys, "gldim", work / "missing.alg")
    assert code == 2


def test_formats_round_trip(a2, dual, rng, tmp_path):
    for a in (a2, dual):
        b = parse_algebra(format_algebra(a))
        assert np.array_equal(b.table, a.table)
        c = random_complex(a, rng)
        back = load_complex(write_complex(c, tmp_path, "c"), a)
        assert back.same(c)
    m = parse_module(format_module(c.term(c.lo)), dual if c.algebra is dual else a2)
    assert m.dim == c.term(c.lo).dim
    with pytest.raises(InputError):
        parse_module("dim 1\nbasis 0\n 1\n", dual)
