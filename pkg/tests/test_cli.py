import json
import subprocess
import sys

import pytest

from possfusion import fixtures as fx
from possfusion import kbio
from possfusion.cli import main
from possfusion.fusion import fuse
from possfusion.operators import builtin
from possfusion.possibilistic import base_equivalent, normalize, union


@pytest.fixture
def kb(tmp_path):
    def write(name, base):
        path = tmp_path / name
        kbio.dump(base, path)
        return str(path)
    return write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def ex1(kb):
    b1, b2, _ = fx.example1()
    return kb("b1.kb", b1), kb("b2.kb", b2)


@pytest.fixture
def ex2(kb):
    b1, b2, _ = fx.example2()
    return kb("e1.kb", b1), kb("e2.kb", b2)


def test_merge_example1(ex1, capsys):
    code, out, _ = run(["merge", *ex1, "--op", "amean", "--normalize"], capsys)
    assert code == 0
    got = kbio.loads(out)
    assert base_equivalent(got.with_vocabulary(("phi", "psi")), fx.example1()[2])
    assert "# Inc(union) = 0" in out and "# Inc(fusion) = 0" in out
    assert "# extraction:" in out


def test_merge_min_is_union(ex2, capsys):
    code, out, _ = run(["merge", *ex2, "--op", "min", "--raw"], capsys)
    b1, b2, _ = fx.example2()
    assert base_equivalent(kbio.loads(out, b1.vocabulary), union(b1, b2))
    assert "# Inc(union) = 0.5" in out


def test_merge_single(ex1, capsys):
    code, out, _ = run(["merge", ex1[0], "--op", "prod"], capsys)
    b1 = fx.example1()[0]
    assert base_equivalent(kbio.loads(out, b1.vocabulary), b1)


@pytest.mark.parametrize("flag", ["--raw", "--normalize"])
def test_merge_round_trip(ex2, capsys, tmp_path, flag):
    target = tmp_path / "out.kb"
    assert main(["merge", *ex2, "--op", "prod", flag, "-o", str(target)]) == 0
    b1, b2, _ = fx.example2()
    fused = fuse([b1, b2], builtin("prod"))
    want = normalize(fused) if flag == "--normalize" else fused
    assert base_equivalent(kbio.load(target, b1.vocabulary), want)


def test_structured_output_is_deterministic(ex2, capsys):
    args = ["merge", *ex2, "--op", "prod", "--format", "structured", "--raw"]
    _, a, _ = run(args, capsys)
    _, b, _ = run(args, capsys)
    assert a == b
    rec = json.loads(a)
    assert rec["inc_fusion"] == pytest.approx(.75) and rec["inc_union"] == pytest.approx(.5)
    assert all(1 <= len(it["provenance"]) <= 2 for it in rec["items"])


def test_query(ex1, ex2, kb, capsys):
    fused = kb("f.kb", normalize(fuse(fx.example1()[:2], builtin("amean"))))
    assert run(["query", fused, "-f", "phi"], capsys)[1].strip() == "0.5"
    assert run(["query", fused, "-f", "phi | ~phi"], capsys)[1].strip() == "1"
    assert run(["query", *ex1, "--op", "amean", "-f", "phi", "--alpha", ".5"], capsys)[1] == "yes\n"
    assert run(["query", *ex1, "--op", "amean", "-f", "phi", "--alpha", ".6"], capsys)[1] == "no\n"
    assert run(["query", *ex2, "--op", "prod", "-f", "xi"], capsys)[1].strip() == "0"
    rec = json.loads(run(["query", fused, "-f", "phi", "--format", "structured"], capsys)[1])
    assert rec["degree"] == pytest.approx(.5)


def test_inc(ex2, capsys):
    code, out, _ = run(["inc", *ex2, "--op", "prod"], capsys)
    assert code == 0
    assert "Inc(union) = 0.5" in out and "Inc(fusion) = 0.75" in out


def test_lambda(kb, capsys):
    a = kb("a.kb", fx.B([("p", .8)]))
    b = kb("b.kb", fx.B([("~p", .8)]))
    code, out, _ = run(["merge", a, b, "--lambda", "1", "--lambda", ".3"], capsys)
    assert code == 0 and "# Inc(fusion) = 0.3" in out and "# extraction: p\n" in out
    assert run(["merge", a, b, "--lambda", "1"], capsys)[0] == 2
    assert run(["merge", a, b, "--op", "prod", "--lambda", "1", "--lambda", "1"], capsys)[0] == 2


def test_adaptive(kb, capsys):
    b1, b2 = fx.strong_conflict()
    args = ["merge", kb("s1.kb", b1), kb("s2.kb", b2), "--adaptive", "max", "prod"]
    code, out, _ = run(args, capsys)
    assert code == 0 and "adaptive(max,prod,h=1)" in out
    code, out, _ = run(args + ["--h", "0"], capsys)
    assert "h=0" in out
    assert run(["merge", kb("s3.kb", b1), "--adaptive", "min", "prod"], capsys)[0] == 4


def test_postulates_check(capsys, tmp_path):
    code, out, _ = run(["postulates", "--check", "P3", "--op", "prod", "--trials", "1000"], capsys)
    assert code == 0 and "P3 prod: holds" in out
    wdir = tmp_path / "w"
    code, out, _ = run(["postulates", "--check", "Arb", "--op", "psum", "--trials", "50",
                        "--witness-dir", str(wdir)], capsys)
    assert "Arb psum: fails" in out and (wdir / "manifest.json").exists()
    manifest = json.loads((wdir / "manifest.json").read_text())
    k = kbio.load(wdir / manifest["args"]["k"])
    assert len(k) >= 1
    rec = json.loads(run(["postulates", "--check", "Maj", "--op", "prod", "--conditioned",
                          "--trials", "30", "--format", "structured"], capsys)[1])
    assert rec["status"] == "holds" and "footnote 4" in rec["condition_notes"]


def test_postulates_needs_mode(capsys):
    assert run(["postulates"], capsys)[0] == 2


def test_classify_op(capsys, tmp_path):
    code, out, _ = run(["classify-op", "--op", "luk"], capsys)
    rows = {line.split()[0]: line.split()[1] for line in out.splitlines()[1:]}
    assert code == 0 and rows["reinforcement"] == "yes" and rows["progressive"] == "no"
    table = tmp_path / "t.txt"
    table.write_text("levels=2\n0 0 0\n0 .5 .5\n0 .5 1\n")
    rec = json.loads(run(["classify-op", "--op-table", str(table), "--format", "structured"],
                         capsys)[1])
    assert rec["admissible"] and rec["classes"]["conjunctive"]["holds"]


def test_exit_codes(kb, tmp_path, capsys):
    bad = tmp_path / "bad.kb"
    bad.write_text("p & : .5\n")
    code, _, err = run(["merge", str(bad)], capsys)
    assert code == 2 and "line 1" in err
    assert run(["merge", str(tmp_path / "missing.kb")], capsys)[0] == 2
    assert run(["merge", kb("u.kb", fx.B([("p", .5)])), "--op", "nope"], capsys)[0] == 2
    big = kb("big.kb", fx.B([("a & b & c", .5)]))
    assert run(["merge", big, "--max-vars", "2"], capsys)[0] == 3
    table = tmp_path / "anti.txt"
    table.write_text("levels=2\n1 .5 0\n.5 .5 .5\n0 .5 1\n")
    assert run(["merge", big, "--op-table", str(table)], capsys)[0] == 4


def test_module_entry_point(ex1):
    proc = subprocess.run([sys.executable, "-m", "possfusion", "query", ex1[0], "-f", "psi"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "0.9"


def test_table1_structured_is_byte_identical(capsys):
    args = ["postulates", "--table1", "--trials", "40", "--seed", "7", "--format", "structured"]
    _, a, _ = run(args, capsys)
    _, b, _ = run(args, capsys)
    assert a == b
    assert len(json.loads(a)["cells"]) == 27
