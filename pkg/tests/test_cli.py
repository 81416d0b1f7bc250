import json
import os

import pytest

from fgver.cli import main, parse_pointset
from fgver.covers import parse_lineset
from fgver.projective import make_context


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_and_verify_singer(tmp_path, capsys):
    code, _, _ = run(["build", "singer", "--r", "3", "--q", "2",
                      "--out-dir", str(tmp_path),
                      "--out", str(tmp_path / "build.json")], capsys)
    assert code == 0
    report = json.loads((tmp_path / "build.json").read_text())
    assert report["detail"]["orbit_sizes"] == [5, 15, 15]
    files = sorted(p for p in os.listdir(tmp_path) if p.endswith(".lns"))
    assert len(files) == 3
    code, out, _ = run(["verify", str(tmp_path / files[0]),
                        "--checks", "cover,lemma1,dual-proj,two-char"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and all(rep["verdicts"].values())
    # the spread orbit reports the documented two-character sizes
    spread = next(p for p in files
                  if len(parse_lineset(tmp_path / p)[0]) == 5)
    code, out, _ = run(["verify", str(tmp_path / spread),
                        "--checks", "two-char"], capsys)
    rep = json.loads(out)
    assert rep["params"]["two-char"] == {"k": 25, "alpha": 9, "beta": 5}


def test_verify_exit_codes(tmp_path, capsys):
    bad = tmp_path / "dup.lns"
    bad.write_text("q=2 r=3 kind=projective\n"
                   "1,0,0,0;0,1,0,1\n1,0,0,0;0,1,0,1\n")
    assert run(["verify", str(bad), "--checks", "cover"], capsys)[0] == 2

    one = tmp_path / "one.lns"
    one.write_text("q=2 r=3 kind=projective\n1,0,0,0;0,1,0,1\n")
    assert run(["verify", str(one), "--checks", "cover"], capsys)[0] == 1
    # incompatible check for the kind
    assert run(["verify", str(one), "--checks", "dual-symp"], capsys)[0] == 2
    assert run(["verify", str(one), "--checks", "nonsense"], capsys)[0] == 2


def test_hexagon_roundtrip_and_checks(tmp_path, capsys):
    code, _, _ = run(["build", "hexagon", "--q", "2",
                      "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    path = tmp_path / "hexagon-w52.lns"
    ls, kind = parse_lineset(path)
    assert kind == "symplectic" and len(ls) == 63
    code, out, _ = run(["verify", str(path),
                        "--checks", "cover,dual-symp,tight-H,tight-W"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["params"]["tight-H"]["i"] == 9
    assert rep["spectra"]["dual-symp"]["x_in"] == 7
    assert rep["spectra"]["dual-symp"]["x_out"] == 3


def test_report_determinism(tmp_path, capsys):
    run(["build", "singer", "--r", "3", "--q", "2",
         "--out-dir", str(tmp_path)], capsys)
    target = str(tmp_path / "singer-r3q2-orbit0.lns")
    args = ["verify", target, "--checks", "cover,lemma1,dual-proj"]
    a = run(args + ["--out", str(tmp_path / "a.json")], capsys)
    b = run(args + ["--out", str(tmp_path / "b.json")], capsys)
    assert a[0] == b[0] == 0
    assert (tmp_path / "a.json").read_bytes() == \
        (tmp_path / "b.json").read_bytes()


def test_simplex_pointset(tmp_path, capsys):
    code, _, _ = run(["build", "simplex", "--config", "H44-L1",
                      "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    ctx = make_context(4, 4)
    mask = parse_pointset(tmp_path / "simplex-H44-L1.pts", ctx)
    assert int(mask.sum()) == 15


def test_tight_override(tmp_path, capsys):
    run(["build", "hexagon", "--q", "2", "--out-dir", str(tmp_path)], capsys)
    path = str(tmp_path / "hexagon-w52.lns")
    # the wrong parameter must fail with exit 1
    code, out, _ = run(["verify", path, "--checks", "tight-H",
                        "--i", "7"], capsys)
    assert code == 1
    assert not json.loads(out)["passed"]
