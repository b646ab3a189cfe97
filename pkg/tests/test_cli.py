"""Command-line interface: outputs, exit codes, certificates."""

import json
import os

import pytest

from isofilt.cli import main
from isofilt import formats

FIX = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fx(name):
    return os.path.join(FIX, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_minkowski(capsys):
    code, out, _ = run(capsys, "minkowski", "--n", "2")
    assert code == 0 and out.strip() == "24"
    code, out, _ = run(capsys, "minkowski", "--table", "4")
    assert "M(4) = 5760" in out


def test_slopes_fixture(capsys):
    code, out, _ = run(capsys, "slopes", "--module", fx("ss2.json"))
    assert code == 0 and out.strip() == "1/2 x2"


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--module", fx("ordinary_torus.json"))
    assert code == 0
    assert "slope 0: dim 1" in out and "slope 1: dim 2" in out


def test_degree(capsys):
    code, out, _ = run(capsys, "degree", "--local", "1:2,0:3")
    assert code == 0 and "d_upper = 6" in out and "d_dep_upper = 12" in out


def test_wreath_demo(capsys):
    code, out, _ = run(capsys, "wreath-demo", "--g", "1")
    assert code == 0 and "2^3 = 8" in out


def test_group_check(capsys):
    code, out, _ = run(capsys, "group", "check", "--group",
                       fx("c2_scalar_dim2.json"), "--module", fx("ss2.json"))
    assert code == 0 and "validates" in out


def test_descend(capsys):
    code, out, _ = run(capsys, "descend", "--module", fx("ss2.json"),
                       "--group", fx("c2_scalar_dim2.json"),
                       "--extension", fx("ext_sqrt2_c2.json"),
                       "--precision", "32")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["invariant_basis"][0]) == 2


def test_usage_error_exit_64():
    with pytest.raises(SystemExit) as exc:
        main(["slopes"])  # missing --module
    assert exc.value.code == 64


def test_find_check_roundtrip(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "filtration", "find",
                       "--module", fx("ss2.json"),
                       "--group", fx("c2_scalar_dim2.json"),
                       "--extension", fx("ext_sqrt2_c2.json"),
                       "--seed", "9", "--mode", "sampled", "--budget", "50",
                       "--precision", "32", "--out", str(cert))
    assert code == 0
    code, out, _ = run(capsys, "filtration", "check", str(cert))
    assert code == 0 and "verifies" in out


def test_check_detects_tamper(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    run(capsys, "filtration", "find", "--module", fx("ss2.json"),
        "--group", fx("c2_scalar_dim2.json"),
        "--extension", fx("ext_sqrt2_c2.json"),
        "--seed", "9", "--mode", "sampled", "--budget", "50",
        "--precision", "32", "--out", str(cert))
    doc = json.load(open(cert))
    # replace the filtration with the line through e1 + sqrt(2) e2, which is
    # Lagrangian and admissible but not Galois-stable
    doc["outputs"]["filtration"] = [
        [{"v": "0", "unit": [1, 0], "relpi": 64}],
        [{"v": "1/2", "unit": [1, 0], "relpi": 64}],
    ]
    tampered = tmp_path / "tampered.json"
    json.dump(doc, open(tampered, "w"))
    code, out, err = run(capsys, "filtration", "check", str(tampered))
    assert code == 2 and "tampered" in err
    # recompute the digest so only property re-verification can catch it
    body = {k: v for k, v in doc.items() if k not in ("timestamp", "digest")}
    doc["digest"] = formats.digest(body)
    json.dump(doc, open(tampered, "w"))
    code, out, err = run(capsys, "filtration", "check", str(tampered))
    assert code == 2
    assert "stability" in err or "descent" in err


def test_find_determinism(tmp_path, capsys):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        run(capsys, "filtration", "find", "--module", fx("ss2.json"),
            "--group", fx("c2_scalar_dim2.json"),
            "--extension", fx("ext_sqrt2_c2.json"),
            "--seed", "11", "--mode", "sampled", "--budget", "50",
            "--precision", "32", "--out", str(path))
        doc = json.load(open(path))
        doc.pop("timestamp", None)
        outs.append(formats.canonical_json(doc))
    assert outs[0] == outs[1]
