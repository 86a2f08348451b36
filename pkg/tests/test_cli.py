import json
import subprocess
import sys

import pytest

from ualslab.cli import main, run
from ualslab.core import vec_write
from ualslab.spaces import SigmaRegistry, build_special_vectors


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def vecs(tmp_path):
    p = {}
    for name, doc in {
        "nat": {"scheme": "natural", "entries": [[1, "1"], [2, "-1/2"], [5, "3"]]},
        "tree": {"scheme": "dyadic", "entries": [["", "1"], ["0", "1"], ["1", "1"]]},
        "inter": {"scheme": {"tag": "interleaved", "l": 2}, "entries": [[[1, 1], "1"], [[2, 1], "2"]]},
        "mixed": {"scheme": "mixed", "entries": [[[1, "X", 1, 1], "3/5"], [[1, "X", 1, 2], "4/5"],
                                                 [[1, "Y", 2, 1], "2"]]},
        "bad": {"scheme": "natural", "entries": [[1, 0.5]]},
    }.items():
        f = tmp_path / f"{name}.json"
        f.write_text(json.dumps(doc))
        p[name] = str(f)
    return p


def test_norm_commands(capsys, vecs):
    code, out, _ = cli(capsys, "norm", "--space", "james", "--vec", vecs["nat"], "--witness")
    assert code == 0 and "norm^2 = 49/4 ~ 12.25" in out and "[[1, 5]]" in out
    code, out, _ = cli(capsys, "norm", "--space", "jt", "--vec", vecs["tree"], "--json")
    doc = json.loads(out)
    assert code == 0 and doc["norm_sq"] == "5/1" and doc["schema"] == "ualslab.norm/1"
    code, out, _ = cli(capsys, "norm", "--space", "calx", "--vec", vecs["mixed"])
    assert code == 0 and "norm^2 = 5" in out
    code, out, _ = cli(capsys, "norm", "--space", "mixed", "--vec", vecs["mixed"], "--p", "3/2", "--q", "3")
    assert code == 0 and "norm ~" in out


def test_norm_mr_uses_registry(capsys, tmp_path):
    reg_path = str(tmp_path / "reg.jsonl")
    plus, alt, _ = build_special_vectors(2, reg=SigmaRegistry(reg_path))
    vec_write(plus, tmp_path / "plus.json")
    vec_write(alt, tmp_path / "alt.json")
    code, out, _ = cli(capsys, "norm", "--space", "mr", "--vec", str(tmp_path / "plus.json"),
                       "--registry", reg_path, "--json")
    assert code == 0 and json.loads(out)["lower"] == "4/1"
    code, out, _ = cli(capsys, "norm", "--space", "mr", "--vec", str(tmp_path / "alt.json"),
                       "--registry", reg_path, "--json")
    up = json.loads(out)["upper"].split("/")
    assert int(up[0]) <= 5 * int(up[1])


def test_usage_errors(capsys, vecs):
    assert cli(capsys, "frobnicate")[0] == 2
    assert cli(capsys, "norm", "--space", "james", "--vec", "/nonexistent.json")[0] == 2
    assert cli(capsys, "norm", "--space", "james", "--vec", vecs["bad"])[0] == 2
    assert cli(capsys, "norm", "--space", "james", "--vec", vecs["tree"])[0] == 2
    assert cli(capsys, "norm", "--space", "mixed", "--vec", vecs["mixed"])[0] == 2
    assert cli(capsys, "plegma", "enum", "--ground", "5..1", "--l", "2", "--k", "1")[0] == 2
    assert cli(capsys, "ramsey", "--color", "rainbow", "--ground", "1..5", "--len", "3")[0] == 2
    assert cli(capsys, "uals", "verify", "--case", "ell1", "--p", "2")[0] == 2
    assert cli(capsys, "jsm", "--gen", "no-such-generator")[0] == 2
    assert cli(capsys, "--help")[0] == 0


def test_plegma_commands(capsys, vecs):
    code, out, _ = cli(capsys, "plegma", "enum", "--ground", "1..4", "--l", "2", "--k", "2", "--strict")
    assert code == 0 and out.splitlines()[:2] == ["1,3;2,4", "1 family"]
    code, out, _ = cli(capsys, "plegma", "check", "1,4;2,3")
    assert code == 1 and "(ii)" in out
    assert cli(capsys, "plegma", "check", "1,3;2,4")[0] == 0
    code, out, _ = cli(capsys, "plegma", "shift", "--vec", vecs["inter"], "--family", "3,5;4,6")
    assert code == 0 and '[[1,3],"1/1"]' in out


def test_ramsey(capsys):
    code, out, _ = cli(capsys, "ramsey", "--color", "parity", "--ground", "1..30", "--len", "5")
    assert code == 0 and "L = 1,3,5,7,9" in out
    code, _, _ = cli(capsys, "ramsey", "--color", "parity", "--ground", "1..6", "--len", "6", "--k", "2")
    assert code == 1


def test_jsm_ucs_family(capsys, tmp_path):
    code, out, _ = cli(capsys, "jsm", "--gen", "lp", "--kmax", "2", "--ground", "1..8", "--n-random", "5",
                       "--out", str(tmp_path / "j"))
    assert code == 0 and "max oscillation 0" in out
    table = (tmp_path / "j" / "table.csv").read_text().splitlines()
    assert table[0].startswith("k,coefficients,norm_sq")
    code, out, _ = cli(capsys, "ucs", "--gen", "lp", "--p", "3", "--l", "2", "--k", "2", "--n-random", "5")
    assert code == 0 and "PASS" in out
    code, out, _ = cli(capsys, "jt-family", "--bands", "3", "--l", "2", "--random", "10")
    assert code == 0 and "PASS" in out


def test_generator_file(capsys, tmp_path):
    doc = {"space": "lp", "p": "2", "vectors": [
        [{"scheme": "natural", "entries": [[n, "1"]]} for n in range(1, 9)]]}
    f = tmp_path / "gen.json"
    f.write_text(json.dumps(doc))
    code, out, _ = cli(capsys, "jsm", "--gen", str(f), "--kmax", "1", "--ground", "1..6", "--n-random", "3")
    assert code == 0 and "gen.json: ok" in out


def test_uals_verify_and_replay(capsys, tmp_path):
    out_dir = tmp_path / "u"
    code, out, _ = cli(capsys, "uals", "verify", "--case", "rank-one", "--probes", "40", "--out", str(out_dir))
    assert code == 0 and out.splitlines()[-2] == "PASS"
    manifest = json.loads((out_dir / "manifest.json").read_text())
    report = json.loads((out_dir / "report.json").read_text())
    assert report["schema"] == "ualslab.gapreport/1" and manifest["seed"] == 0
    assert {"command", "params", "seed", "registry_hash", "version", "digest"} <= set(manifest)
    code, out, _ = cli(capsys, "replay", str(out_dir / "manifest.json"))
    assert code == 0 and "replay matches" in out
    manifest["digest"] = "sha256:" + "0" * 64
    (out_dir / "manifest.json").write_text(json.dumps(manifest))
    assert cli(capsys, "replay", str(out_dir / "manifest.json"))[0] == 1


def test_seed_changes_digest(capsys):
    a = run(["uals", "verify", "--case", "ell1", "--n", "6", "--probes", "10", "--seed", "1"])[2]["digest"]
    b = run(["uals", "verify", "--case", "ell1", "--n", "6", "--probes", "10", "--seed", "2"])[2]["digest"]
    c = run(["uals", "verify", "--case", "ell1", "--n", "6", "--probes", "10", "--seed", "1"])[2]["digest"]
    capsys.readouterr()
    assert a == c != b


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ualslab", "plegma", "enum", "--ground", "1..4", "--l", "2",
                          "--k", "1", "--strict"], capture_output=True, text=True)
    assert out.returncode == 0 and "6 families" in out.stdout
