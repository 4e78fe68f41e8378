import json

import pytest

from setsharing.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_amgu(capsys):
    code, out, _ = run(capsys, "eval", "--vars", "x,y,z", "--sh", "{x,y,z}", "--op", "amgu",
                       "--subst", "{x -> y}")
    assert code == 0 and out == "{z, xy}\n"


@pytest.mark.parametrize("op, sh, want", [
    ("star", "{}", "{}"), ("proj:xy", "{xyz}", "{z, xy}"), ("proj:x", "{xyz}", "{x, y, z}"),
    ("self:2", "{x,y,z}", "{x, y, z, xy, xz, yz}"), ("rel:x", "{x, xy, y, z}", "{x, xy}"),
])
def test_eval_unary(capsys, op, sh, want):
    code, out, _ = run(capsys, "eval", "--vars", "x,y,z", "--sh", sh, "--op", op)
    assert code == 0 and out.strip() == want


def test_eval_binary_and_json(capsys):
    code, out, _ = run(capsys, "eval", "--vars", "x,y,z", "--sh", "{x,y}", "--sh2", "{z}",
                       "--op", "bin", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"vars": ["x", "y", "z"], "op": "bin",
                               "result": [["x", "z"], ["y", "z"]]}


def test_eval_from_files(capsys, tmp_path):
    (tmp_path / "a.sh").write_text("vars: x, y, z\n# an element\n{x, y, z}\n")
    (tmp_path / "s.txt").write_text("subst:\nx -> f(y)\nsubst:\n")
    code, out, _ = run(capsys, "eval", "--sh", f"@{tmp_path / 'a.sh'}", "--op", "amgu",
                       "--subst", f"@{tmp_path / 's.txt'}")
    assert code == 0 and out.strip() == "{z, xy}"


@pytest.mark.parametrize("argv, code", [
    (["eval", "--vars", "x,y", "--sh", "{x,,y}", "--op", "star"], 2),
    (["eval", "--vars", "x,y", "--sh", "{xq}", "--op", "star"], 3),
    (["eval", "--vars", "x,y", "--sh", "{x}", "--op", "bin"], 3),
    (["eval", "--vars", "x,y", "--sh", "{x}", "--op", "amgu", "--subst", "{x -> x}"], 2),
    (["eval", "--vars", "x,y", "--sh", "{x}", "--op", "frob"], 2),
    (["eval", "--vars", "x,x", "--sh", "{x}", "--op", "star"], 3),
    (["eval", "--sh", "{x}", "--op", "star"], 2),
    (["mi", "--n", "5", "--domain", "psd"], 4),
    (["complement", "--vars", "x,y,z", "--reference", "ps", "--remove", "psd"], 3),
    (["mi", "--vars", "x,y,z", "--domain", "ps", "--method", "formula"], 3),
    (["closure", "--vars", "x,y", "--sh", "{x}", "--closure", "tsd:3"], 3),
    (["frobnicate"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_mi_psd(capsys):
    code, out, _ = run(capsys, "mi", "--vars", "x,y,z", "--domain", "psd")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 11 and lines[-1] == "dAtoms=6 M=3 MI=10"


def test_mi_formula_matches_bruteforce(capsys):
    _, a, _ = run(capsys, "mi", "--vars", "x,y,z", "--domain", "def", "--method", "formula")
    _, b, _ = run(capsys, "mi", "--vars", "x,y,z", "--domain", "def", "--method", "bruteforce")
    assert a == b and a.strip().endswith("dAtoms=3 M=9 MI=13")


def test_mi_single_var(capsys):
    code, out, _ = run(capsys, "mi", "--vars", "x", "--domain", "sh")
    assert out.strip().splitlines() == ["{}", "{x}", "dAtoms=1 M=0 MI=2"]


def test_complement(capsys):
    assert run(capsys, "complement", "--vars", "x,y,z", "--reference", "sh",
               "--remove", "ps")[1] == "sh ~ ps: 128 elements\n"
    _, out, _ = run(capsys, "complement", "--vars", "x,y,z", "--reference", "def",
                    "--remove", "def", "--format", "json")
    data = json.loads(out)
    assert data["count"] == 1 and data["label"] == "def ~ def"


def test_product_and_enumerate(capsys):
    _, out, _ = run(capsys, "product", "--vars", "x,y,z", "--left", "ps", "--right", "ts:3")
    assert out.endswith(": 9 elements\n")
    _, out, _ = run(capsys, "enumerate", "--vars", "x,y,z", "--domain", "ts:3", "--list")
    assert out.splitlines() == ["ts:3: 2 elements", "{x, y, z, xy, xz, yz}",
                                "{x, y, z, xy, xz, yz, xyz}"]


def test_closure_cmd(capsys):
    _, out, _ = run(capsys, "closure", "--vars", "x,y,z", "--sh", "{xy,xz,yz}", "--closure", "psd")
    assert out.strip() == "{xy, xz, yz, xyz}"
    _, out, _ = run(capsys, "closure", "--vars", "x,y,z", "--sh", "{xy,xyz}", "--closure",
                    "classes")
    assert out.strip() == "x,y | z"


def test_witness_cmd(capsys):
    code, out, _ = run(capsys, "witness", "--vars", "x,y,z", "--sh", "{xy}", "--sh2", "{x,y}",
                       "--k", "1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["rechecked"] and data["sigma"] == "{y -> c0, z -> c0}"
    assert run(capsys, "witness", "--vars", "x,y", "--sh", "{x}", "--sh2", "{x}", "--k", "1")[0] == 3


def test_verify_cmd(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--n", "1", "--suite", "quotient")
    assert code == 0 and json.loads(out)["suite"] == "quotient"
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--n", "3", "--suite", "mi", "--out", str(target))
    data = json.loads(target.read_text())
    assert code == 0 and out == ""
    golden = [c for c in data["checks"] if c["name"] == "mi/golden-sets"]
    assert golden[0]["status"] == "pass"


def test_verify_failure_exit(capsys, monkeypatch):
    from setsharing import verify as vf
    monkeypatch.setitem(vf.CHECKS, "ops", [("boom", lambda cfg, u: {"x": 1})])
    assert run(capsys, "verify", "--n", "2", "--suite", "ops")[0] == 1
