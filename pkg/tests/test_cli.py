import json
import math

import numpy as np
import pytest

from unireduce.cli import main
from unireduce.cli.io import decode_group, decode_matrix, decode_vector, encode_group, encode_matrix, encode_vector
from unireduce import close_group

from conftest import CYCLE3, SWAP3, X, Z


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    f = {}
    f["s3gen"] = _write(tmp_path / "s3gen.json", {"generators": [encode_matrix(CYCLE3), encode_matrix(SWAP3)]})
    f["pgen"] = _write(tmp_path / "pgen.json", {"generators": [encode_matrix(X), encode_matrix(Z)]})
    f["dgen"] = _write(tmp_path / "dgen.json", {"generators": [encode_matrix(Z)]})
    f["igen"] = _write(tmp_path / "igen.json", {"generators": [encode_matrix(np.eye(3))]})
    c, s = math.cos(1), math.sin(1)
    f["rot"] = _write(tmp_path / "rot.json", {"generators": [encode_matrix([[c, -s], [s, c]])]})
    for key in ("s3", "p", "d", "i"):
        f[key] = str(tmp_path / f"{key}.json")
        assert main(["closure", "--in", f[key + "gen"], "--out", f[key]]) == 0
    f["u3"] = _write(tmp_path / "u3.json", encode_vector(np.ones(3) / math.sqrt(3)))
    f["e1"] = _write(tmp_path / "e1.json", encode_vector([1, 0, 0]))
    f["x2"] = _write(tmp_path / "x2.json", encode_vector([math.sqrt(0.9999), 0.01]))
    f["tmp"] = tmp_path
    return f


def _json_out(capsys):
    return json.loads(capsys.readouterr().out.strip().splitlines()[-1])


def test_codec_roundtrip(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.array_equal(decode_matrix(json.loads(json.dumps(encode_matrix(m)))), m)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert np.array_equal(decode_vector(json.loads(json.dumps(encode_vector(v)))), v)
    g = close_group([X, Z])
    h = decode_group(json.loads(json.dumps(encode_group(g))))
    assert np.array_equal(g.elements, h.elements) and g.generator_indices == h.generator_indices


def test_closure(files, capsys):
    assert json.load(open(files["s3"]))["dim"] == 3
    assert len(json.load(open(files["s3"]))["elements"]) == 6
    assert len(json.load(open(files["i"]))["elements"]) == 1
    out = str(files["tmp"] / "r.json")
    assert main(["closure", "--in", files["rot"], "--out", out]) == 3
    assert main(["closure", "--in", files["s3"], "--out", out]) == 1
    assert main(["closure", "--in", files["s3gen"], "--out", out, "--cap", "0"]) == 1


def test_closure_is_byte_stable(files):
    again = str(files["tmp"] / "again.json")
    assert main(["closure", "--in", files["s3gen"], "--out", again]) == 0
    assert open(again).read() == open(files["s3"]).read()
    # re-closing the generators listed in the output file gives the same bytes
    g = json.load(open(files["s3"]))
    regen = _write(files["tmp"] / "regen.json", {"generators": [g["elements"][i] for i in g["generators"]]})
    third = str(files["tmp"] / "third.json")
    assert main(["closure", "--in", regen, "--out", third]) == 0
    assert open(third).read() == open(files["s3"]).read()


def test_defect(files, capsys):
    assert main(["defect", "--group", files["i"], "--xi", files["u3"]]) == 0
    assert _json_out(capsys)["weak_defect"] == 0
    assert main(["defect", "--group", files["s3"], "--xi", files["e1"]]) == 0
    assert _json_out(capsys)["weak_defect"] == 1
    assert main(["defect", "--group", files["s3"], "--xi", files["x2"]]) == 1


def test_eigenvector(files, capsys):
    assert main(["eigenvector", "--group", files["s3"], "--xi", files["u3"]]) == 0
    cert = _json_out(capsys)
    assert cert["method"] == "monomial" and cert["distance_sq"] == 0
    assert main(["eigenvector", "--group", files["d"], "--xi", files["x2"], "--method", "truncate"]) == 0
    cert = _json_out(capsys)
    assert cert["details"]["kept"] == [0]
    assert cert["eps"] == pytest.approx(2e-4)
    assert main(["eigenvector", "--group", files["p"], "--xi", files["x2"], "--method", "truncate"]) == 4
    assert _json_out(capsys)["error"] == "NoCommonEigenvector"
    assert main(["eigenvector", "--group", files["p"], "--xi", files["x2"], "--method", "rho"]) == 1


def test_decompose(files, capsys):
    for key, sizes in (("p", [2]), ("s3", [1, 2]), ("i", [1, 1, 1])):
        assert main(["decompose", "--group", files[key]]) == 0
        out = _json_out(capsys)
        assert out["block_sizes"] == sizes and out["seed"] == 0


def test_env_tolerance(files, monkeypatch):
    monkeypatch.setenv("UNIREDUCE_TOL", "nope")
    assert main(["defect", "--group", files["s3"], "--xi", files["e1"]]) == 1
    monkeypatch.setenv("UNIREDUCE_TOL", "1e-6")
    assert main(["defect", "--group", files["s3"], "--xi", files["e1"]]) == 0


def test_bad_files(files):
    bad = _write(files["tmp"] / "bad.json", {"elements": [encode_matrix([[1, 1], [0, 1]])]})
    assert main(["defect", "--group", bad, "--xi", files["x2"]]) == 1
    notgroup = _write(files["tmp"] / "ng.json", {"elements": [encode_matrix(X)]})
    assert main(["defect", "--group", notgroup, "--xi", files["x2"]]) == 1
    assert main(["defect", "--group", str(files["tmp"] / "missing.json"), "--xi", files["x2"]]) == 1


@pytest.mark.parametrize("suite", ["lemmas", "bounds", "pipeline", "oracle"])
def test_verify_smoke(suite, capsys):
    assert main(["verify", "--suite", suite, "--seed", "3", "--trials", "8"]) == 0
    report = _json_out(capsys)
    assert report["failures"] == [] and report["trials"] == 8 and "wall_time" not in report
    assert main(["verify", "--suite", suite, "--seed", "3", "--trials", "2", "--timing"]) == 0
    assert "wall_time" in _json_out(capsys)
