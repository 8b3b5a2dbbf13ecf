import io
import json
import subprocess
import sys

import pytest

import simpcat.contiguity as contiguity
from simpcat import cli, identity, standard_complex
from simpcat.complex import build_complex

C4 = {"vertices": ["a", "b", "c", "d"], "facets": [["a", "b"], ["b", "c"], ["c", "d"], ["a", "d"]]}


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), stdout=out)
    return code, out.getvalue()


def report(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


@pytest.fixture
def files(tmp_path):
    (tmp_path / "c4.json").write_text(json.dumps(C4))
    c4 = standard_complex("cycle", 4)
    (tmp_path / "id.json").write_text(json.dumps(identity(c4).to_dict()))
    const = dict(identity(c4).to_dict(), map={v: "a" for v in "abcd"})
    (tmp_path / "const.json").write_text(json.dumps(const))
    (tmp_path / "disc.json").write_text(json.dumps(build_complex([["a", "b"], ["c", "d"]]).to_dict()))
    (tmp_path / "broken.json").write_text("{not json")
    return tmp_path


def test_scat_c4(files):
    code, doc = report("scat", "--complex", str(files / "c4.json"))
    assert code == 0 and doc["results"]["scat"] == 1
    assert doc["witnesses"]["cover"]["kind"] == "cover"
    assert set(doc) >= {"command", "args", "inputs_digest", "results", "limit_hits", "timing", "digest"}


def test_cone_pipes_into_scat(files):
    cone = subprocess.run(
        [sys.executable, "-m", "simpcat.cli", "cone", "--complex", str(files / "c4.json")],
        capture_output=True, text=True, check=True,
    )
    scat = subprocess.run(
        [sys.executable, "-m", "simpcat.cli", "scat", "--complex", "-"],
        input=cone.stdout, capture_output=True, text=True,
    )
    assert scat.returncode == 0
    assert json.loads(scat.stdout)["results"]["scat"] == 0


def test_contiguous(files):
    code, doc = report("contiguous", "--map", str(files / "id.json"), "--map", str(files / "const.json"))
    assert code == 0 and doc["results"]["verdict"] == "different classes"
    code, doc = report("contiguous", "--map", str(files / "const.json"), "--map", str(files / "const.json"))
    assert doc["results"]["same_class"] and doc["witnesses"]["chain"]["kind"] == "chain"


def test_witnesses_to_file_and_verify(files):
    out = files / "w.json"
    code, doc = report("scat-map", "--map", str(files / "id.json"), "--factorize", "--output", str(out))
    assert code == 0 and doc["witness_file"] == str(out)
    code, doc = report("verify-certificate", str(out))
    assert code == 0 and doc["results"]["valid"]
    code, doc = report("verify-certificate", "--kind", "factorization", str(out))
    assert code == 0 and doc["results"]["valid"]


def test_verify_certificate_rejects_truncated_cover(files):
    _, doc = report("scat", "--complex", str(files / "c4.json"))
    cert = doc["witnesses"]["cover"]
    cert["parts"], cert["chains"] = cert["parts"][:1], cert["chains"][:1]
    path = files / "bad.json"
    path.write_text(json.dumps(cert))
    code, doc = report("verify-certificate", "--kind", "cover", str(path))
    assert code == 1 and not doc["results"]["valid"]
    assert "is not covered" in doc["results"]["reason"]


def test_every_command_runs(files):
    c4, idm = str(files / "c4.json"), str(files / "id.json")
    assert run("gscat", "--complex", c4)[0] == 0
    assert run("core", "--complex", c4)[0] == 0
    assert run("product", "--complex", c4, "--complex", c4)[0] == 0
    code, doc = report("chi", "--complex", c4)
    space = files / "x.json"
    space.write_text(json.dumps(doc["results"]["space"]))
    assert report("order-complex", "--space", str(space))[1]["results"]["complex"]["vertices"]
    assert report("cat-space", "--space", str(space))[1]["results"]["cat"] == 1
    code, doc = report("chi", "--map", idm)
    chi = files / "chi.json"
    chi.write_text(json.dumps(doc["results"]["map"]))
    assert report("cat-map", "--map", str(chi))[1]["results"]["cat"] == 1
    assert run("order-complex", "--map", str(chi))[0] == 0
    assert report("fiber", "--map", idm, "--vertex", "b")[1]["results"]["complex"]["vertices"] == ["b"]
    code, doc = report("fibration-check", "--map", idm, "--universe", "2")
    assert code == 0 and doc["results"]["verdict"]["status"] == "verified_over_universe"
    code, doc = report("es", "--map", idm, "--universe", "4", "--crosscheck", "1")
    assert doc["results"]["es"]["value"] == 0 and doc["results"]["crosscheck"]["agree"]


def test_text_format(files):
    code, text = run("scat", "--complex", str(files / "c4.json"), "--format", "text")
    assert code == 0 and "scat: 1" in text


def test_exit_codes(files):
    assert run("scat", "--complex", str(files / "missing.json"))[0] == 1
    assert run("scat", "--complex", str(files / "broken.json"))[0] == 1
    code, doc = report("scat", "--complex", str(files / "disc.json"))
    assert code == 1 and "DisconnectedComplex" in doc["error"]
    code, doc = report("scat", "--complex", str(files / "c4.json"), "--max-subsets", "1")
    assert code == 2 and doc["results"]["value"] == "unknown" and doc["limit_hits"]
    limits = files / "limits.json"
    limits.write_text(json.dumps({"max_subsets": 1}))
    assert run("scat", "--complex", str(files / "c4.json"), "--limits", str(limits))[0] == 2
    limits.write_text(json.dumps({"colour": 1}))
    assert run("scat", "--complex", str(files / "c4.json"), "--limits", str(limits))[0] == 1


def test_reports_are_deterministic(files):
    def strip(doc):
        return {k: v for k, v in doc.items() if k != "timing"}

    a = report("scat", "--complex", str(files / "c4.json"))[1]
    b = report("scat", "--complex", str(files / "c4.json"))[1]
    assert strip(a) == strip(b) and a["digest"] == b["digest"]


def test_generate_is_byte_identical(files):
    a, b = files / "g1.json", files / "g2.json"
    code, doc = report("generate", "--max-vertices", "3", "--output", str(a))
    assert code == 0 and doc["results"]["count"] == 5
    run("generate", "--max-vertices", "3", "--output", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert report("generate", "--max-vertices", "2")[1]["results"]["count"] == 2


def test_verify_small_products_lists_skips():
    code, doc = report("verify", "--suite", "products", "--max-vertices", "4", "--map-vertices", "4")
    assert code == 0
    rows = {r["name"]: r for r in doc["results"]["matrix"]}
    assert rows["projection"]["skipped"] and all(r["status"] == "pass" for r in rows.values())


def test_verify_catches_broken_contiguity(tmp_path, monkeypatch):
    def broken(domain, codomain, a, b):
        return all(contiguity.image_mask(a, m) == contiguity.image_mask(b, m) for m in domain.facet_masks)

    monkeypatch.setattr(contiguity, "contiguous_assignments", broken)
    contiguity.clear_caches()
    out = tmp_path / "cex"
    code, doc = report(
        "verify", "--suite", "category", "--max-vertices", "3", "--map-vertices", "3", "--output", str(out)
    )
    rows = {r["name"]: r for r in doc["results"]["matrix"]}
    assert code == 1 and rows["composition_bound"]["status"] == "fail"
    files = sorted(p.name for p in out.iterdir())
    assert any(name.startswith("counterexample-composition_bound") for name in files)
    example = json.loads((out / "counterexample-composition_bound-0.json").read_text())
    assert {"f", "g"} <= set(example)
