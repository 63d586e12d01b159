import json
import subprocess
import sys

import pytest

from hmf.cli import parse_combination, run
from hmf.forms import load


def test_zeta(capsys):
    assert run(["zeta", "--d", "5", "--k", "10"]) == 0
    assert capsys.readouterr().out.strip() == "412751/1650"


def test_zeta_numeric(capsys):
    assert run(["zeta", "--d", "5", "--k", "2", "--numeric", "--prec", "100"]) == 0
    assert capsys.readouterr().out.startswith("0.0333333333333333")


def test_exit_codes(capsys):
    assert run(["zeta", "--d", "6", "--k", "2"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: ") and "d=6" in err
    assert run(["zeta", "--d", "5"]) == 64
    assert run(["frobnicate"]) == 64
    assert run(["zeta", "--d", "4", "--k", "2"]) == 2


def test_eis_and_product(tmp_path, capsys):
    cache = tmp_path / "cache"
    e2 = tmp_path / "e2.json"
    assert run(["--cache-dir", str(cache), "eis", "--d", "5", "--k", "2", "--bound", "50", "--out", str(e2)]) == 0
    assert any((cache / "blobs").iterdir())
    # second call is served from the cache, truncated
    assert run(["--cache-dir", str(cache), "eis", "--d", "5", "--k", "2", "--bound", "20"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["bound"] == 20
    out = tmp_path / "p.json"
    assert run(["product", "--lhs", str(e2), "--rhs", str(e2), "--out", str(out)]) == 0
    assert load(out).weight == 4


def test_combine_eigenforms_eigencheck(tmp_path, capsys):
    for k in (2, 4, 6):
        run(["eis", "--d", "5", "--k", str(k), "--bound", "60", "--out", str(tmp_path / f"e{k}.json")])
    run(["product", "--lhs", str(tmp_path / "e2.json"), "--rhs", str(tmp_path / "e4.json"),
         "--out", str(tmp_path / "e2e4.json")])
    h6 = tmp_path / "h6.json"
    assert run(["combine", "--spec", "268/3*A - 7/60*B", "--form", f"A={tmp_path / 'e2e4.json'}",
                "--form", f"B={tmp_path / 'e6.json'}", "--out", str(h6)]) == 0
    capsys.readouterr()
    assert run(["eigencheck", "--form", str(h6)]) == 0
    assert capsys.readouterr().out.startswith("pass checked=")
    assert run(["eigencheck", "--form", str(tmp_path / "e2e4.json")]) == 1
    assert "witness=" in capsys.readouterr().out
    assert run(["eigenforms", "--d", "5", "--k", "10", "--bound", "60", "--out-dir", str(tmp_path / "ef")]) == 0
    labels = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
    assert labels == ["h10", "h10'"]
    assert load(tmp_path / "ef" / "h10p.json").coeff_disc == 809


def test_combine_errors(tmp_path):
    assert run(["combine", "--spec", "2*A"]) == 64
    assert run(["combine", "--spec", "2*A", "--form", "A"]) == 64
    assert run(["combine", "--spec", "2*A", "--form", f"A={tmp_path / 'nope.json'}"]) == 2


def test_parse_combination():
    assert parse_combination("268/3*A-7/60*B") == [(pytest.approx(268 / 3), "A"), (pytest.approx(-7 / 60), "B")]
    assert parse_combination("A + B") == [(1, "A"), (1, "B")]


@pytest.mark.slow
def test_search_and_verify(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert run(["search", "--d", "5", "--max-weight", "20", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert len(obj["identities"]) == 2 and obj["unresolved"] == []
    assert run(["verify", "--certs", str(out)]) == 0
    assert capsys.readouterr().out.strip().endswith("failed=0")


def test_bounds_and_tampered_verify(tmp_path, capsys):
    out = tmp_path / "b.json"
    assert run(["bounds", "--dmin", "5", "--dmax", "13", "--max-weight", "12", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["certificates"]
    assert run(["verify", "--certs", str(out)]) == 0
    obj["certificates"][0]["k1"] = 2
    obj["certificates"][0]["k2"] = 2
    obj["certificates"][0]["rule"] = "cusp-k1-size"
    out.write_text(json.dumps(obj))
    capsys.readouterr()
    assert run(["verify", "--certs", str(out)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hmf", "zeta", "--d", "5", "--k", "4"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1/60"
