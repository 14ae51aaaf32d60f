import csv
import io
import json
import math
import re

import pytest

from qcspectra.cli import main


def write_config(tmp_path, obj, name="run.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def read_csv(path):
    text = open(path).read()
    head = [l for l in text.splitlines() if l.startswith("# ")]
    body = "\n".join(l for l in text.splitlines() if not l.startswith("#"))
    return head, list(csv.DictReader(io.StringIO(body)))


def summaries(rows):
    return [r for r in rows if r["row_type"] == "summary"]


def test_beta_identity(tmp_path):
    cfg = write_config(tmp_path, {"map": {"family": "identity"}, "grid": {"t": [["1", "0"], ["2", "1"]]},
                                  "schedule": {"j_min": 2, "j_max": 12, "tail_length": 3}})
    out = tmp_path / "beta.csv"
    assert main(["beta", "--config", cfg, "--out", str(out), "--jobs", "2"]) == 0
    head, rows = read_csv(out)
    s = summaries(rows)
    assert [(float(r["t_re"]), float(r["t_im"])) for r in s] == [(1, 0), (2, 1)]
    assert all(abs(float(r["beta_limsup"])) < 0.01 for r in s)
    # grid order, then j ascending
    levels = [(r["t_re"], int(r["j"])) for r in rows if r["row_type"] == "level"]
    assert levels == sorted(levels, key=lambda x: (x[0] != "1", x[1]))
    assert any(l.startswith("# config_sha256: ") for l in head)
    assert sum(l.startswith("# tolerance.") for l in head) == 10


def test_beta_power_map(tmp_path):
    cfg = write_config(tmp_path, {"map": {"family": "disk_power", "params": {"sigma": "0.5"}},
                                  "grid": {"t": ["4", "2"]}})
    out = tmp_path / "beta.csv"
    assert main(["beta", "--config", cfg, "--out", str(out)]) == 0
    _, rows = read_csv(out)
    at4, at2 = summaries(rows)
    assert 0.9 <= float(at4["beta_limsup"]) <= 1.1
    assert 0 <= float(at2["beta_limsup"]) <= 0.2
    assert at2["integrability"] == "inside"
    assert float(at4["theorem_value"]) == 1


def test_beta_numerical_failure(tmp_path, capsys):
    cfg = write_config(tmp_path, {"map": {"family": "identity"}, "grid": {"t": ["1"]},
                                  "schedule": {"j_min": 2, "j_max": 18, "tail_length": 2}})
    assert main(["beta", "--config", cfg, "--jobs", "1"]) == 3
    assert "t = " in capsys.readouterr().err


def test_config_errors(tmp_path, capsys):
    assert main(["beta", "--config", write_config(tmp_path, {"bogus": 1})]) == 2
    assert "bogus" in capsys.readouterr().err
    assert main(["beta", "--config", str(tmp_path / "missing.json")]) == 2
    bad_sigma = write_config(tmp_path, {"map": {"family": "disk_power", "params": {"sigma": "2.5"}}})
    assert main(["beta", "--config", bad_sigma]) == 2
    assert main(["verify", "--format", "svg"]) == 2
    assert main(["beta", "--jobs", "0"]) == 2


@pytest.mark.parametrize("k", ["0", "1", "-0.5", "nan"])
def test_region_rejects_bad_k(k):
    assert main(["region", "--k", k]) == 2


def test_region_csv(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["region", "--k", "0.5", "--n", "256", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    re_ = [float(r["re"]) for r in rows]
    im = [float(r["im"]) for r in rows]
    assert len(rows) == 256
    assert min(re_) == pytest.approx(0.5, abs=1e-9)
    pts = {(round(x, 12), round(y, 12) + 0.0) for x, y in zip(re_, im)}
    assert pts == {(x, -y + 0.0) for x, y in pts}
    assert main(["region", "--k", "0.1", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    z = [complex(float(r["re"]), float(r["im"])) for r in rows]
    assert max(abs(a - b) for a in z for b in z) < 0.5


def test_region_svg(tmp_path):
    out = tmp_path / "r.svg"
    assert main(["region", "--k", "0.5", "--format", "svg", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.count("<path") == 1
    assert "<script" not in text
    d = re.search(r'<path d="([^"]+)"', text).group(1)
    assert d.startswith("M ") and d.endswith(" Z")
    assert "config_sha256" in text.split("<svg")[0]


def test_verify_default_passes(tmp_path):
    out = tmp_path / "v.txt"
    assert main(["verify", "--out", str(out), "--seed", "3"]) == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert all(l.startswith("PASS ") for l in lines[:-1])
    assert "nevanlinna_pick.tangent_support_sweep" in out.read_text()
    assert lines[-1] == "24 of 24 invariants passed"


def test_verify_reports_corrupted_sigma(tmp_path, capsys):
    cfg = write_config(tmp_path, {"map": {"family": "disk_power", "params": {"sigma": ["2.2", "0"]}}})
    assert main(["verify", "--config", cfg, "--out", str(tmp_path / "v.txt")]) == 1
    err = capsys.readouterr().err
    assert "first failing invariant: map_families.configured_map" in err


def test_twist(tmp_path):
    cfg = write_config(tmp_path, {"map": {"family": "disk_power", "params": {"sigma": ["0.5", "0.5"]}}})
    out = tmp_path / "t.csv"
    assert main(["twist", "--config", cfg, "--out", str(out)]) == 0
    _, rows = read_csv(out)
    last = rows[-1]
    assert float(last["gamma_hat"]) == pytest.approx(1, abs=0.02)
    assert float(last["k"]) == pytest.approx(math.sqrt(0.5))
    assert float(last["dim_bound_analytic"]) == pytest.approx(0, abs=1e-12)
    assert float(last["dim_bound"]) < 0.05
    cfg = write_config(tmp_path, {"map": {"family": "disk_power", "params": {"sigma": "0.5"}}})
    assert main(["twist", "--config", cfg, "--out", str(out)]) == 0
    _, rows = read_csv(out)
    assert float(rows[-1]["gamma_hat"]) == pytest.approx(0, abs=0.02)
    assert float(rows[-1]["dim_bound"]) == pytest.approx(2, abs=0.1)


def test_twist_needs_disk_map(tmp_path):
    cfg = write_config(tmp_path, {"map": {"family": "welded_stretch"}})
    assert main(["twist", "--config", cfg]) == 2


def test_spectra(tmp_path):
    out = tmp_path / "s.csv"
    cfg = write_config(tmp_path, {"grid": {"t": ["4", "1", "-4"]}})
    assert main(["spectra", "--config", cfg, "--k", "0.5", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    assert [r["integrability"] for r in rows] == ["critical_divergent", "inside", "outside_theorem"]
    assert float(rows[0]["hedenmalm"]) == pytest.approx(20.25)
    assert rows[1]["theorem_value"] == ""


def test_outputs_are_byte_identical(tmp_path):
    cfg = write_config(tmp_path, {"map": {"family": "disk_power", "params": {"sigma": ["0.6", "0.2"]}},
                                  "grid": {"t": ["3", ["1", "2"]]}, "seed": 11,
                                  "schedule": {"j_min": 2, "j_max": 10, "tail_length": 3}})
    outs = []
    for jobs in ("1", "2"):
        p = tmp_path / f"b{jobs}.csv"
        assert main(["beta", "--config", cfg, "--jobs", jobs, "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
