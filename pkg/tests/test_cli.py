"""The ``lab`` command: outputs, determinism and exit codes."""

import json
from pathlib import Path

import pytest

from froblab import experiments
from froblab.cli import main
from froblab.dynamics import PeriodicPoint
from froblab.experiments import gap_trend_violation
from froblab.local import LocalField
from froblab.proj import normalize_point, reduction_map

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(tmp_path, name, *extra):
    out = tmp_path / "out"
    code = main(["run", str(CONFIGS / f"{name}.cfg"), "--out", str(out), *extra])
    return code, out


@pytest.mark.parametrize("name", ["tv_gap_squaring", "dmm_conic", "dmm_perturbed",
                                  "backward_dml_q4", "backward_dml_fixed", "backward_dml_all",
                                  "tilt_demo_q4"])
def test_shipped_configs_succeed(tmp_path, name):
    code, out = run(tmp_path, name)
    assert code == 0
    tsv = (out / f"{name}.tsv").read_text()
    data = json.loads((out / f"{name}.json").read_text())
    assert "# status=ok" in tsv
    assert data["status"] == "ok" and data["violation"] is None
    assert data["header"]["kind"] == data["kind"]


def test_outputs_are_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    cfg = str(CONFIGS / "tilt_demo_q4.cfg")
    assert main(["run", cfg, "--out", str(a)]) == 0
    assert main(["run", cfg, "--out", str(b), "--threads", "3"]) == 0
    for suffix in (".tsv", ".json"):
        assert (a / f"tilt_demo_q4{suffix}").read_bytes() == \
            (b / f"tilt_demo_q4{suffix}").read_bytes()


def test_tv_gap_squaring_values(tmp_path):
    code, out = run(tmp_path, "tv_gap_squaring")
    data = json.loads((out / "tv_gap_squaring.json").read_text())
    assert code == 0
    assert data["summary"]["delta"] == "1"
    assert [row["points"] for row in data["rows"]] == [3, 5, 9, 17, 33, 65]


def test_precision_override_lands_in_header(tmp_path):
    code, out = run(tmp_path, "dmm_conic", "--precision", "20")
    assert code == 0
    assert json.loads((out / "dmm_conic.json").read_text())["header"]["prec"] == 20


def test_error_exit_codes(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.cfg")]) == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text('field { p = 2 }\nmap { N = 1, P = ["x0^3", "0"] }\n'
                   'experiment { kind = tilt_demo }\n')
    assert main(["run", str(bad)]) == 1
    assert "InvalidDegree" in capsys.readouterr().err
    assert main(["run", str(CONFIGS / "dmm_conic.cfg"), "--threads", "0"]) == 1


def test_resource_limit_exit_code(tmp_path):
    text = (CONFIGS / "backward_dml_fixed.cfg").read_text().replace("degree = 1",
                                                                    "degree = 6000")
    cfg = tmp_path / "big.cfg"
    cfg.write_text(text)
    assert main(["run", str(cfg), "--out", str(tmp_path)]) == 3


def test_gap_trend_rule():
    assert gap_trend_violation([0, 1, 2, 3])
    assert not gap_trend_violation([0, 1, 2, 2])
    assert not gap_trend_violation([1, 1, 1])
    assert not gap_trend_violation([0, 1])


def test_downward_trend_exits_with_violation(tmp_path, monkeypatch):
    """Injected points at distance 2^-m from the diagonal make δ_m shrink without end."""

    def fake_enumeration(F, m, M=32, **kwargs):
        x = normalize_point([1, 1 + 2**m], LocalField(2, prec=M))
        return [PeriodicPoint(reduction_map(x), x, m)]

    monkeypatch.setattr(experiments, "enumerate_periodic", fake_enumeration)
    code, out = run(tmp_path, "tv_gap_squaring")
    assert code == 2
    tsv = (out / "tv_gap_squaring.tsv").read_text()
    assert "# violation=" in tsv


def test_all_branches_mode(tmp_path):
    code, out = run(tmp_path, "backward_dml_all")
    data = json.loads((out / "backward_dml_all.json").read_text())
    assert code == 0
    assert data["summary"]["branches"] == 2
    assert data["summary"]["gap"] == "2^-1"
    assert {row["branch"] for row in data["rows"]} == {0, 1}
