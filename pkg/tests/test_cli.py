import json
import subprocess
import sys

import numpy as np
import pytest

from covsteer.analysis import AnalysisConfig, run_analysis, threshold_scan
from covsteer.cli import main
from covsteer.exceptions import InvalidParameter, NoViolationInRange
from covsteer.gaussian import cm_to_json, two_mode_squeezed_vacuum
from covsteer.random_states import random_density
from covsteer.states import FamilySpec


def run_json(tmp_path, *args):
    out = tmp_path / "report.json"
    assert main([*args, "--json", str(out)]) == 0
    return json.loads(out.read_text())


def verdict_map(doc):
    return {(v["criterion"], v["direction"]): v for v in doc["verdicts"]}


def test_werner_analyze(tmp_path):
    doc = run_json(tmp_path, "analyze", "--family", "werner-2", "--param", "0.8")
    vm = verdict_map(doc)
    assert vm[("prop2", "A->B")]["violated"] and vm[("prop2", "B->A")]["violated"]
    assert vm[("prop2", "A->B")]["lhs"] == pytest.approx(0.96)
    assert set(doc) >= {"input", "verdicts", "witness", "version"}
    assert len(doc["witness"]) == 2


def test_isotropic_below_threshold(tmp_path):
    doc = run_json(tmp_path, "analyze", "--family", "isotropic-qutrit-F", "--param", "0.4",
                   "--criteria", "prop1,prop2")
    assert len(doc["verdicts"]) == 4
    assert not any(v["violated"] for v in doc["verdicts"])


def test_every_requested_pair_once(tmp_path):
    doc = run_json(tmp_path, "analyze", "--family", "werner-2", "--param", "0.3",
                   "--criteria", "prop2,witness", "--direction", "ba")
    keys = [(v["criterion"], v["direction"]) for v in doc["verdicts"]]
    assert keys == [("prop2", "B->A"), ("lur-witness", "B->A")]


def test_explicit_product_state(tmp_path):
    m = np.kron(random_density(2, seed=0).entries, random_density(2, seed=1).entries)
    path = tmp_path / "product.json"
    path.write_text(json.dumps({"dimA": 2, "dimB": 2, "re": m.real.tolist(), "im": m.imag.tolist()}))
    doc = run_json(tmp_path, "analyze", "--state", str(path))
    assert doc["verdicts"]
    assert not any(v["violated"] for v in doc["verdicts"])


def test_gaussian_file(tmp_path):
    path = tmp_path / "cm.json"
    path.write_text(json.dumps(cm_to_json(two_mode_squeezed_vacuum(0.5))))
    doc = run_json(tmp_path, "analyze", "--gaussian", str(path))
    assert [v["criterion"] for v in doc["verdicts"]] == ["gaussian", "gaussian"]
    assert all(v["violated"] for v in doc["verdicts"])


def test_bad_state_file_exits_nonzero(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dimA": 1, "dimB": 2, "re": [[1.2, 0], [0, -0.2]]}))
    assert main(["analyze", "--state", str(path)]) == 2
    assert "NotPositive" in capsys.readouterr().err


def test_family_without_param(capsys):
    assert main(["analyze", "--family", "werner-2"]) == 2


def test_gaussian_criterion_needs_cm():
    with pytest.raises(InvalidParameter):
        run_analysis(AnalysisConfig(family=FamilySpec("werner-2", 0.5), criteria=("gaussian",)))


def test_config_requires_one_source():
    with pytest.raises(InvalidParameter):
        AnalysisConfig()
    with pytest.raises(InvalidParameter):
        AnalysisConfig(
            family=FamilySpec("explicit", matrix=np.eye(4) / 4, dims=(2, 2)),
            scan={"criterion": "prop1", "direction": "ab"},
        )


def test_config_scan_attaches_threshold():
    cfg = AnalysisConfig(family=FamilySpec("werner-2", 0.9), criteria=("prop2",),
                         scan={"criterion": "prop2", "direction": "ab"})
    rep = run_analysis(cfg)
    assert rep.threshold["value"] == pytest.approx(1 / np.sqrt(3), abs=1e-5)


def test_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        main(["analyze", "--family", "two-qutrit-Fprime", "--param", "0.6", "--json", str(out)])
    assert a.read_bytes() == b.read_bytes()


def test_scan_cli(tmp_path):
    doc = run_json(tmp_path, "scan", "--family", "werner-2", "--criterion", "prop2", "--direction", "ab")
    assert doc["threshold"]["value"] == pytest.approx(1 / np.sqrt(3), abs=1e-4)


def test_scan_bisection_and_violated_lo():
    # straddling bracket: plain bisection
    assert threshold_scan("werner-2", "prop2", "ab", lo=0.2, hi=0.9, tol=1e-7) == pytest.approx(
        1 / np.sqrt(3), abs=1e-6
    )
    # lo already violated: the grid walk returns lo itself
    assert threshold_scan("werner-2", "prop2", "ab", lo=0.7, hi=0.9) == pytest.approx(0.7)


def test_scan_no_violation():
    with pytest.raises(NoViolationInRange):
        threshold_scan("werner-2", "prop2", "ab", lo=0.0, hi=0.5)


@pytest.mark.parametrize("tol", [1e-4, 1e-6, 1e-8])
def test_scan_converges_with_tol(tol):
    assert threshold_scan("werner-2", "prop2", "ba", tol=tol) == pytest.approx(1 / np.sqrt(3), abs=10 * tol)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "covsteer", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "covsteer" in res.stdout
