import json
import subprocess
import sys

import pytest

from conftest import CAT
from torus_zeta.cli import main, parse_s_list
from torus_zeta.config import ConfigError, parse_config
from torus_zeta.dynamics import FlowParams, orbit_table
from torus_zeta.report import orbit_table_from_json, orbit_table_to_json, zeta_from_json, zeta_to_json
from torus_zeta.zeta import build_zeta
from torus_zeta.cohomology import from_toral

CAT_CFG = {"fiber": {"kind": "toral", "matrix": [[2, 1], [1, 1]]}, "r": "e"}
GENUS2_CFG = {
    "fiber": {
        "kind": "explicit",
        "d": 2,
        "betti": [1, 4, 1],
        "matrices": [[[1]], [[2, 1, 0, 0], [1, 1, 0, 0], [0, 0, 2, 1], [0, 0, 1, 1]], [[1]]],
    },
    "r": 2,
}
CIRCLE_CFG = {"fiber": {"kind": "explicit", "d": 1, "betti": [1, 1], "matrices": [[[1]], [[1]]]}, "r": "e"}
SHEAR_CFG = {"fiber": {"kind": "toral", "matrix": [[1, 1], [0, 1]]}, "r": "e"}


@pytest.fixture
def write_cfg(tmp_path):
    def _write(obj, name="cfg.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_validate_cat(capsys, write_cfg):
    code, rep = run_json(capsys, "validate", "--config", write_cfg(CAT_CFG))
    assert code == 0 and rep["duality_enabled"]
    assert rep["anosov"]["anosov_certificate"]


def test_validate_shear_fails(capsys, write_cfg):
    code, out, _ = run(capsys, "validate", "--config", write_cfg(SHEAR_CFG))
    assert code == 1 and "no_cyclotomic_factor" in out


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        json.dumps({"fiber": {"kind": "toral", "matrix": [[1, 2, 3], [1, 1]]}, "r": 2}),
        json.dumps({"fiber": {"kind": "toral", "matrix": [[2, 0], [0, 1]]}, "r": 2}),
        json.dumps({"fiber": {"kind": "toral", "matrix": [[2, 1], [1, 1]]}, "r": 0.5}),
        json.dumps({"fiber": {"kind": "toral", "matrix": [[2, 1], [1, 1]]}, "r": "pi"}),
        json.dumps({"fiber": {"kind": "sphere"}, "r": 2}),
        json.dumps({"fiber": {"kind": "toral", "matrix": [[2, 1], [1, 1]]}, "r": 2, "precision": 40}),
    ],
)
def test_malformed_configs_exit_2(capsys, write_cfg, text):
    code, _, err = run(capsys, "validate", "--config", write_cfg(text))
    assert code == 2 and "error" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "validate", "--config", str(tmp_path / "nope.json"))
    assert code == 2


def test_bad_usage_exit_2(write_cfg):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate", "--config", write_cfg(CAT_CFG)])
    assert info.value.code == 2


def test_orbits_rows(capsys, write_cfg):
    code, out, _ = run(capsys, "orbits", "--config", write_cfg(CAT_CFG), "--mmax", "3", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("m,fix_signed,fix_unsigned,exact_period_points,orbit_count")
    assert [l.split(",")[:5] for l in lines[1:]] == [
        ["1", "-1", "1", "1", "1"],
        ["2", "-5", "5", "4", "2"],
        ["3", "-16", "16", "15", "5"],
    ]


def test_orbits_empty_and_refusals(capsys, write_cfg):
    code, rep = run_json(capsys, "orbits", "--config", write_cfg(CAT_CFG), "--mmax", "0")
    assert code == 0 and rep["orbit_table"]["rows"] == []
    code, rep = run_json(capsys, "orbits", "--config", write_cfg(SHEAR_CFG))
    assert code == 1 and "not hyperbolic" in rep["error"]
    code, rep = run_json(capsys, "orbits", "--config", write_cfg(GENUS2_CFG))
    assert code == 1


def test_zeta_values_and_euler_column(capsys, write_cfg):
    code, rep = run_json(capsys, "zeta", "--config", write_cfg(CAT_CFG), "--s", "3", "--compare-euler", "40")
    assert code == 0
    row = rep["evaluations"][0]
    assert row["value"]["re"] == pytest.approx(0.9448589945, abs=1e-10)
    assert row["euler_residual"] < 1e-8 and row["euler_tolerance"] >= 1e-8
    assert [f["coefficients"] for f in rep["zeta_factors"]["factors"]] == [["1", "-1"], ["1", "-3", "1"], ["1", "-1"]]


def test_zeta_unsigned_reports_reciprocal(capsys, write_cfg):
    code, rep = run_json(capsys, "zeta", "--config", write_cfg(CAT_CFG), "--s", "2,2+1i", "--compare-euler", "40",
                         "--convention", "unsigned")
    assert code == 0
    assert all(r["unsigned_relation"] == "reciprocal" and r["euler_pass"] for r in rep["evaluations"])


def test_zeta_pole_report(capsys, write_cfg):
    code, rep = run_json(capsys, "zeta", "--config", write_cfg(CAT_CFG), "--s", "0")
    row = rep["evaluations"][0]
    assert code == 0 and "value" not in row
    assert row["pole_order"] == -2 and row["special_value"]["re"] == pytest.approx(-1)


def test_zeta_grid_is_ordered(capsys, write_cfg, monkeypatch):
    monkeypatch.setenv("TORUS_ZETA_THREADS", "4")
    code, rep = run_json(capsys, "zeta", "--config", write_cfg(CAT_CFG), "--s", "1:3:9")
    assert code == 0
    assert [r["s"]["re"] for r in rep["evaluations"]] == pytest.approx([1 + 0.25 * j for j in range(9)])


def test_zeta_needs_s(capsys, write_cfg):
    code, _, _ = run(capsys, "zeta", "--config", write_cfg(CAT_CFG))
    assert code == 2


def test_special(capsys, write_cfg):
    code, rep = run_json(capsys, "special", "--config", write_cfg({**CAT_CFG, "r": 10}), "--k", "1")
    assert code == 0
    sp = rep["special"]
    assert sp["order"] == 0 and sp["rational_part"] == "71/81"
    assert abs(sp["series"]["value"]["re"] - 71 / 81) < 1e-8
    code, rep = run_json(capsys, "special", "--config", write_cfg(CAT_CFG), "--k", "0")
    sp = rep["special"]
    assert code == 0 and sp["order"] == -2 and sp["direct_value"]["re"] == pytest.approx(-1)
    assert sp["series"]["refused"] and "r^Re(k) = 1" in sp["series"]["reason"]
    code, rep = run_json(capsys, "special", "--config", write_cfg(CIRCLE_CFG), "--k", "1")
    assert rep["special"]["order"] == 0 and rep["special"]["direct_value"]["re"] == pytest.approx(1)


def test_spectrum(capsys, write_cfg):
    code, rep = run_json(capsys, "spectrum", "--config", write_cfg(CAT_CFG), "--degree", "0", "--vmin", "-1",
                         "--vmax", "1")
    assert code == 0
    assert [e["theta"]["im"] for e in rep["spectrum"]] == pytest.approx([-6.283185307, 0, 6.283185307])
    assert all(e["tolerance"] == 1e-10 for e in rep["spectrum"])
    code, _, _ = run(capsys, "spectrum", "--config", write_cfg(CAT_CFG), "--degree", "5")
    assert code == 2


@pytest.mark.parametrize("cfg", [CAT_CFG, GENUS2_CFG, CIRCLE_CFG])
def test_check_passes(capsys, write_cfg, cfg):
    code, rep = run_json(capsys, "check", "--config", write_cfg(cfg))
    assert code == 0 and rep["status"] == "pass"
    assert all(c["passed"] for c in rep["checks"])
    assert all("tolerance" in c for c in rep["checks"])


def test_precision_override(capsys, write_cfg):
    code, rep = run_json(capsys, "validate", "--config", write_cfg(CAT_CFG), "--precision", "8")
    assert code == 0 and rep["config"]["precision"] == 8
    code, _, _ = run(capsys, "validate", "--config", write_cfg(CAT_CFG), "--precision", "30")
    assert code == 2


def test_s_list_parsing():
    assert parse_s_list("2,3,2+1i") == [2, 3, 2 + 1j]
    assert parse_s_list("0:1:3") == [0, 0.5, 1]


def test_json_round_trip_exact_fields(capsys, write_cfg):
    # large m makes the counts exceed 64 bits
    code, rep = run_json(capsys, "orbits", "--config", write_cfg(CAT_CFG), "--mmax", "60")
    table = orbit_table(CAT, 60, FlowParams(2.718281828459045))
    back = orbit_table_from_json(json.loads(json.dumps(rep["orbit_table"])))
    assert back.rows == tuple(table.rows)
    assert back.rows[-1].fix_unsigned > 2**64
    z = build_zeta(from_toral(CAT))
    assert zeta_from_json(json.loads(json.dumps(zeta_to_json(z)))) == z
    assert orbit_table_to_json(back) == rep["orbit_table"]


def test_config_parse_defaults():
    cfg = parse_config(CAT_CFG)
    assert cfg.convention == "signed" and cfg.precision == 12 and cfg.r_token == "e"
    with pytest.raises(ConfigError):
        parse_config({"fiber": {"kind": "toral", "matrix": [[1]]}})


def test_console_entry_point(write_cfg):
    proc = subprocess.run([sys.executable, "-m", "torus_zeta", "validate", "--config", write_cfg(SHEAR_CFG)],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "status: fail" in proc.stdout
