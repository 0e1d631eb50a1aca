import json

import mpmath

from dqi_workbench.config import field_overrides, load_config
from dqi_workbench.paths import OutputPaths
from dqi_workbench.utils import big_number, big_number_value, report_id_from_params, write_json


def test_report_id_is_deterministic():
    params = {"m": 1023, "n": 60, "seed": 7}
    assert report_id_from_params(params) == report_id_from_params(dict(reversed(list(params.items()))))
    assert report_id_from_params(params) != report_id_from_params({**params, "seed": 8})
    assert len(report_id_from_params(params)) == 10


def test_big_number_for_exact_integers():
    payload = big_number(10**20 + 1)
    assert payload["decimal"] == "100000000000000000001"
    assert payload["exponent"] == 20
    assert abs(payload["mantissa"] - 1.0) < 1e-12
    assert big_number(0) == {"decimal": "0", "mantissa": 0.0, "exponent": 0}


def test_big_number_keeps_values_beyond_float_range():
    x = mpmath.mpf(10) ** 400 * 3
    payload = big_number(x)
    assert payload["exponent"] == 400
    assert abs(payload["mantissa"] - 3.0) < 1e-9
    assert abs(big_number_value(payload) / x - 1) < 1e-15


def test_big_number_infinity():
    payload = big_number(mpmath.inf)
    assert payload["mantissa"] is None
    assert payload["exponent"] is None


def test_write_json_creates_parents(tmp_path):
    target = write_json(tmp_path / "a" / "b.json", {"z": 1, "a": 2})
    assert json.loads(target.read_text(encoding="utf-8")) == {"a": 2, "z": 1}


def test_config_defaults_and_env_overrides(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("OPI_SEED", "99")
    monkeypatch.setenv("DQI_OUTPUT_ROOT", str(tmp_path / "out"))
    cfg = load_config()
    assert cfg["seed"] == 99
    assert cfg["output"]["root"] == str(tmp_path / "out")
    assert cfg["estimate"]["jobs"] == 1
    assert cfg["attacks"]["slow_comparator_max_m"] == 64
    paths = OutputPaths.from_config(cfg)
    paths.ensure_all()
    assert paths.tables_dir.is_dir()
    assert paths.report_path("ABC").name == "estimate_ABC.json"


def test_config_file_field_overrides(tmp_path, monkeypatch):
    monkeypatch.delenv("OPI_SEED", raising=False)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 5, "fields": {"10": {"costs": {"toffoli": 39}}}}), encoding="utf-8")
    cfg = load_config(str(path))
    assert cfg["seed"] == 5
    assert field_overrides(cfg, 10) == {"costs": {"toffoli": 39}}
    assert field_overrides(cfg, 8) == {}
