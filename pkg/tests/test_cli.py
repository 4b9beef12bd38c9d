import copy
import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from vdwcasimir.cli import EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_OK, main, run
from vdwcasimir.config import load_schema, parse_config
from vdwcasimir.errors import ConfigError

ROOT = Path(__file__).resolve().parents[1]

LORENTZ = {"variant": "LorentzSum",
           "oscillators": [{"omega_p2": 1e32, "omega_0": 1e16, "gamma": 1e15}]}

BASE = {
    "mode": "force-curve",
    "units": "SI",
    "materials": {"vac": {"variant": "Vacuum"}, "lor": LORENTZ},
    "geometry": {"type": "planar", "eps1": "lor", "eps2": "lor", "eps3": "vac", "gap_d": 3e-8},
    "grid": {"gap_d": [3e-8, 6e-8], "temperature": [0.0, 300.0]},
}


def write(tmp_path, cfg, name="exp.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run_cli(tmp_path, cfg, *extra, fmt="csv"):
    out = tmp_path / f"out.{fmt}"
    code = main(["run", "--config", write(tmp_path, cfg), "--output", str(out),
                 "--format", fmt, *extra])
    return code, out.read_bytes()


def rows(data):
    return list(csv.DictReader(data.decode().splitlines()))


class TestRun:
    def test_force_curve_grid_order_and_units(self, tmp_path):
        code, data = run_cli(tmp_path, BASE)
        assert code == EXIT_OK
        table = rows(data)
        assert [(r["d [m]"], r["T [K]"]) for r in table] == [
            ("3e-08", "0.0"), ("3e-08", "300.0"), ("6e-08", "0.0"), ("6e-08", "300.0")]
        assert all(float(r["pressure [Pa]"]) < 0 for r in table)
        header = data.decode().splitlines()[0].split(",")
        assert all(h.endswith("]") and " [" in h for h in header)

    def test_thread_count_does_not_change_bytes(self, tmp_path):
        _, one = run_cli(tmp_path, BASE, "--threads", "1", fmt="json")
        _, four = run_cli(tmp_path, BASE, "--threads", "4", fmt="json")
        _, again = run_cli(tmp_path, BASE, "--threads", "4", fmt="json")
        assert one == four == again

    def test_json_metadata(self, tmp_path):
        code, data = run_cli(tmp_path, BASE, fmt="json")
        items = json.loads(data)
        meta = items[0]["metadata"]
        assert meta["config_hash"] == parse_config(BASE).config_hash()
        assert meta["unit_system"] == "SI" and meta["mode"] == "force-curve"
        assert "attract" in meta["sign_convention"]
        csv_rows = rows(run_cli(tmp_path, BASE)[1])
        # JSON floats round-trip exactly against the CSV values
        assert [r["pressure"] for r in items[1:]] == [float(r["pressure [Pa]"]) for r in csv_rows]

    def test_identical_media_give_zero(self, tmp_path):
        cfg = copy.deepcopy(BASE)
        cfg["geometry"].update(eps1="vac", eps2="vac")
        cfg["grid"] = {"gap_d": [1e-7]}
        with pytest.warns(RuntimeWarning):
            code, data = run_cli(tmp_path, cfg)
        assert code == EXIT_OK
        assert float(rows(data)[0]["pressure [Pa]"]) == 0.0

    def test_empty_grid_gives_header_only(self, tmp_path):
        cfg = copy.deepcopy(BASE)
        cfg["grid"]["gap_d"] = []
        code, data = run_cli(tmp_path, cfg)
        assert code == EXIT_OK
        assert data.decode().count("\n") == 1

    def test_nonconvergence_tags_rows(self, tmp_path):
        cfg = copy.deepcopy(BASE)
        cfg["grid"] = {"gap_d": [3e-8]}
        cfg["quadrature"] = {"rel_tol": 1e-16, "max_panel_depth": 4}
        code, data = run_cli(tmp_path, cfg)
        assert code == EXIT_NONCONVERGED
        assert rows(data)[0]["status [-]"].startswith("nonconverged")

    def test_validate_rows_pass(self, tmp_path):
        cfg = json.loads((ROOT / "configs" / "lorentz_validate.json").read_text())
        cfg.pop("output")
        code, data = run_cli(tmp_path, cfg)
        table = rows(data)
        assert code == EXIT_OK
        assert {r["check [-]"] for r in table} == {"kk_residual", "wick_rotation"}
        assert all(r["status [-]"] == "pass" for r in table)

    def test_dipoles_mode(self, tmp_path):
        cfg = json.loads((ROOT / "configs" / "two_atoms.json").read_text())
        cfg.pop("output")
        code, data = run_cli(tmp_path, cfg)
        energies = [float(r["energy [J]"]) for r in rows(data)]
        assert code == EXIT_OK
        assert all(e < 0 for e in energies)
        assert energies == sorted(energies)

    def test_ldos_mode(self, tmp_path):
        cfg = {"mode": "ldos", "units": "SI", "materials": {"lor": LORENTZ},
               "geometry": {"type": "bulk", "material": "lor"},
               "grid": {"omega": [5e15, 2e16]}}
        code, data = run_cli(tmp_path, cfg)
        table = rows(data)
        assert code == EXIT_OK
        for r in table:
            a = float(r["spectral_energy_density [J s/m^3]"])
            b = float(r["spectral_energy_density_green [J s/m^3]"])
            assert abs(a - b) <= 1e-9 * abs(a)

    def test_energy_profile_mode(self, tmp_path):
        cfg = copy.deepcopy(BASE)
        cfg["mode"] = "energy-profile"
        cfg["grid"] = {"gap_d": [3e-8], "z": [9e-9, 1.5e-8, 2.1e-8]}
        code, data = run_cli(tmp_path, cfg)
        u = [float(r["energy_density [J/m^3]"]) for r in rows(data)]
        assert code == EXIT_OK
        assert u[0] == pytest.approx(u[2], rel=1e-6)


class TestConfigErrors:
    def test_missing_gap_names_field(self, tmp_path, capsys):
        cfg = copy.deepcopy(BASE)
        del cfg["geometry"]["gap_d"]
        code = main(["run", "--config", write(tmp_path, cfg)])
        assert code == EXIT_CONFIG
        assert "gap_d" in capsys.readouterr().err

    @pytest.mark.parametrize("mutate", [
        lambda c: c.pop("units"),
        lambda c: c["geometry"].update(eps1="gold"),
        lambda c: c["grid"].update(gap_d=[6e-8, 3e-8]),
        lambda c: c["materials"]["lor"].update(variant="Metal"),
        lambda c: c.update(mode="dipoles"),
    ])
    def test_rejected(self, tmp_path, mutate):
        cfg = copy.deepcopy(BASE)
        mutate(cfg)
        assert main(["run", "--config", write(tmp_path, cfg)]) == EXIT_CONFIG

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        assert main(["run", "--config", str(path)]) == EXIT_CONFIG


class TestHash:
    def test_ignores_output_and_unused_materials(self):
        a = parse_config(BASE).config_hash()
        cfg = copy.deepcopy(BASE)
        cfg["output"] = {"path": "x.csv"}
        cfg["materials"]["spare"] = {"variant": "Vacuum"}
        assert parse_config(cfg).config_hash() == a

    def test_changes_with_semantics(self):
        a = parse_config(BASE).config_hash()
        cfg = copy.deepcopy(BASE)
        cfg["grid"]["gap_d"] = [3e-8, 7e-8]
        assert parse_config(cfg).config_hash() != a
        cfg = copy.deepcopy(BASE)
        cfg["materials"]["lor"]["oscillators"][0]["gamma"] = 2e15
        assert parse_config(cfg).config_hash() != a
        cfg = copy.deepcopy(BASE)
        cfg["quadrature"] = {"rel_tol": 1e-8}
        assert parse_config(cfg).config_hash() != a


class TestEntryPoints:
    def env(self, **extra):
        env = dict(os.environ)
        env.update(extra)
        return env

    def test_module_entry_and_thread_env(self, tmp_path):
        cfg = copy.deepcopy(BASE)
        cfg["grid"] = {"gap_d": [3e-8]}
        proc = subprocess.run(
            [sys.executable, "-m", "vdwcasimir", "run", "--config", write(tmp_path, cfg),
             "--verbose"],
            capture_output=True, env=self.env(VDWCASIMIR_THREADS="3"), timeout=120)
        assert proc.returncode == EXIT_OK
        assert "3 thread(s)" in proc.stderr.decode()
        assert proc.stdout.decode().startswith("d [m],T [K],pressure [Pa]")

    def test_bad_thread_env(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "vdwcasimir", "run", "--config", write(tmp_path, BASE)],
            capture_output=True, env=self.env(VDWCASIMIR_THREADS="many"), timeout=120)
        assert proc.returncode == EXIT_CONFIG

    def test_format_from_extension(self, tmp_path):
        cfg = copy.deepcopy(BASE)
        cfg["grid"] = {"gap_d": [3e-8]}
        out = tmp_path / "r.json"
        assert main(["run", "--config", write(tmp_path, cfg), "--output", str(out)]) == 0
        assert "metadata" in json.loads(out.read_text())[0]


def test_documented_schema_matches_package():
    doc = json.loads((ROOT / "docs" / "config.schema.json").read_text())
    assert doc == load_schema()


def test_shipped_configs_validate():
    for path in sorted((ROOT / "configs").glob("*.json")):
        parse_config(json.loads(path.read_text()))


def test_run_rejects_raw_dict():
    with pytest.raises(ConfigError):
        run(BASE)
