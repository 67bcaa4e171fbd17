import json

import pytest

from casimag.cli import (
    EXIT_CONFIG,
    EXIT_CONVERGENCE,
    EXIT_NO_TRANSITION,
    EXIT_OK,
    config_from_csv,
    main,
)

VACUUM_PRESSURE_CFG = """
left_epsilon_model = constant
left_epsilon_value = 1.0
left_mu_model = constant
left_mu_value = 1.0
right_epsilon_model = constant
right_epsilon_value = 1.0
right_mu_model = constant
right_mu_value = 1.0
b = 1 um
T = 300 K
d_min = 0.5 um
d_max = 2 um
d_points = 4
"""

AU_YIG_CFG = """
left_material = au_plasma
right_material = yig_like
b = 1 um
T = 300 K
"""


def run(tmp_path, command, cfg_text, *extra):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(cfg_text)
    out = tmp_path / "out.dat"
    code = main([command, "--config", str(cfg), "--out", str(out), *extra])
    text = out.read_text() if out.exists() else ""
    return code, text


def parse_rows(csv_text):
    lines = [l for l in csv_text.splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


class TestPressureCommand:
    def test_vacuum_pressure_is_zero_everywhere(self, tmp_path):
        code, text = run(tmp_path, "pressure", VACUUM_PRESSURE_CFG)
        assert code == EXIT_OK
        header, rows = parse_rows(text)
        assert header == ["d", "total", "te_zero", "tm_zero", "te_pos",
                          "tm_pos", "total_over_pc", "n_terms"]
        assert len(rows) == 4
        assert all(float(r["total"]) == 0.0 for r in rows)

    def test_sign_change_near_transition(self, tmp_path):
        cfg = AU_YIG_CFG + "d_min = 1.8 um\nd_max = 2.8 um\nd_points = 4\n"
        code, text = run(tmp_path, "pressure", cfg)
        assert code == EXIT_OK
        _, rows = parse_rows(text)
        totals = [float(r["total"]) for r in rows]
        assert totals[0] < 0.0 < totals[-1]

    def test_csv_round_trip_is_bit_identical(self, tmp_path):
        cfg = AU_YIG_CFG + "d_min = 1 um\nd_max = 3 um\nd_points = 3\n"
        code, first = run(tmp_path, "pressure", cfg)
        assert code == EXIT_OK
        recovered = config_from_csv(first)
        replay = "\n".join(f"{k} = {v}" for k, v in recovered.entries.items())
        code, second = run(tmp_path, "pressure", replay)
        assert code == EXIT_OK
        assert first == second

    def test_json_format(self, tmp_path):
        cfg = AU_YIG_CFG + "d_min = 1 um\nd_max = 2 um\nd_points = 2\n"
        code, text = run(tmp_path, "pressure", cfg, "--format", "json")
        assert code == EXIT_OK
        payload = json.loads(text)
        assert payload["command"] == "pressure"
        assert len(payload["records"]) == 2
        assert payload["config"]["right_thickness"] == "1 um"

    def test_threads_do_not_change_values(self, tmp_path):
        cfg = AU_YIG_CFG + "d_min = 1 um\nd_max = 3 um\nd_points = 5\n"
        _, serial = run(tmp_path, "pressure", cfg)
        _, threaded = run(tmp_path, "pressure", cfg, "--threads", "4")
        assert serial == threaded

    def test_seedless_flag_accepted(self, tmp_path):
        cfg = AU_YIG_CFG + "d_min = 1 um\nd_max = 2 um\nd_points = 2\n"
        code, _ = run(tmp_path, "pressure", cfg, "--seedless")
        assert code == EXIT_OK


class TestConfigValidation:
    def test_missing_unit_names_field(self, tmp_path, capsys):
        cfg = AU_YIG_CFG.replace("b = 1 um", "b = 1")
        code, _ = run(tmp_path, "pressure", cfg + "d_min = 1 um\nd_max = 2 um\n")
        assert code == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "right_thickness" in err

    def test_unknown_key_rejected(self, tmp_path):
        cfg = AU_YIG_CFG + "d_min = 1 um\nd_max = 2 um\nd_points = 2\nbogus = 3\n"
        code, _ = run(tmp_path, "pressure", cfg)
        assert code == EXIT_CONFIG

    def test_unknown_material_rejected(self, tmp_path):
        cfg = AU_YIG_CFG.replace("au_plasma", "unobtainium") + \
            "d_min = 1 um\nd_max = 2 um\n"
        code, _ = run(tmp_path, "pressure", cfg)
        assert code == EXIT_CONFIG

    def test_missing_config_file(self, tmp_path):
        code = main(["pressure", "--config", str(tmp_path / "absent.cfg")])
        assert code == EXIT_CONFIG

    def test_convergence_failure_exit_code(self, tmp_path):
        cfg = AU_YIG_CFG + "d_min = 1 um\nd_max = 2 um\nd_points = 2\n" + \
            "max_matsubara_terms = 2\n"
        code, _ = run(tmp_path, "pressure", cfg)
        assert code == EXIT_CONVERGENCE


class TestMetricsCommand:
    def test_au_yig_metrics(self, tmp_path):
        code, text = run(tmp_path, "metrics", AU_YIG_CFG)
        assert code == EXIT_OK
        header, rows = parse_rows(text)
        assert header == ["d_T", "d_at_max", "p_max"]
        d_t = float(rows[0]["d_T"])
        d_max = float(rows[0]["d_at_max"])
        assert 1.92e-6 <= d_t <= 2.60e-6
        assert 2.52e-6 <= d_max <= 3.40e-6
        assert float(rows[0]["p_max"]) > 0.0

    def test_drude_reports_no_transition(self, tmp_path, capsys):
        cfg = AU_YIG_CFG.replace("au_plasma", "au_drude")
        code, _ = run(tmp_path, "metrics", cfg)
        assert code == EXIT_NO_TRANSITION
        assert "attractive" in capsys.readouterr().err

    def test_nonmagnetic_slab_no_transition(self, tmp_path):
        cfg = AU_YIG_CFG + "right_mu0 = 1.0\n"
        code, _ = run(tmp_path, "metrics", cfg)
        assert code == EXIT_NO_TRANSITION


class TestLocusCommand:
    CFG = """
left_material = au_plasma
right_material = yig_like
b = 1 nm
T = 300 K
d_T = 6 um
eps0_grid = 1, 10, 20
"""

    def test_rows_and_agreement(self, tmp_path):
        code, text = run(tmp_path, "locus", self.CFG)
        assert code == EXIT_OK
        header, rows = parse_rows(text)
        assert header == ["eps0", "mu0_numeric", "mu0_analytic", "rel_diff", "error"]
        assert len(rows) == 3
        mu_num = [float(r["mu0_numeric"]) for r in rows]
        assert mu_num[0] == pytest.approx(1.0, abs=1e-6)
        assert mu_num[2] > mu_num[1] > mu_num[0]

    def test_asymptotic_rows_annotated_not_fatal(self, tmp_path):
        cfg = self.CFG.replace("b = 1 nm", "b = inf").replace(
            "eps0_grid = 1, 10, 20", "eps0_grid = 7, 12")
        code, text = run(tmp_path, "locus", cfg)
        assert code == EXIT_OK
        _, rows = parse_rows(text)
        assert rows[0]["error"] == ""
        assert rows[1]["error"] != ""


class TestSweepCommand:
    def test_temperature_sweep(self, tmp_path):
        cfg = """
left_material = au_plasma
right_material = yig_like
right_mu0 = 160
b = 1 nm
T = 300 K
sweep_parameter = temperature
sweep_grid = 300 K, 305 K, 310 K
"""
        code, text = run(tmp_path, "sweep", cfg)
        assert code == EXIT_OK
        header, rows = parse_rows(text)
        assert header == ["parameter", "value", "d_T", "d_at_max", "p_max", "error"]
        d_ts = [float(r["d_T"]) for r in rows]
        assert d_ts[0] > d_ts[1] > d_ts[2]

    def test_all_rows_failing_gives_nonzero_exit(self, tmp_path):
        cfg = """
left_material = au_drude
right_material = yig_like
b = 1 um
T = 300 K
sweep_parameter = mu0
sweep_grid = 20, 160
"""
        code, text = run(tmp_path, "sweep", cfg)
        assert code == EXIT_NO_TRANSITION
        _, rows = parse_rows(text)
        assert all(r["error"] for r in rows)


class TestApproxCompareCommand:
    def test_columns_and_pade_quality(self, tmp_path):
        cfg = """
left_material = au_plasma
right_material = yig_like
right_mu0 = 600
b = 1 nm
T = 300 K
d_min = 0.8 um
d_max = 1.2 um
d_points = 3
"""
        code, text = run(tmp_path, "approx-compare", cfg)
        assert code == EXIT_OK
        header, rows = parse_rows(text)
        assert header == ["d", "te_zero", "tm_zero", "te_pade", "tm_pade",
                          "te_taylor", "tm_taylor"]
        for row in rows:
            te_zero = float(row["te_zero"])
            te_pade = float(row["te_pade"])
            assert te_pade == pytest.approx(te_zero, rel=0.06)
