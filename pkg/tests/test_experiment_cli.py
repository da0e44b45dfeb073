import numpy as np
import pytest

from beamsteer.cli import (UsageError, load_config_file, main, parse_int_list,
                           parse_schemes, parse_snr_spec)
from beamsteer.experiment import (ABS_SATURATION_LABEL, CSV_HEADER,
                                  ExperimentConfig, ValidationCheck,
                                  format_validation_report, rows_to_csv,
                                  run_sweep)
from beamsteer.semetrics import Scheme


def test_parse_snr_spec_forms():
    assert parse_snr_spec("-10,0,10") == (-10.0, 0.0, 10.0)
    assert parse_snr_spec("-10:5:30") == tuple(float(x) for x in range(-10, 31, 5))
    assert parse_snr_spec("30:5:30") == (30.0,)
    with pytest.raises(UsageError):
        parse_snr_spec("10:0:20")
    with pytest.raises(UsageError):
        parse_snr_spec("abc")


def test_parse_lists():
    assert parse_int_list("16,32") == (16, 32)
    assert parse_schemes("ABS,NoInterference") == (Scheme.ABS, Scheme.NO_INTERFERENCE)
    with pytest.raises(UsageError):
        parse_schemes("ZF")


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(n_tx_list=(16,), n_beams=2, snr_db_grid=(10.0, 5.0))
    with pytest.raises(ValueError):
        ExperimentConfig(n_tx_list=(), n_beams=2)
    with pytest.raises(ValueError):
        ExperimentConfig(n_tx_list=(16,), n_beams=2, trials=0)


def test_figure1_row_counts():
    cfg = ExperimentConfig(n_tx_list=(16, 32, 128), n_beams=2, trials=20,
                           schemes=(Scheme.ABS,), bounds=True)
    rows = run_sweep(cfg)
    sim = [r for r in rows if r.label == "ABS"]
    bound = [r for r in rows if r.label == ABS_SATURATION_LABEL]
    assert len(sim) == 27
    assert len(bound) == 3
    assert len(rows) == 30
    assert all(r.snr_db is None and r.se_stderr is None for r in bound)


def test_csv_shape_and_header():
    cfg = ExperimentConfig(n_tx_list=(8,), n_beams=2, snr_db_grid=(0.0, 10.0),
                           trials=10, schemes=(Scheme.ABS, Scheme.HBS), bounds=True)
    text = rows_to_csv(run_sweep(cfg))
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    # 2 snr x 2 schemes + 1 saturation + 2 hbs-approx rows
    assert len(lines) == 1 + 4 + 3


def test_sweep_deterministic_csv(tmp_path):
    args = ["sweep", "--ntx", "8", "--nbeams", "2", "--snr-db", "0,10",
            "--trials", "500", "--seed", "5", "--schemes", "ABS,HBS"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_thread_count_invariance(tmp_path):
    args = ["sweep", "--ntx", "8", "--nbeams", "2", "--snr-db", "10",
            "--trials", "5000", "--seed", "5", "--schemes", "ABS"]
    out1, out2 = tmp_path / "t1.csv", tmp_path / "t4.csv"
    assert main(args + ["--threads", "1", "--out", str(out1)]) == 0
    assert main(args + ["--threads", "4", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_config_file_and_flag_override(tmp_path):
    cfg_file = tmp_path / "exp.cfg"
    cfg_file.write_text("ntx = 4,8\nnbeams = 2\nsnr_db = 0,10  # grid\n"
                        "trials = 20\nseed = 3\nschemes = ABS\n")
    out1 = tmp_path / "c1.csv"
    assert main(["sweep", "--config", str(cfg_file), "--out", str(out1)]) == 0
    lines = out1.read_text().strip().split("\n")
    assert len(lines) == 1 + 4 + 2  # header, 2x2 sim, 2 bound rows
    # flag overrides the file
    out2 = tmp_path / "c2.csv"
    assert main(["sweep", "--config", str(cfg_file), "--ntx", "4",
                 "--out", str(out2)]) == 0
    assert all(",8," not in line for line in out2.read_text().split("\n")[1:] if line)


def test_bad_config_file_is_usage_error(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("this is not key value\n")
    assert main(["sweep", "--config", str(bad)]) == 1


def test_usage_errors_exit_one():
    assert main(["sweep", "--snr-db", "nope"]) == 1
    assert main(["sweep", "--schemes", "MRT"]) == 1
    assert main(["sweep", "--config", "/nonexistent/file.cfg"]) == 1


def test_bounds_subcommand(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bounds", "--ntx", "16,32", "--nbeams", "3",
                 "--snr-db", "30", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 5  # per n_tx: 1 saturation + 1 hbs row


def test_figure_preset_smoke(tmp_path):
    out = tmp_path / "f4.csv"
    assert main(["figure4", "--trials", "50", "--snr-db", "25,30",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    # 2 snr x 2 schemes + 1 saturation + 2 hbs-approx
    assert len(lines) == 1 + 4 + 3
    assert all(",128,5," in line for line in lines[1:])


def test_validation_report_formatting():
    checks = [ValidationCheck("figure1", "demo", 0.1, 0.0, 0.2),
              ValidationCheck("figure2", "demo2", 0.5, 0.0, 0.2)]
    report = format_validation_report(checks)
    assert "PASS" in report and "FAIL" in report
    assert "1/2 checks passed" in report


def test_validate_subcommand_tiny(capsys):
    rc = main(["validate", "--trials", "300", "--seed", "9"])
    out = capsys.readouterr().out
    assert rc in (0, 2)
    assert "checks passed" in out


def test_saturation_rows_constant_across_file():
    cfg = ExperimentConfig(n_tx_list=(16,), n_beams=2, snr_db_grid=(0.0, 30.0),
                           trials=5, schemes=(Scheme.ABS,), bounds=True)
    rows = run_sweep(cfg)
    sat = [r for r in rows if r.label == ABS_SATURATION_LABEL]
    assert len(sat) == 1
    assert np.isfinite(sat[0].se_mean)
