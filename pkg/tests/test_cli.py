import math
import re
from pathlib import Path

import pytest

from xlink import cli
from xlink.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_RESOURCE, EXIT_VALIDATION, format_db, main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

SINGLE = 'scenario = "single"\nband = ["mmwave", "subthz"]\nalpha = ["1 deg", "5 deg"]\nN = 100\nh = "500 km"\n'
COPLANAR = 'scenario = "coplanar"\nalpha = "10 deg"\nN = 100\nh = "500 km"\nsamples = 200\n[other]\nh = "510 km"\n'


def write(tmp_path, text, name="c.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def rows(path):
    lines = path.read_text().splitlines()
    data = [l for l in lines if not l.startswith("#")]
    return lines, data[0].split(","), [r.split(",") for r in data[1:]]


def assert_clean(path):
    text = path.read_text()
    assert "nan" not in text.lower()
    body = [l for l in text.splitlines() if not l.startswith("#")][1:]
    for cell in (c for line in body for c in line.split(",")):
        if cell not in ("inf", "-inf") and not re.match(r"^[a-zA-Z]", cell):
            assert math.isfinite(float(cell))


def test_format_db():
    assert format_db(1.23456) == "1.2346"
    assert format_db(math.inf) == "inf"
    with pytest.raises(ValueError):
        format_db(math.nan)


def test_single_csv(tmp_path):
    cfg = write(tmp_path, SINGLE)
    assert main(["single", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_OK
    lines, header, data = rows(tmp_path / "o" / "single.csv")
    assert lines[0] == "# schema=1" and lines[1].startswith("# generated=")
    assert header[:5] == ["N", "ei_w_mmwave_a1", "sir_db_mmwave_a1", "sinr_db_mmwave_a1", "cap_gbps_mmwave_a1"]
    assert len(header) == 1 + 4 * 4 and data[0][0] == "100"
    assert data[0][2] == "inf"  # empty interferer set
    assert_clean(tmp_path / "o" / "single.csv")


def test_byte_identical_without_timestamp(tmp_path):
    cfg = write(tmp_path, COPLANAR)
    for out in ("a", "b"):
        assert main(["coplanar", "--config", str(cfg), "--out", str(tmp_path / out), "--no-timestamp"]) == EXIT_OK
    a, b = (tmp_path / d / "coplanar.csv" for d in "ab")
    assert a.read_bytes() == b.read_bytes()
    assert not any(l.startswith("# generated") for l in a.read_text().splitlines())
    lines, header, data = rows(a)
    assert header[0] == "t_s" and len(data) == 200
    assert_clean(a)


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    cfg = write(tmp_path, COPLANAR)
    monkeypatch.setenv("XLINK_THREADS", "1")
    main(["coplanar", "--config", str(cfg), "--out", str(tmp_path / "a"), "--no-timestamp"])
    monkeypatch.setenv("XLINK_THREADS", "4")
    main(["coplanar", "--config", str(cfg), "--out", str(tmp_path / "b"), "--no-timestamp"])
    assert (tmp_path / "a" / "coplanar.csv").read_bytes() == (tmp_path / "b" / "coplanar.csv").read_bytes()


def test_sweep_with_histogram_and_check(tmp_path):
    text = COPLANAR + '[sweep]\naxis = "N"\nvalues = [50, 100]\nmetric = "E_I"\naveraging = "histogram"\n'
    cfg = write(tmp_path, text)
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path), "--check-sim", "--no-timestamp"]) == EXIT_OK
    _, header, data = rows(tmp_path / "pdf_mmwave_a10.csv")
    assert header == ["N", "bin_lo_dbm", "bin_hi_dbm", "density_per_db", "zero_fraction"]
    assert len(data) == 2 * 50
    _, header, data = rows(tmp_path / "simcheck.csv")
    assert [r[-1] for r in data] == ["pass", "pass"]
    for f in ("sweep.csv", "pdf_mmwave_a10.csv", "simcheck.csv"):
        assert_clean(tmp_path / f)


def test_validation_failure_exit(tmp_path, monkeypatch):
    from xlink.sweeps import SimCheck, SweepPoint

    real = cli.run_sweep

    def broken(spec, check_sim=False, workers=None):
        res = real(spec, check_sim, workers)
        bad = [SweepPoint(p.value, p.report, p.histogram, SimCheck(1, 0.0, 1)) for p in res.points]
        return type(res)(res.spec, tuple(bad))

    monkeypatch.setattr(cli, "run_sweep", broken)
    cfg = write(tmp_path, COPLANAR)
    assert main(["coplanar", "--config", str(cfg), "--out", str(tmp_path), "--check-sim"]) == EXIT_VALIDATION


@pytest.mark.parametrize(
    "text",
    ["N = 100\nh = 500", 'scenario = "single"\n[sweep]\naxis = "N"\nvalues = []', 'band = "x-band"'],
)
def test_config_errors(tmp_path, text, capsys):
    cfg = write(tmp_path, text)
    command = "sweep" if "[sweep]" in text else "single"
    assert main([command, "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()  # nothing computed or written


def test_missing_config_argument(tmp_path):
    assert main(["single", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_bad_thread_env(tmp_path, monkeypatch):
    monkeypatch.setenv("XLINK_THREADS", "many")
    assert main(["single", "--config", str(write(tmp_path, SINGLE)), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_resource_guard(tmp_path):
    cfg = write(tmp_path, COPLANAR.replace("samples = 200", "samples = 100000001"))
    assert main(["coplanar", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_RESOURCE
    assert not (tmp_path / "o").exists()


def test_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["single", "--config", str(write(tmp_path, SINGLE)), "--out", str(blocker / "sub")]) == EXIT_IO


def test_validate_fixtures(tmp_path):
    assert main(["validate", "--out", str(tmp_path), "--no-timestamp"]) == EXIT_OK
    _, header, data = rows(tmp_path / "validate.csv")
    assert header[-1] == "status" and len(data) >= 6
    assert all(r[-1] == "pass" for r in data)
    assert {r[1] for r in data} == {"single", "coplanar", "shifted", "shifted_coplanar", "combined"}


@pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.toml")))
def test_example_configs_parse(name):
    from xlink.config import load_config

    cfg = load_config(CONFIGS / name)
    assert cfg.series


def test_unknown_command(tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["launch", "--out", str(tmp_path)])
    assert e.value.code == 2
