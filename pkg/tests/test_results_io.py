"""Tests for CSV results and plan files."""

from pathlib import Path

import pytest

from src.utils.analysis import shipped_pair_reports
from src.utils.ber_engine import BerRecord, SimulationPlan
from src.utils.results_io import (
    CSV_HEADER,
    ConfigError,
    format_ebn0_grid,
    format_pair_reports,
    load_config,
    make_plan,
    parse_ebn0_grid,
    read_csv,
    read_plan_values,
    write_config,
    write_csv,
    write_pair_reports,
)

REPO_ROOT = Path(__file__).parent.parent


def _records():
    return [
        BerRecord(scheme="ofdm-16qam", ebn0_db=0.0, bits=16000, errors=1234, ber=1234 / 16000,
                  groups=1000, seed=7, elapsed_s=0.125, index_bit_errors=0, pattern_errors=0),
        BerRecord(scheme="ofdm-16qam", ebn0_db=2.5, bits=16000, errors=0, ber=0.0,
                  groups=1000, seed=7),
    ]


class TestCsv:

    def test_header_and_line_endings(self, tmp_path):
        path = write_csv(_records(), tmp_path / "out" / "r.csv")
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        assert raw.decode("utf-8").splitlines()[0] == ",".join(CSV_HEADER)

    def test_read_back(self, tmp_path):
        path = write_csv(_records(), tmp_path / "r.csv")
        assert read_csv(path) == _records()

    def test_breakdown_columns(self, tmp_path):
        records = [BerRecord(scheme="dm-qpsk-prop-const-prop-map", ebn0_db=0.0, bits=100, errors=9,
                             ber=0.09, groups=10, seed=1, index_bit_errors=3, pattern_errors=2)]
        path = write_csv(records, tmp_path / "r.csv", breakdown=True)
        assert path.read_text().splitlines()[0].endswith("index_bit_errors,pattern_errors")
        assert read_csv(path) == records

    def test_bad_header(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ConfigError, match="header"):
            read_csv(path)

    def test_short_row(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text(",".join(CSV_HEADER) + "\nofdm-16qam,0.0,10\n")
        with pytest.raises(ConfigError, match=":2:"):
            read_csv(path)


class TestGrid:

    def test_range_includes_stop(self):
        assert parse_ebn0_grid("0:5:30") == (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)

    def test_fractional_step(self):
        assert parse_ebn0_grid("0:0.1:0.3") == (0.0, 0.1, 0.2, 0.3)

    def test_stop_off_grid(self):
        assert parse_ebn0_grid("0:4:10") == (0.0, 4.0, 8.0)

    def test_list(self):
        assert parse_ebn0_grid(" 0, 7.5,20 ") == (0.0, 7.5, 20.0)

    @pytest.mark.parametrize("text", ["0:0:10", "0:-1:10", "10:1:0", "0:5", "a:1:2", "1,x"])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_ebn0_grid(text)

    def test_format(self):
        assert format_ebn0_grid((0.0, 2.5)) == "0.0,2.5"
        assert parse_ebn0_grid(format_ebn0_grid((0.0, 2.5))) == (0.0, 2.5)


class TestPlanFiles:

    def test_write_then_load(self, tmp_path):
        plan = SimulationPlan(scheme="ofdm-im-16qam", ebn0_db=(0.0, 5.0), max_groups=123,
                              target_errors=45, seed=6, workers=2, block_groups=50,
                              breakdown=True, out="results/x.csv")
        path = write_config(plan, tmp_path / "plan.env")
        text = path.read_text()
        assert "breakdown=true" in text
        assert "ebn0=0.0,5.0" in text
        assert load_config(path) == plan

    def test_none_out_is_skipped(self, tmp_path):
        plan = SimulationPlan(scheme="ofdm-16qam", ebn0_db=(0.0,))
        assert "out=" not in write_config(plan, tmp_path / "p.env").read_text()

    def test_file_overrides_base(self, tmp_path):
        path = tmp_path / "p.env"
        path.write_text("scheme=ofdm-16qam\nseed=99\n")
        plan = load_config(path, base={"seed": 1, "ebn0_db": (0.0, 1.0)})
        assert plan.seed == 99
        assert plan.ebn0_db == (0.0, 1.0)
        assert plan.scheme == "ofdm-16qam"

    def test_unknown_key_is_named(self, tmp_path):
        path = tmp_path / "p.env"
        path.write_text("scheme=ofdm-16qam\nebn0=0:5:10\ntrials=5\n")
        with pytest.raises(ConfigError, match="Unknown config key 'trials'"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            read_plan_values(tmp_path / "absent.env")

    def test_empty_out_means_default(self, tmp_path):
        path = tmp_path / "p.env"
        path.write_text("scheme=ofdm-16qam\nebn0=0\nout=\n")
        assert read_plan_values(path)["out"] is None

    def test_invalid_value(self, tmp_path):
        path = tmp_path / "p.env"
        path.write_text("scheme=ofdm-16qam\nebn0=0:5:10\nmax_groups=0\n")
        with pytest.raises(ConfigError, match="max_groups"):
            load_config(path)

    def test_missing_scheme(self):
        with pytest.raises(ConfigError, match="scheme"):
            make_plan({"ebn0_db": (0.0,)})

    def test_shipped_default_plan_loads(self):
        plan = load_config(REPO_ROOT / "config" / "default_plan.env")
        assert plan.scheme == "dm-qpsk-prop-const-prop-map"
        assert plan.ebn0_db[0] == 0.0


class TestPairReports:

    def test_format(self):
        lines = format_pair_reports(shipped_pair_reports()).splitlines()
        assert lines[0].startswith("pair,delta1_factor,delta2_factor,eb")
        assert lines[2].startswith("prop-qpsk,2,1.41421356237,1,")
        assert len(lines) == 5

    def test_write(self, tmp_path):
        path = write_pair_reports(shipped_pair_reports(), tmp_path / "a" / "pairs.csv")
        assert path.read_text() == format_pair_reports(shipped_pair_reports())
