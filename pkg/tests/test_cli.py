"""
End-to-end tests of the command line: flag parsing, validation, exit codes
and report contents.
"""

import json

import pandas as pd
import pytest

from cli.run_config import RunConfig, parse_args
from config.settings import Settings
from main import main
from utils.validation import validate_run_config


def run_json(capsys, *argv):
    code = main(list(argv) + ["--freeze-clock"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


class TestParsing:
    """Flags into RunConfig."""

    def test_rational_field(self):
        config = parse_args(["spectra", "--B", "3/2", "--k", "7"])
        assert str(config.B) == "3/2"
        assert config.k == 7
        assert config.horizons == Settings.CLI_DEFAULTS["horizons"]

    def test_malformed_rational(self):
        with pytest.raises(SystemExit) as info:
            parse_args(["spectra", "--B", "two", "--k", "7"])
        assert info.value.code == 2

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as info:
            main(["warp-drive"])
        assert info.value.code == 2

    def test_echo_excludes_execution_flags(self):
        config = parse_args(["haar-sample", "--n-samples", "5", "--shards", "3", "--output", "x.json"])
        echo = config.to_echo()
        assert echo['n_samples'] == 5
        for key in Settings.REPORT_CONFIG["echo_excluded"]:
            assert key not in echo


class TestValidation:
    """Configuration checks before dispatch."""

    def test_missing_required_flag(self):
        result = validate_run_config(RunConfig(subcommand="classify", E=1.0))
        assert not result
        assert "classify requires --B" in result.errors

    def test_format_not_offered(self):
        result = validate_run_config(RunConfig(subcommand="classify", B=2, E=1.0, format="csv"))
        assert not result

    @pytest.mark.parametrize("argv", [
        ["classify", "--B", "0", "--E", "1"],
        ["classify", "--B", "2", "--E", "-1"],
        ["zonal-moment", "--B", "2", "--E", "1", "--grid-t", "8"],
        ["ergodic-scan", "--dt", "0.5"],
        ["haar-sample", "--n-samples", "3", "--seed", "-1"],
        ["projector-check", "--k", "2", "--levels", "0", "1", "--multiplicities", "1"],
    ])
    def test_invalid_runs_exit_two(self, capsys, argv):
        assert main(argv) == 2
        assert capsys.readouterr().out == ""

    def test_domain_errors_exit_two(self, capsys):
        assert main(["period", "--B", "2", "--E", "3"]) == 2
        assert main(["spectra", "--B", "1/3", "--k", "3"]) == 2
        assert capsys.readouterr().out == ""


class TestMagneticCommands:
    """classify, period, flow, lyapunov and conjugacy reports."""

    def test_classify_envelope(self, capsys):
        code, report = run_json(capsys, "classify", "--B", "2", "--E", "1")
        assert code == 0
        assert list(report) == ['tool_version', 'subcommand', 'config_echo', 'seed', 'wall_time_ms', 'result']
        assert report['wall_time_ms'] == 0
        assert report['config_echo']['B'] == "2/1"
        result = report['result']
        assert result['regime'] == "elliptic"
        assert result['E_c'] == 2.0
        assert result['det'] == pytest.approx(0.5)
        assert result['T_E'] == pytest.approx(2.0 ** -0.5)

    def test_parabolic_classify_has_no_period_scale(self, capsys):
        code, report = run_json(capsys, "classify", "--B", "2", "--E", "2")
        assert code == 0
        assert report['result']['regime'] == "parabolic"
        assert 'T_E' not in report['result']

    def test_period(self, capsys):
        code, report = run_json(capsys, "period", "--B", "2", "--E", "1")
        assert code == 0
        assert report['result']['t_star'] == pytest.approx(3.141592653589793 * 2.0 ** 0.5)

    def test_flow_report(self, capsys):
        code, report = run_json(capsys, "flow", "--B", "2", "--E", "1", "--t", "0.5", "--seed", "4")
        assert code == 0
        assert report['seed'] == 4
        assert set(report['result']) >= {'start', 'end', 'start_point', 'end_point'}

    def test_conjugacy(self, capsys):
        code, report = run_json(capsys, "conjugacy", "--B", "2", "--E", "4")
        assert code == 0
        assert report['result']['inverse_T_E'] == pytest.approx(2.0)


class TestSpectraCommands:
    """Landau level reports."""

    def test_single_level(self, capsys):
        code, report = run_json(capsys, "spectra", "--k", "10", "--m", "3", "--B", "2")
        assert code == 0
        assert report['result']['lambda'] == "64/1"
        assert report['result']['scaled'] == pytest.approx(0.64)

    def test_level_table_csv(self, capsys):
        assert main(["spectra", "--k", "10", "--B", "2", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "k,m,numerator,denominator,lambda_float"
        assert len(lines) == 21

    def test_projector_check(self, capsys):
        code, report = run_json(capsys, "projector-check", "--k", "2", "--levels", "0", "1", "3")
        assert code == 0
        assert report['result']['circle_periodicity'] == 0.0
        assert report['result']['spectrum'] == ["0/1", "1/2", "3/2"]

    def test_identity_sweep(self, capsys):
        code, report = run_json(capsys, "identity-sweep", "--k-max", "8", "--B-values", "1/2", "2")
        assert code == 0
        assert report['result']['all_zero'] is True


class TestSampling:
    """Seeded sampling is reproducible and shard independent."""

    def test_byte_identical_reruns(self, capsys):
        argv = ["haar-sample", "--n-samples", "50", "--seed", "9", "--freeze-clock"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first

    def test_shard_independence(self, tmp_path):
        n = str(Settings.MONTE_CARLO_CONFIG["chunk_size"] + 100)
        one, two = tmp_path / "one.csv", tmp_path / "two.csv"
        base = ["haar-sample", "--n-samples", n, "--seed", "2", "--format", "csv"]
        assert main(base + ["--output", str(one)]) == 0
        assert main(base + ["--shards", "2", "--output", str(two)]) == 0
        assert one.read_bytes() == two.read_bytes()

    def test_empty_sample(self, capsys):
        assert main(["haar-sample", "--n-samples", "0", "--format", "csv"]) == 0
        assert capsys.readouterr().out.splitlines() == ["m11,m12,m21,m22,re,im"]


class TestErgodicCommands:
    """Scan tables feed the decay fit."""

    def test_scan_csv_into_decay_fit(self, capsys, tmp_path):
        table = tmp_path / "scan.csv"
        assert main(["ergodic-scan", "--states", "10", "--horizons", "10", "20", "30", "40",
                     "--dt", "0.1", "--format", "csv", "--output", str(table)]) == 0
        frame = pd.read_csv(table)
        assert list(frame.columns) == ['T', 'sup_error']
        assert list(frame['T']) == [10.0, 20.0, 30.0, 40.0]

        code, report = run_json(capsys, "decay-fit", "--input", str(table))
        assert code == 0
        assert report['result']['exact_convergence'] is False
        assert report['result']['n_rows'] == 4

    def test_missing_scan_file(self, capsys, tmp_path):
        assert main(["decay-fit", "--input", str(tmp_path / "absent.csv")]) == 2
