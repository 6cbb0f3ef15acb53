"""
End-to-end integration tests for the Bateman-Horn toolkit.

These tests drive the CLI from argument parsing to report output and check
the exit codes: 0 success, 1 usage or parse error, 2 inadmissible input,
3 resource budget exceeded.
"""

import json
import shutil
import tempfile
from pathlib import Path

import pytest
from click.testing import CliRunner

from cli.main_cli import main


def _json_lines(output):
    return [json.loads(line) for line in output.splitlines() if line.startswith('{')]


class TestEndToEndIntegration:
    """End-to-end tests for the complete CLI workflow."""

    def setup_method(self):
        self.runner = CliRunner()
        self.temp_dir = tempfile.mkdtemp()
        self.temp_path = Path(self.temp_dir)

        self.config_path = self.temp_path / 'test_config.json'
        self.config_path.write_text(json.dumps({
            "segment_bytes": 65536,
            "threads": 2,
            "seed": 7,
            "output_format": "csv",
        }))

    def teardown_method(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_help_without_subcommand(self):
        result = self.runner.invoke(main, [])
        assert result.exit_code == 0
        assert 'constant' in result.output
        assert 'ulam' in result.output

    def test_twin_constant_json(self):
        result = self.runner.invoke(main, ['constant', '-f', 't, t+2', '--bound', '1e5', '--format', 'json'])
        assert result.exit_code == 0, result.output
        record, = _json_lines(result.output)
        assert record['value'] == pytest.approx(1.32032, rel=1e-4)
        assert record['family'] == "{t, t+2}"

    def test_constant_with_checkpoints(self):
        result = self.runner.invoke(main, [
            'constant', '-f', 't^2+1', '--bound', '1e5', '--checkpoints', '1e3,1e4', '--format', 'csv'
        ])
        assert result.exit_code == 0, result.output
        assert 'family,bound,value,verdict' in result.output
        assert 'checkpoint,partial,series' in result.output
        assert '\n1000,' in result.output

    def test_closed_form_ck(self):
        result = self.runner.invoke(main, ['constant', '--form', 'ck', '-k', '6', '--bound', '1e5',
                                           '--format', 'csv'])
        assert result.exit_code == 0, result.output
        assert '1.3203' in result.output
        assert 'tail_bound' in result.output

    def test_inadmissible_family_exits_2(self):
        result = self.runner.invoke(main, ['constant', '-f', 't, t+1'])
        assert result.exit_code == 2
        assert 'Error:' in result.output

    def test_check_command(self):
        result = self.runner.invoke(main, ['check', '-f', 't^2-1'])
        assert result.exit_code == 2
        assert 'reducible' in result.output

        result = self.runner.invoke(main, ['check', '-f', 't^2+1', '--profile', '13', '--format', 'csv'])
        assert result.exit_code == 0, result.output
        assert 'true' in result.output
        assert '\n13,2,quadratic' in result.output

    def test_count_modes(self):
        result = self.runner.invoke(main, ['count', '-f', 't^2+1', '-x', '1000', '--format', 'csv'])
        assert result.exit_code == 0, result.output
        assert '{t^2+1},1000,112' in result.output

        result = self.runner.invoke(main, ['count', '--pairs', '-k', '2', '--first-primes', '100',
                                           '--format', 'csv'])
        assert result.exit_code == 0, result.output
        assert '"{t, t+2}",100,25' in result.output

        result = self.runner.invoke(main, ['count', '--chains', 'first', '--bound', '100', '--min-len', '5'])
        assert result.exit_code == 0, result.output
        assert '89 179 359 719 1439 2879' in result.output

    def test_progression_values(self):
        result = self.runner.invoke(main, ['count', '--ap', '10000000,123456789', '--values',
                                           '--bound', '100', '--format', 'csv'])
        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[:4] == ['t', '11', '29', '43']

    def test_count_needs_one_mode(self):
        result = self.runner.invoke(main, ['count', '-x', '100'])
        assert result.exit_code == 1
        assert 'choose exactly one' in result.output

    def test_odd_pair_shift_exits_2(self):
        result = self.runner.invoke(main, ['count', '--pairs', '-k', '3', '-x', '100'])
        assert result.exit_code == 2

    def test_primes_with_config_file(self):
        result = self.runner.invoke(main, ['--config', str(self.config_path), 'primes', '--pi', '1e6'])
        assert result.exit_code == 0, result.output
        assert 'x,pi' in result.output
        assert '1000000,78498' in result.output

    def test_bad_integer_exits_1(self):
        result = self.runner.invoke(main, ['primes', '--pi', '1.5'])
        assert result.exit_code == 1

    def test_unknown_option_exits_1(self):
        result = self.runner.invoke(main, ['primes', '--bogus'])
        assert result.exit_code == 1

    def test_scale_cap_exits_3(self):
        result = self.runner.invoke(main, ['primes', '--pi', '1e10'])
        assert result.exit_code == 3
        assert '--allow-large' in result.output

    def test_memory_budget_exits_3(self):
        out = self.temp_path / 'big.pgm'
        result = self.runner.invoke(main, ['--memory-budget', '1000', 'ulam', '--side', '101', '--out', str(out)])
        assert result.exit_code == 3
        assert not out.exists()

    def test_ulam_raster(self):
        out = self.temp_path / 'spiral.pgm'
        result = self.runner.invoke(main, ['ulam', '--side', '5', '--out', str(out)])
        assert result.exit_code == 0, result.output
        data = out.read_bytes()
        assert data.startswith(b"P5\n5 5\n255\n")
        assert len(data) == len(b"P5\n5 5\n255\n") + 25

    def test_ulam_even_side_exits_1(self):
        result = self.runner.invoke(main, ['ulam', '--side', '4', '--out', str(self.temp_path / 's.pgm')])
        assert result.exit_code == 1

    def test_ulam_ray_report(self):
        report_out = self.temp_path / 'ray.csv'
        result = self.runner.invoke(main, [
            'ulam', '--ray', '21', '--dir', 'SE', '--report', '--count', '50',
            '--report-out', str(report_out), '--format', 'json'
        ])
        assert result.exit_code == 0, result.output
        record, = _json_lines(result.output)
        assert record['classification'] == 'reducible'
        assert record['primes_found'] == 0
        assert report_out.read_text().startswith('anchor,direction,skip,A,b,c')

    def test_ulam_prime_rich_ray_prints_constant(self):
        result = self.runner.invoke(main, [
            'ulam', '--ray', '7', '--dir', 'SE', '--report', '--count', '100',
            '--constant-bound', '1e5', '--format', 'json'
        ])
        assert result.exit_code == 0, result.output
        record, = _json_lines(result.output)
        assert (record['A'], record['b'], record['c']) == (4, 4, -1)
        assert record['constant'] == pytest.approx(3.70, abs=0.02)
        assert record['half_constant'] == pytest.approx(1.85, abs=0.01)

    def test_euler_plan(self):
        result = self.runner.invoke(main, ['euler', '--primes-through', '37', '--plan-streak',
                                           '--format', 'csv'])
        assert result.exit_code == 0, result.output
        assert '1448243016041' in result.output

        result = self.runner.invoke(main, ['euler', '--streak', '41', '--format', 'csv'])
        assert '41,40' in result.output

    def test_euler_residue_exits_2(self):
        result = self.runner.invoke(main, ['euler', '--primes-through', '3', '--rule', 'explicit',
                                           '--nonresidues', '3:1'])
        assert result.exit_code == 2

    def test_tables_diff(self):
        result = self.runner.invoke(main, ['tables', '--id', 'loglint', '--max', '1e4', '--diff'])
        assert result.exit_code == 0, result.output
        assert 'matches the golden values' in result.output

    def test_tables_diff_mismatch_exits_1(self):
        golden = self.temp_path / 'golden'
        golden.mkdir()
        (golden / 'loglint.csv').write_text("x,pi,li,x_over_log\n1000,170,177,145\n")
        result = self.runner.invoke(main, ['--golden-dir', str(golden), 'tables', '--id', 'loglint',
                                           '--max', '1e4', '--diff'])
        assert result.exit_code == 1
        assert 'expected 170, got 168' in result.output

    def test_tables_written_to_csv(self):
        out = self.temp_path / 'ck.csv'
        result = self.runner.invoke(main, ['tables', '--id', 'ck', '--through', '6', '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert out.read_text().splitlines() == ['k,C_k', '2,0.660162', '4,0.660162', '6,1.32032']

    def test_init_and_validate_config(self):
        config_file = self.temp_path / 'generated.yaml'
        result = self.runner.invoke(main, ['init-config', '-o', str(config_file)])
        assert result.exit_code == 0, result.output
        assert config_file.exists()

        result = self.runner.invoke(main, ['validate-config', '-c', str(config_file)])
        assert result.exit_code == 0, result.output
        assert 'Configuration file is valid' in result.output
        assert 'miller_rabin_rounds' in result.output

    def test_validate_config_rejects_bad_file(self):
        bad = self.temp_path / 'bad.json'
        bad.write_text(json.dumps({"threads": 0}))
        result = self.runner.invoke(main, ['validate-config', '-c', str(bad)])
        assert result.exit_code == 1
