"""
Unit tests for table regeneration and golden comparison.
"""

import shutil
import tempfile
from pathlib import Path

import pytest

from config.error_handling import ValidationError
from models.core import EngineConfig
from services.primes import PrimeSieve
from services.tables import TABLE_IDS, TableGenerator, cells_agree, diff_against_golden, load_golden

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "golden"


class TestTableGenerator:
    """Test cases for TableGenerator."""

    def setup_method(self):
        self.sieve = PrimeSieve(EngineConfig(segment_bytes=1 << 15))
        self.generator = TableGenerator(self.sieve)

    def teardown_method(self):
        self.sieve.shutdown()

    def test_loglint(self):
        table = self.generator.generate('loglint', 10**5)
        assert [row['x'] for row in table.rows] == [10**3, 10**4, 10**5]
        assert table.rows[-1]['pi'] == 9592
        assert table.rows[0]['li'] == 177
        assert diff_against_golden(table) == []

    def test_disagree(self):
        table = self.generator.generate('disagree', 10**4)
        assert [(row['N'], row['Q'], row['half_li']) for row in table.rows] == [
            (100, 19, 15), (1000, 112, 88), (10000, 841, 623)
        ]
        assert diff_against_golden(table, str(GOLDEN_DIR)) == []

    def test_divergezero(self):
        table = self.generator.generate('divergezero', 100)
        assert [row['n'] for row in table.rows] == [10, 100]
        assert diff_against_golden(table) == []

    def test_ck(self):
        table = self.generator.generate('ck', 10)
        assert [row['k'] for row in table.rows] == [2, 4, 6, 8, 10]
        assert diff_against_golden(table, str(GOLDEN_DIR)) == []

    def test_pis(self):
        table = self.generator.generate('pis', 3)
        assert table.rows[0] == {'n': 2, 'pi2': 25, 'pi4': 27, 'pi6': 48, 'pi8': 24,
                                 'pi10': 33, 'pi12': 48, 'pi30': 61}
        assert diff_against_golden(table) == []

    def test_unknown_table(self):
        with pytest.raises(ValidationError):
            self.generator.generate('twins')

    def test_limits(self):
        with pytest.raises(ValidationError):
            self.generator.generate('pis', 1)
        with pytest.raises(ValidationError):
            self.generator.generate('ck', 1)


class TestFullScaleTables:
    """Regeneration at the published scales."""

    def setup_method(self):
        self.sieve = PrimeSieve(EngineConfig())
        self.generator = TableGenerator(self.sieve)

    def teardown_method(self):
        self.sieve.shutdown()

    @pytest.mark.slow
    def test_loglint_to_a_billion(self):
        table = self.generator.generate('loglint', 10**9)
        assert table.rows[-1]['pi'] == 50847534
        assert diff_against_golden(table, str(GOLDEN_DIR)) == []

    @pytest.mark.slow
    def test_landau_counts_to_a_million(self):
        table = self.generator.generate('disagree', 10**6)
        assert [row['Q'] for row in table.rows] == [19, 112, 841, 6656, 54110]
        assert diff_against_golden(table, str(GOLDEN_DIR)) == []

    @pytest.mark.slow
    def test_full_ck_list(self):
        table = self.generator.generate('ck', 150)
        assert len(table.rows) == 75
        assert diff_against_golden(table, str(GOLDEN_DIR)) == []

    @pytest.mark.slow
    def test_pair_counts_through_a_million_primes(self):
        table = self.generator.generate('pis', 6)
        golden = load_golden('pis', str(GOLDEN_DIR))
        assert [row['n'] for row in table.rows] == [2, 3, 4, 5, 6]
        for row in table.rows:
            assert row == golden[row['n']]

    @pytest.mark.slow
    def test_divergezero_to_a_million_primes(self):
        table = self.generator.generate('divergezero', 10**6)
        assert [row['n'] for row in table.rows] == [10, 100, 1000, 10**4, 10**5, 10**6]
        assert diff_against_golden(table, str(GOLDEN_DIR)) == []


class TestGoldenComparison:
    """Test cases for load_golden and diff_against_golden."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        self.temp_path = Path(self.temp_dir)
        self.sieve = PrimeSieve(EngineConfig())

    def teardown_method(self):
        self.sieve.shutdown()
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_bundled_files_match_reference_values(self):
        for table_id in TABLE_IDS:
            assert load_golden(table_id, str(GOLDEN_DIR)) == load_golden(table_id)

    def test_golden_csv_takes_precedence(self):
        (self.temp_path / "loglint.csv").write_text("x,pi,li,x_over_log\n1000,169,177,145\n")
        golden = load_golden('loglint', self.temp_dir)
        assert list(golden) == [1000]
        assert golden[1000]['pi'] == 169

    def test_mismatch_reported(self):
        table = TableGenerator(self.sieve).generate('loglint', 10**4)
        table.rows[0]['pi'] = 170
        mismatches = diff_against_golden(table)
        assert len(mismatches) == 1
        assert mismatches[0].to_dict() == {
            'table': 'loglint', 'key': 1000, 'column': 'pi', 'expected': 168, 'actual': 170
        }

    def test_cells_agree(self):
        assert cells_agree(168, 168)
        assert not cells_agree(168, 169)
        assert cells_agree(0.660162, 0.6601618158)
        assert not cells_agree(1.3067, 1.31)

    def test_unknown_golden(self):
        with pytest.raises(ValidationError):
            load_golden('twins')
