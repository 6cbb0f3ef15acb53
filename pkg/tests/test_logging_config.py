"""
Unit tests for logging configuration and structured logging.
"""

import json
import logging
import shutil
import sys
import tempfile
from pathlib import Path
from unittest.mock import patch

from config.logging_config import (
    PerformanceLogger, StructuredFormatter, get_logger, get_performance_logger, setup_logging
)


def _record(msg="Test message", level=logging.INFO):
    return logging.LogRecord(
        name="test_logger", level=level, pathname="/test/path.py", lineno=42,
        msg=msg, args=(), exc_info=None
    )


class TestStructuredFormatter:
    """Test cases for StructuredFormatter class."""

    def setup_method(self):
        self.formatter = StructuredFormatter()

    def test_format_basic_record(self):
        log_entry = json.loads(self.formatter.format(_record()))

        assert log_entry['level'] == 'INFO'
        assert log_entry['logger'] == 'test_logger'
        assert log_entry['message'] == 'Test message'
        assert log_entry['line'] == 42
        assert 'timestamp' in log_entry
        assert 'extra' not in log_entry

    def test_format_record_with_extra_fields(self):
        record = _record("Error occurred", logging.ERROR)
        record.exit_code = 3
        record.details = {"requested_bytes": 1 << 30}

        log_entry = json.loads(self.formatter.format(record))

        assert log_entry['extra']['exit_code'] == 3
        assert log_entry['extra']['details'] == {"requested_bytes": 1 << 30}

    def test_format_record_with_exception(self):
        try:
            raise ValueError("Test exception")
        except ValueError:
            exc_info = sys.exc_info()

        record = _record("Exception occurred", logging.ERROR)
        record.exc_info = exc_info

        log_entry = json.loads(self.formatter.format(record))
        assert "ValueError: Test exception" in log_entry['exception']

    def test_format_non_serializable_extra(self):
        record = _record()
        record.path = Path("/tmp/report.csv")
        log_entry = json.loads(self.formatter.format(record))
        assert log_entry['extra']['path'] == "/tmp/report.csv"


class TestSetupLogging:
    """Test cases for setup_logging."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        self.temp_path = Path(self.temp_dir)

    def teardown_method(self):
        root = logging.getLogger()
        for handler in list(root.handlers):
            handler.close()
        root.handlers.clear()
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_console_only_by_default(self):
        setup_logging("DEBUG")
        root = logging.getLogger()
        assert root.level == logging.DEBUG
        assert len(root.handlers) == 1
        assert root.handlers[0].stream is sys.stderr

    def test_unknown_level_falls_back_to_warning(self):
        setup_logging("CHATTY")
        assert logging.getLogger().level == logging.WARNING

    def test_structured_file_handler(self):
        log_file = self.temp_path / "logs" / "run.log"
        setup_logging("INFO", log_file=str(log_file))

        get_logger("services.primes").info("sieved", extra={'segments': 4})
        for handler in logging.getLogger().handlers:
            handler.flush()

        entry = json.loads(log_file.read_text().splitlines()[-1])
        assert entry['message'] == "sieved"
        assert entry['extra']['segments'] == 4

    def test_log_dir_overrides_directory(self):
        setup_logging("INFO", log_file="elsewhere/run.log", log_dir=self.temp_dir)
        logging.getLogger("x").warning("hello")
        assert (self.temp_path / "run.log").exists()

    def test_plain_file_format(self):
        log_file = self.temp_path / "plain.log"
        setup_logging("INFO", log_file=str(log_file), enable_structured_logging=False)
        logging.getLogger("x").warning("plain text")
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert " - WARNING - plain text" in log_file.read_text()


class TestPerformanceLogger:
    """Test cases for PerformanceLogger class."""

    def setup_method(self):
        self.performance = PerformanceLogger('test_performance')

    def test_operation_timing(self):
        with patch('config.logging_config.time.perf_counter', side_effect=[10.0, 12.5]):
            self.performance.start_operation("op1", "sieve", {'hi': 10**6})
            duration = self.performance.end_operation("op1", "sieve")
        assert duration == 2.5
        assert "op1" not in self.performance.start_times

    def test_end_without_start(self):
        with patch.object(self.performance.logger, 'warning') as warning:
            assert self.performance.end_operation("missing", "sieve") == 0.0
        warning.assert_called_once()

    def test_log_metric(self):
        with patch.object(self.performance.logger, 'info') as info:
            self.performance.log_metric("table_ck_rows", 75, "rows")
        extra = info.call_args.kwargs['extra']
        assert extra['metric_name'] == "table_ck_rows"
        assert extra['metric_value'] == 75
        assert extra['metric_unit'] == "rows"

    def test_get_performance_logger(self):
        assert get_performance_logger("perf").logger.name == "perf"
        assert get_logger("services.census").name == "services.census"
