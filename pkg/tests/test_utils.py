"""
Tests for seeded work splitting, run validation and logging setup.
"""

import logging

import numpy as np
import pytest

from cli.run_config import RunConfig
from core.errors import DomainError
from utils.logger import LogContext, setup_logging
from utils.seeding import chunk_plan, chunk_rng, concat, ordered_map, validate_seed
from utils.validation import ValidationResult, check_range, validate_run_config


def _square(x):
    return x * x


class TestSeeding:
    """Chunked seeded streams."""

    def test_chunk_plan(self):
        assert chunk_plan(10, 4) == [(0, 4), (1, 4), (2, 2)]
        assert chunk_plan(0, 4) == []

    def test_negative_count(self):
        with pytest.raises(DomainError):
            chunk_plan(-1)

    @pytest.mark.parametrize("seed", [-1, 2 ** 64, 1.5])
    def test_seed_range(self, seed):
        with pytest.raises(DomainError):
            validate_seed(seed)

    def test_largest_seed(self):
        assert validate_seed(2 ** 64 - 1) == 2 ** 64 - 1

    def test_streams_depend_on_seed_and_chunk(self):
        a = chunk_rng(5, 0).random(4)
        np.testing.assert_array_equal(a, chunk_rng(5, 0).random(4))
        assert not np.array_equal(a, chunk_rng(5, 1).random(4))
        assert not np.array_equal(a, chunk_rng(6, 0).random(4))

    def test_ordered_map_keeps_order(self):
        assert ordered_map(_square, range(6), shards=2) == [0, 1, 4, 9, 16, 25]
        assert ordered_map(_square, [3], shards=4) == [9]

    def test_ordered_map_needs_a_shard(self):
        with pytest.raises(DomainError):
            ordered_map(_square, [1], shards=0)

    def test_concat_empty(self):
        assert concat([], (0, 2, 2)).shape == (0, 2, 2)


class TestValidationRules:
    """Range checks from Settings."""

    def test_exclusive_minimum(self):
        assert not check_range("B", 0.0)
        assert check_range("B", 0.5)

    def test_unknown_rule_passes(self):
        assert check_range("whatever", -5)

    def test_non_finite(self):
        assert not check_range("E", float('inf'))

    def test_merge(self):
        merged = ValidationResult().merge(ValidationResult(["bad"]))
        assert not merged
        assert str(merged) == "Invalid: bad"

    def test_magnetic_scan_needs_field(self):
        result = validate_run_config(RunConfig(subcommand="ergodic-scan", flow="magnetic"))
        assert "ergodic-scan requires --B" in result.errors


class TestLogging:
    """Console logging goes to stderr."""

    def test_console_on_stderr(self, capsys):
        setup_logging(log_level="INFO")
        logging.getLogger("magnetic.test").info("hello")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "hello" in captured.err

    def test_log_file(self, tmp_path):
        target = tmp_path / "logs" / "run.log"
        setup_logging(console_output=False, log_level="WARNING", log_file=target)
        logging.getLogger("magnetic.test").debug("detail")
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert "detail" in target.read_text(encoding="utf-8")

    def test_log_context_restores_level(self):
        setup_logging(console_output=False, log_level="WARNING")
        with LogContext("DEBUG"):
            assert logging.getLogger().level == logging.DEBUG
        assert logging.getLogger().level == logging.WARNING
