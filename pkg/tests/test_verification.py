"""Tests for the verification suites."""

import pytest

from src.config.config import Config
from src.utils.verification import (
    EQUIVALENCE_EBN0_DB,
    CheckResult,
    check_detector_equivalence,
    check_noiseless_round_trips,
    check_reference_constants,
    check_toy_example,
    run_all,
)


def _failures(results):
    return [f"{r.suite}/{r.name}: {r.detail}" for r in results if not r.passed]


def test_constants_pass():
    results = check_reference_constants()
    assert _failures(results) == []
    names = {r.name for r in results}
    assert "design criterion conv-qpsk" in names
    assert "spectral efficiency ofdm-16qam" in names


def test_equivalence_small():
    results = check_detector_equivalence(trials=50, trials_16qam=3, seed=9)
    assert len(results) == 4
    assert _failures(results) == []
    assert results[0].detail == "0/200 mismatches"


def test_default_trials_cover_ten_thousand_per_pair():
    assert Config.VERIFY_TRIALS * len(EQUIVALENCE_EBN0_DB) >= 10_000
    assert Config.VERIFY_TRIALS_16QAM * len(EQUIVALENCE_EBN0_DB) >= 10_000


def test_round_trips():
    results = check_noiseless_round_trips(groups=200, seed=4)
    assert len(results) == 8 + 6
    assert _failures(results) == []


def test_toy_checks():
    assert _failures(check_toy_example()) == []


@pytest.mark.slow
def test_run_all_with_default_trials():
    results = run_all()
    assert all(isinstance(r, CheckResult) for r in results)
    assert _failures(results) == []
