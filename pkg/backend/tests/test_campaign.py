import pytest

from models import ProtocolConfig
from utils.campaign import binomial_stderr, run_campaign, run_protocol


def _config(**settings):
    return ProtocolConfig.from_settings({"rounds": 200, "seed": 5, **settings})


def test_clean_two_party_campaign():
    report, records = run_campaign(_config())
    assert report.rounds == len(records) == 200
    assert report.keep_rate == 1
    assert report.tested == 100
    assert report.mismatches == 0
    assert report.mismatch_rate == 0
    assert not report.alarm
    assert report.key_bits == 2 * (200 - report.tested)
    assert report.eve_accuracy is None


def test_no_comparison():
    report, _ = run_campaign(_config(compare_fraction=0))
    assert report.tested == 0
    assert report.mismatch_rate is None
    assert report.key_bits == 400


def test_attack_raises_alarm(caplog):
    report, _ = run_campaign(_config(eve="intercept", compare_fraction=1))
    assert report.alarm
    assert report.mismatch_rate == pytest.approx(0.75, abs=0.15)
    assert report.eve_accuracy == 1.0
    assert report.eve_accuracy_stderr == 0.0
    assert "Eavesdropper alarm" in caplog.text


def test_baseline_key_bits_count_kept_rounds_only():
    report, records = run_campaign(_config(protocol="hbb99", compare_fraction=0))
    assert report.key_bits == sum(record.kept for record in records)
    assert report.keep_rate == report.kept / report.rounds


def test_report_is_reproducible():
    first, _ = run_campaign(_config(protocol="multiparty_es"))
    second, _ = run_campaign(_config(protocol="multiparty_es", workers=3))
    one, two = first.to_dict(), second.to_dict()
    for data in (one, two):
        data.pop("elapsed_seconds")
        data["config"].pop("workers")
    assert one == two


def test_run_protocol_orders_rounds():
    records = run_protocol(_config(protocol="kki99", rounds=30, workers=4))
    assert [record.round_index for record in records] == list(range(30))


def test_binomial_stderr():
    assert binomial_stderr(0.5, 100) == pytest.approx(0.05)
    assert binomial_stderr(0.3, 0) == 0.0
