"""
Campaign Utility Functions
Runs a configured protocol end to end and summarizes it as a CampaignReport.
"""

import logging
import math
import time
from typing import List, Optional, Tuple

from models import CampaignReport, ProtocolConfig, RoundRecord
from utils.adversary import eve_key_accuracy
from utils.protocols import RUNNERS, compare_key_subset
from utils.rng import COMPARISON_PURPOSE, ROUND_PURPOSE, RandomSource

logger = logging.getLogger(__name__)


def binomial_stderr(rate: float, trials: int) -> float:
    return math.sqrt(rate * (1 - rate) / trials) if trials else 0.0


def run_protocol(config: ProtocolConfig) -> List[RoundRecord]:
    """All rounds of a campaign, ordered by round index."""
    return RUNNERS[config.protocol](config, RandomSource(config.seed, 0, ROUND_PURPOSE))


def run_campaign(config: ProtocolConfig) -> Tuple[CampaignReport, List[RoundRecord]]:
    started = time.perf_counter()
    logger.info(
        f"Campaign started: {config.protocol.value}, {config.num_parties} parties, "
        f"{config.rounds} rounds, seed {config.seed}, eve {config.eve.kind.value}"
    )
    records = run_protocol(config)
    kept = sum(1 for record in records if record.kept)

    report = CampaignReport(config=config, rounds=len(records), kept=kept, key_bits=0)
    if config.comparison_fraction > 0 and kept:
        comparison = RandomSource(config.seed, 0, COMPARISON_PURPOSE)
        report.tested, report.mismatches, report.alarm = compare_key_subset(
            records, config.comparison_fraction, comparison
        )
        report.mismatch_rate = report.mismatches / report.tested
        report.mismatch_stderr = binomial_stderr(report.mismatch_rate, report.tested)

    report.key_bits = sum(len(record.key) for record in records if record.kept and not record.consumed and record.key)

    accuracy: Optional[float] = None
    if any(record.eve_inferred is not None for record in records):
        accuracy = eve_key_accuracy(records)
        attacked = sum(1 for record in records if record.eve_active)
        report.eve_accuracy = accuracy
        report.eve_accuracy_stderr = binomial_stderr(accuracy, attacked)

    report.elapsed_seconds = time.perf_counter() - started
    logger.info(
        f"Campaign finished: kept {kept}/{report.rounds}, tested {report.tested}, "
        f"mismatches {report.mismatches}, alarm {report.alarm} in {report.elapsed_seconds:.2f}s"
    )
    if report.alarm:
        logger.warning(f"Eavesdropper alarm: {report.mismatches} of {report.tested} compared rounds disagree")
    return report, records
