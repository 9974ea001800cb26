"""
Verification Suites
Self-checks run by ``cli.py verify`` and ``GET /api/verify``: basis
orthonormality, golden correspondence tables, label-algebra equivalence and
secret-sharing uniformity.

Tables are rebuilt from the statevector engine on every run, never taken
from the shared cache.
"""

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from utils.errors import SimulationError
from utils.inference import build_inference_table, multiparty_layout, two_party_layout
from utils.pauli_oracle import enumerate_two_party_table, two_party_frame
from utils.quantum_core import BELL_LABELS, NORM_TOLERANCE, MeasurementBasis, basis_vectors

PROBABILITY_TOLERANCE = 1e-9

# (public, Alice, Bob)
GOLDEN_TABLE_I: Tuple[Tuple[str, str, str], ...] = (
    ("00", "00", "00"), ("00", "01", "01"), ("00", "10", "10"), ("00", "11", "11"),
    ("01", "00", "01"), ("01", "01", "00"), ("01", "10", "11"), ("01", "11", "10"),
    ("10", "00", "10"), ("10", "01", "11"), ("10", "10", "00"), ("10", "11", "01"),
    ("11", "00", "11"), ("11", "01", "10"), ("11", "10", "01"), ("11", "11", "00"),
)

# public: Alice Bob Carol, eight rows per public label
_TABLE_II_TEXT = """
000: 00 00 00 | 00 01 01 | 01 00 01 | 01 01 00 | 10 10 10 | 10 11 11 | 11 10 11 | 11 11 10
001: 00 00 01 | 00 01 00 | 01 00 00 | 01 01 01 | 10 10 11 | 10 11 10 | 11 10 10 | 11 11 11
010: 00 10 00 | 00 11 01 | 01 10 01 | 01 11 00 | 10 00 10 | 10 01 11 | 11 00 11 | 11 01 10
011: 00 10 01 | 00 11 00 | 01 10 00 | 01 11 01 | 10 00 11 | 10 01 10 | 11 00 10 | 11 01 11
100: 00 00 10 | 00 01 11 | 01 00 11 | 01 01 10 | 10 10 00 | 10 11 01 | 11 10 01 | 11 11 00
101: 00 00 11 | 00 01 10 | 01 00 10 | 01 01 11 | 10 10 01 | 10 11 00 | 11 10 00 | 11 11 01
110: 00 10 10 | 00 11 11 | 01 10 11 | 01 11 10 | 10 00 00 | 10 01 01 | 11 00 01 | 11 01 00
111: 00 10 11 | 00 11 10 | 01 10 10 | 01 11 11 | 10 00 01 | 10 01 00 | 11 00 00 | 11 01 01
"""

# public 0000; Alice: Bob Carol David
_TABLE_III_TEXT = """
00: 00 00 00 | 00 01 01 | 01 00 01 | 01 01 00
01: 00 00 01 | 00 01 00 | 01 00 00 | 01 01 01
10: 10 10 10 | 10 11 11 | 11 10 11 | 11 11 10
11: 10 10 11 | 10 11 10 | 11 10 10 | 11 11 11
"""


def _parse_table(text: str, prefix_first: bool) -> Tuple[Tuple[str, ...], ...]:
    rows = []
    for line in text.strip().splitlines():
        head, body = line.split(":")
        for chunk in body.split("|"):
            labels = tuple(chunk.split())
            rows.append((head.strip(),) + labels if prefix_first else ("0000", head.strip()) + labels)
    return tuple(rows)


GOLDEN_TABLE_II = _parse_table(_TABLE_II_TEXT, prefix_first=True)
GOLDEN_TABLE_III = _parse_table(_TABLE_III_TEXT, prefix_first=False)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def to_dict(self):
        return {'suite': self.name, 'passed': self.passed, 'detail': self.detail}

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _orthonormal(kets: np.ndarray) -> bool:
    gram = kets.conj() @ kets.T
    return bool(np.allclose(gram, np.eye(len(kets)), rtol=0, atol=NORM_TOLERANCE))


def check_bell_orthonormality() -> Tuple[bool, str]:
    _, kets = basis_vectors(MeasurementBasis.BELL, 2)
    return _orthonormal(kets), "4 Bell kets"


def check_ghz_orthonormality() -> Tuple[bool, str]:
    failed = [size for size in (2, 3, 4) if not _orthonormal(basis_vectors(MeasurementBasis.GHZ, size)[1])]
    return not failed, "sizes 2-4" if not failed else f"not orthonormal for sizes {failed}"


def _row_set_check(rows: List[Tuple[str, ...]], golden) -> Tuple[bool, str]:
    produced, expected = set(rows), set(golden)
    if len(rows) != len(golden) or produced != expected:
        missing, extra = len(expected - produced), len(produced - expected)
        return False, f"{len(rows)} rows, {missing} golden rows missing, {extra} unexpected"
    return True, f"{len(rows)} rows match"


def check_table_i() -> Tuple[bool, str]:
    table = build_inference_table(two_party_layout())
    return _row_set_check(table.rows(), GOLDEN_TABLE_I)


def check_oracle_equivalence() -> Tuple[bool, str]:
    """Label algebra against statevector enumeration over all 64 initial labelings."""
    disagreements = []
    branches = 0
    for labels in itertools.product(BELL_LABELS, repeat=3):
        predicted = set(enumerate_two_party_table(two_party_frame(*labels)))
        table = build_inference_table(two_party_layout(labels))
        enumerated = set(table.rows())
        branches += len(table)
        uniform = bool(np.allclose(table.frame["probability"], 1 / 16, rtol=0, atol=PROBABILITY_TOLERANCE))
        if predicted != enumerated or not uniform:
            disagreements.append("".join(labels))
    if disagreements:
        return False, f"{len(disagreements)} of 64 configurations disagree (first: {disagreements[0]})"
    return True, f"64 configurations, {branches} branches agree"


def _bit(label: str, position: int) -> int:
    """Bits are numbered left to right from 1."""
    return int(label[position - 1])


def check_table_ii() -> Tuple[bool, str]:
    table = build_inference_table(multiparty_layout(3))
    passed, detail = _row_set_check(table.rows(), GOLDEN_TABLE_II)
    if not passed:
        return passed, detail
    if not np.allclose(table.frame["probability"], 1 / 64, rtol=0, atol=PROBABILITY_TOLERANCE):
        return False, "row probabilities differ from 1/64"
    for public, alice, bob, carol in table.rows():
        if (
            _bit(alice, 1) != _bit(bob, 1) ^ _bit(public, 2)
            or _bit(alice, 1) != _bit(carol, 1) ^ _bit(public, 1)
            or _bit(alice, 2) != _bit(bob, 2) ^ _bit(carol, 2) ^ _bit(public, 3)
        ):
            return False, f"derived relations fail on row {public} {alice} {bob} {carol}"
    return True, "64 rows match, each 1/64, derived relations hold"


def check_table_iii() -> Tuple[bool, str]:
    table = build_inference_table(multiparty_layout(4)).filter({"public": "0000"})
    return _row_set_check(table.rows(), GOLDEN_TABLE_III)


def check_secret_sharing_uniformity() -> Tuple[bool, str]:
    """Given the public result and one share, Alice's second bit is 0 in exactly half the rows."""
    rows = build_inference_table(multiparty_layout(3)).rows()
    for position in (2, 3):
        totals, zeros = Counter(), Counter()
        for row in rows:
            key = (row[0], row[position])
            totals[key] += 1
            zeros[key] += row[1][1] == "0"
        skewed = [key for key in totals if 2 * zeros[key] != totals[key]]
        if skewed:
            return False, f"second bit not uniform for (public, share) = {skewed[0]}"
    return True, "second bit uniform for every (public, single share)"


SUITES: Dict[str, Callable[[], Tuple[bool, str]]] = {
    "bell_orthonormality": check_bell_orthonormality,
    "ghz_orthonormality": check_ghz_orthonormality,
    "table_I": check_table_i,
    "oracle_equivalence": check_oracle_equivalence,
    "table_II": check_table_ii,
    "table_III": check_table_iii,
    "secret_sharing_uniformity": check_secret_sharing_uniformity,
}


def run_verification() -> List[SuiteResult]:
    results = []
    for name, suite in SUITES.items():
        try:
            passed, detail = suite()
        except SimulationError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append(SuiteResult(name, passed, detail))
    return results
