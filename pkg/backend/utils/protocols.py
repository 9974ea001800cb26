"""
Protocol Utility Functions
Round executors for the entanglement-swapping protocols and the three
baselines they are compared against, plus key-subset comparison.

Every round draws from its own stream ``randomness.stream(round_index)``, so a
campaign is reproducible whatever the number of worker threads.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from models import EveState, EveStrategy, Protocol, ProtocolConfig, RoundRecord
from utils.adversary import on_announcement, on_outbound_transit, on_return_transit
from utils.errors import InvalidArgumentError, ProtocolViolationError
from utils.inference import (
    InferenceTable,
    ProtocolLayout,
    Transit,
    infer_first_bit,
    infer_second_bit,
    infer_two_party,
    inference_table,
    multiparty_layout,
    two_party_layout,
)
from utils.pauli_oracle import xor_labels
from utils.quantum_core import (
    MeasurementBasis,
    PauliAxis,
    PureState,
    factored_outcomes,
    pauli_ket,
    prepare_ghz,
    prepare_ghz_x,
    sign_to_bit,
)
from utils.registry import QubitRegistry
from utils.rng import RandomSource

logger = logging.getLogger(__name__)

POOLED = "pooled"
JOINT = "Bob+Carol"

# Alice keeps qubit 1, receiving parties get A, B, ... in party order
GHZ_QUBITS = ("1", "A", "B", "C", "D")


def _run_rounds(config: ProtocolConfig, play: Callable[[int], RoundRecord]) -> List[RoundRecord]:
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(play, range(config.rounds)))
    return [play(index) for index in range(config.rounds)]


def _send(strategy: EveStrategy, registry: QubitRegistry, transit: Transit, eve: EveState) -> str:
    registry.begin_transit(transit.qubit)
    delivered = on_outbound_transit(strategy, registry, transit, eve)
    registry.deliver(delivered, transit.recipient)
    return delivered


# ---------------------------------------------------------------------------
# Entanglement-swapping protocols
# ---------------------------------------------------------------------------

def _play_swapping_round(
    layout: ProtocolLayout, strategy: EveStrategy, table: InferenceTable, randomness: RandomSource
) -> Tuple[Dict[str, str], str, EveState]:
    """One round of a layout: returns (secret results, public result, Eve's bookkeeping)."""
    registry = layout.prepare()
    eve = EveState(routes=layout.routes)
    arrived: Dict[str, str] = {}

    for transit in layout.outbound:
        arrived[transit.qubit] = _send(strategy, registry, transit, eve)

    secrets = {}
    for party, names in layout.secret:
        secrets[party] = registry.measure_bell([arrived.get(name, name) for name in names], randomness)

    for transit in layout.returns:
        registry.begin_transit(transit.qubit)
        delivered = on_return_transit(strategy, registry, transit, eve, randomness)
        registry.deliver(delivered, transit.recipient)
        arrived[transit.qubit] = delivered

    public_names = [arrived.get(name, name) for name in layout.public]
    public = registry.measure(layout.public_basis, public_names, randomness)
    on_announcement(strategy, registry, public, eve, layout, table, randomness)
    return secrets, public, eve


def run_two_party_es(config: ProtocolConfig, randomness: RandomSource) -> List[RoundRecord]:
    if config.num_parties != 2:
        raise InvalidArgumentError("the two-party protocol needs exactly two parties")
    layout = two_party_layout(config.initial_labels)
    table = inference_table(Protocol.TWO_PARTY_ES, 2, config.initial_labels)

    def play(index: int) -> RoundRecord:
        secrets, public, eve = _play_swapping_round(layout, config.eve, table, randomness.stream(index))
        try:
            inferred = infer_two_party(public, secrets["Bob"], table)
        except ProtocolViolationError:
            inferred = None
        inferences = {"Bob": inferred}
        expected = {"Bob": secrets["Alice"]}
        return RoundRecord(
            round_index=index,
            protocol=Protocol.TWO_PARTY_ES,
            secret_results=secrets,
            public_result=public,
            inferences=inferences,
            expected=expected,
            key=secrets["Alice"],
            kept=True,
            eve_active=config.eve.is_active,
            eve_inferred=eve.inferred_key,
            eve_view=eve.to_dict() if config.eve.is_active else None,
            detected_mismatch=RoundRecord.mismatch(inferences, expected),
        )

    return _run_rounds(config, play)


def run_multiparty_es(config: ProtocolConfig, randomness: RandomSource) -> List[RoundRecord]:
    layout = multiparty_layout(config.num_parties, config.initial_labels)
    table = inference_table(Protocol.MULTIPARTY_ES, config.num_parties, config.initial_labels)
    receivers = layout.parties[1:]

    def play(index: int) -> RoundRecord:
        secrets, public, eve = _play_swapping_round(layout, config.eve, table, randomness.stream(index))
        alice = secrets["Alice"]
        inferences: Dict[str, Optional[str]] = {}
        for party in receivers:
            try:
                inferences[party] = infer_first_bit(party, public, secrets[party], table)
            except ProtocolViolationError:
                inferences[party] = None
        try:
            inferences[POOLED] = infer_second_bit({p: secrets[p] for p in receivers}, public, table)
        except ProtocolViolationError:
            inferences[POOLED] = None
        expected = {party: alice[0] for party in receivers}
        expected[POOLED] = alice[1]
        return RoundRecord(
            round_index=index,
            protocol=Protocol.MULTIPARTY_ES,
            secret_results=secrets,
            public_result=public,
            inferences=inferences,
            expected=expected,
            key=alice,
            kept=True,
            eve_active=config.eve.is_active,
            eve_inferred=eve.inferred_key,
            eve_view=eve.to_dict() if config.eve.is_active else None,
            detected_mismatch=RoundRecord.mismatch(inferences, expected),
        )

    return _run_rounds(config, play)


# ---------------------------------------------------------------------------
# Baselines
# ---------------------------------------------------------------------------

def run_multiparty_ghz(config: ProtocolConfig, randomness: RandomSource) -> List[RoundRecord]:
    """Alice prepares the z- or x-type GHZ state; kept when every axis matches the preparation."""
    parties = config.parties
    names = GHZ_QUBITS[: config.num_parties]
    axes = (PauliAxis.Z, PauliAxis.X)

    def play(index: int) -> RoundRecord:
        rs = randomness.stream(index)
        prepared = rs.pick(axes)
        registry = QubitRegistry()
        state = prepare_ghz("0" * len(names), names) if prepared is PauliAxis.Z else prepare_ghz_x(names)
        registry.add(state, "Alice")
        eve = EveState()
        held = {"Alice": names[0]}
        for party, qubit in zip(parties[1:], names[1:]):
            held[party] = _send(config.eve, registry, Transit(qubit, "Alice", party), eve)

        bases, bits = {}, {}
        for party in parties:
            axis = prepared if party == "Alice" or config.ghz_variant_announce else rs.pick(axes)
            bases[party] = axis.value
            bits[party] = sign_to_bit(registry.measure_pauli(held[party], axis, rs))

        kept = all(axis == prepared.value for axis in bases.values())
        key = bits["Alice"] if kept else None
        inferences = {party: bits[party] for party in parties[1:]} if kept else {}
        expected = {party: key for party in parties[1:]} if kept else {}
        return RoundRecord(
            round_index=index,
            protocol=Protocol.MULTIPARTY_GHZ,
            secret_results=bits,
            public_result=prepared.value if config.ghz_variant_announce else None,
            inferences=inferences,
            expected=expected,
            key=key,
            kept=kept,
            eve_active=config.eve.is_active,
            bases=bases,
            detected_mismatch=kept and RoundRecord.mismatch(inferences, expected),
        )

    return _run_rounds(config, play)


def run_hbb99(config: ProtocolConfig, randomness: RandomSource) -> List[RoundRecord]:
    """
    GHZ secret splitting with sigma-x / sigma-y measurements.

    Every party measures sigma-x or sigma-y at random and announces only the
    axis. Rounds with an even number of sigma-y are kept; then Alice's bit is
    Bob's XOR Carol's, flipped when two of the three axes are sigma-y.
    """
    if config.num_parties != 3:
        raise InvalidArgumentError("hbb99 is a three-party protocol")
    axes = (PauliAxis.X, PauliAxis.Y)

    def play(index: int) -> RoundRecord:
        rs = randomness.stream(index)
        registry = QubitRegistry()
        registry.add(prepare_ghz("000", GHZ_QUBITS[:3]), "Alice")
        eve = EveState()
        held = {
            "Bob": _send(config.eve, registry, Transit("A", "Alice", "Bob"), eve),
            "Carol": _send(config.eve, registry, Transit("B", "Alice", "Carol"), eve),
            "Alice": "1",
        }
        bases, bits = {}, {}
        for party in ("Bob", "Carol", "Alice"):
            axis = rs.pick(axes)
            bases[party] = axis.value
            bits[party] = sign_to_bit(registry.measure_pauli(held[party], axis, rs))

        y_count = sum(1 for axis in bases.values() if axis == PauliAxis.Y.value)
        kept = y_count % 2 == 0
        key = bits["Alice"] if kept else None
        inferences, expected = {}, {}
        if kept:
            inferences[JOINT] = xor_labels(bits["Bob"], bits["Carol"], "1" if y_count == 2 else "0")
            expected[JOINT] = key
        return RoundRecord(
            round_index=index,
            protocol=Protocol.HBB99,
            secret_results=bits,
            inferences=inferences,
            expected=expected,
            key=key,
            kept=kept,
            eve_active=config.eve.is_active,
            bases=bases,
            detected_mismatch=kept and RoundRecord.mismatch(inferences, expected),
        )

    return _run_rounds(config, play)


class KkiDeclaration(str, Enum):
    TEST_OUTCOMES = "test_outcomes"
    BOB_OUTCOMES = "bob_outcomes"
    CAROL_CHOICES_AND_OUTCOMES = "carol_choices_and_outcomes"
    BOB_CHOICES = "bob_choices"
    SET_REVEAL = "set_reveal"


class KkiDeclarationLog:
    """Classical declarations of one round; any step out of order is rejected."""

    ORDER = tuple(KkiDeclaration)

    def __init__(self):
        self.entries: List[KkiDeclaration] = []

    def declare(self, step) -> None:
        step = KkiDeclaration(step)
        expected = self.ORDER[len(self.entries)] if len(self.entries) < len(self.ORDER) else None
        if step is not expected:
            wanted = expected.value if expected is not None else "nothing further"
            raise ProtocolViolationError(f"declaration {step.value!r} out of order; expected {wanted}")
        self.entries.append(step)

    @property
    def complete(self) -> bool:
        return len(self.entries) == len(self.ORDER)

    def to_list(self) -> List[str]:
        return [entry.value for entry in self.entries]


# The first set is kept when Bob and Carol used the same axis, the second when they differ
KKI_SETS: Tuple[Tuple[str, str], Tuple[str, str]] = (("psi+", "phi-"), ("Psi+", "Phi-"))
KKI_STATES = KKI_SETS[0] + KKI_SETS[1]


def kki_state(name: str, names: Sequence[str] = ("A", "B")) -> PureState:
    # psi+ is (|01> + |10>)/sqrt(2): opposite under sigma-z, equal under sigma-x, so it stays distinguishable from phi-
    zero, one = pauli_ket(PauliAxis.Z, 1), pauli_ket(PauliAxis.Z, -1)
    plus, minus = pauli_ket(PauliAxis.X, 1), pauli_ket(PauliAxis.X, -1)
    vectors = {
        "psi+": np.kron(plus, plus) - np.kron(minus, minus),
        "phi-": np.kron(zero, zero) - np.kron(one, one),
        "Psi+": np.kron(zero, plus) + np.kron(one, minus),
        "Phi-": np.kron(zero, minus) - np.kron(one, plus),
    }
    if name not in vectors:
        raise InvalidArgumentError(f"unknown KKI state {name!r}; expected one of {', '.join(KKI_STATES)}")
    return PureState.from_vector(vectors[name], names, normalize=True)


@lru_cache(maxsize=None)
def kki_parity(name: str, bob_axis: PauliAxis, carol_axis: PauliAxis) -> Optional[int]:
    """Parity of Bob's and Carol's bits when it is fixed by the state, else None."""
    parities = set()
    for bob in factored_outcomes(kki_state(name), MeasurementBasis.PAULI, ["A"], bob_axis):
        for carol in factored_outcomes(bob.remainder, MeasurementBasis.PAULI, ["B"], carol_axis):
            parities.add(int(sign_to_bit(bob.label)) ^ int(sign_to_bit(carol.label)))
    return parities.pop() if len(parities) == 1 else None


def run_kki99(config: ProtocolConfig, randomness: RandomSource) -> List[RoundRecord]:
    """Two-qubit secret sharing; Alice reveals the state set only after the declarations."""
    if config.num_parties != 3:
        raise InvalidArgumentError("kki99 is a three-party protocol")
    axes = (PauliAxis.Z, PauliAxis.X)

    def play(index: int) -> RoundRecord:
        rs = randomness.stream(index)
        prepared = rs.pick(KKI_STATES)
        set_index = 0 if prepared in KKI_SETS[0] else 1
        registry = QubitRegistry()
        registry.add(kki_state(prepared), "Alice")
        eve = EveState()
        held = {
            "Bob": _send(config.eve, registry, Transit("A", "Alice", "Bob"), eve),
            "Carol": _send(config.eve, registry, Transit("B", "Alice", "Carol"), eve),
        }
        bases, bits = {}, {}
        for party in ("Bob", "Carol"):
            axis = rs.pick(axes)
            bases[party] = axis.value
            bits[party] = sign_to_bit(registry.measure_pauli(held[party], axis, rs))

        log = KkiDeclarationLog()
        for step in KkiDeclarationLog.ORDER:
            log.declare(step)

        same_axes = bases["Bob"] == bases["Carol"]
        kept = same_axes == (set_index == 0)
        key = str(KKI_SETS[set_index].index(prepared)) if kept else None
        inferences, expected = {}, {}
        if kept:
            parity = int(bits["Bob"]) ^ int(bits["Carol"])
            bob_axis, carol_axis = PauliAxis(bases["Bob"]), PauliAxis(bases["Carol"])
            matches = [
                str(position)
                for position, candidate in enumerate(KKI_SETS[set_index])
                if kki_parity(candidate, bob_axis, carol_axis) == parity
            ]
            inferences[JOINT] = matches[0] if len(matches) == 1 else None
            expected[JOINT] = key
        return RoundRecord(
            round_index=index,
            protocol=Protocol.KKI99,
            secret_results={"Alice": prepared, **bits},
            public_result=str(set_index + 1),
            inferences=inferences,
            expected=expected,
            key=key,
            kept=kept,
            eve_active=config.eve.is_active,
            bases=bases,
            declarations=log.to_list(),
            detected_mismatch=kept and RoundRecord.mismatch(inferences, expected),
        )

    return _run_rounds(config, play)


# ---------------------------------------------------------------------------
# Key comparison
# ---------------------------------------------------------------------------

def compare_key_subset(
    records: Sequence[RoundRecord], fraction: float, randomness: RandomSource
) -> Tuple[int, int, bool]:
    """Sacrifice a random subset of kept rounds; returns (tested, mismatches, alarm)."""
    if not 0 < fraction <= 1:
        raise InvalidArgumentError(f"compare fraction must lie in (0, 1], got {fraction}")
    kept = [record for record in records if record.kept]
    if not kept:
        raise InvalidArgumentError("no kept rounds to compare")
    # 0.1 * 30 is 3.0000000000000004
    count = max(1, math.ceil(round(fraction * len(kept), 9)))
    mismatches = 0
    for position in randomness.sample(len(kept), count):
        kept[position].consumed = True
        mismatches += kept[position].detected_mismatch
    return count, mismatches, mismatches > 0


RUNNERS: Dict[Protocol, Callable[[ProtocolConfig, RandomSource], List[RoundRecord]]] = {
    Protocol.TWO_PARTY_ES: run_two_party_es,
    Protocol.MULTIPARTY_ES: run_multiparty_es,
    Protocol.MULTIPARTY_GHZ: run_multiparty_ghz,
    Protocol.HBB99: run_hbb99,
    Protocol.KKI99: run_kki99,
}
