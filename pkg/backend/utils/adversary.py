"""
Adversary Utility Functions
Intercept-substitute eavesdropping hooked onto quantum-channel transits.

Eve captures an outbound qubit and delivers half of her own Bell pair in its
place. When the receiving party later sends a qubit back, Eve Bell-measures it
against the ancilla half she kept, which tells her that party's secret result,
and forwards a qubit according to the return policy.
"""

import logging
from typing import Iterable, Optional, Tuple

from models import EveKind, EveState, EveStrategy, ReturnPolicy, RoundRecord
from utils.errors import InvalidArgumentError, ProtocolViolationError
from utils.inference import PUBLIC, InferenceTable, ProtocolLayout, Transit
from utils.pauli_oracle import xor_labels
from utils.quantum_core import BELL_LABELS, prepare_bell
from utils.registry import CHANNEL, EVE, QubitRegistry
from utils.rng import RandomSource

logger = logging.getLogger(__name__)

# The two-party attack uses the ancilla pair (7, 8): 7 stays with Eve, 8 goes to Bob
TWO_PARTY_ANCILLAS = ("7", "8")


def ancilla_names(strategy: EveStrategy, qubit: str) -> Tuple[str, str]:
    """(retained, delivered) names of the ancilla pair substituted for ``qubit``."""
    if strategy.kind is EveKind.TWO_PARTY_INTERCEPT:
        return TWO_PARTY_ANCILLAS
    return f"{qubit}_eve", f"{qubit}_sub"


def _require_transit(registry: QubitRegistry, qubit: str) -> None:
    if not registry.in_transit(qubit):
        raise InvalidArgumentError(f"qubit {qubit!r} is not on the quantum channel")


def on_outbound_transit(strategy: EveStrategy, registry: QubitRegistry, transit: Transit, eve: EveState) -> str:
    """Hook for a qubit leaving Alice; returns the name of the qubit that arrives."""
    _require_transit(registry, transit.qubit)
    if not strategy.attacks(transit.recipient):
        return transit.qubit

    retained, delivered = ancilla_names(strategy, transit.qubit)
    registry.transfer(transit.qubit, EVE)
    registry.add(prepare_bell(strategy.ancilla_label, (retained, delivered)), [EVE, CHANNEL])
    eve.held_qubits.update((transit.qubit, retained))
    eve.retained[transit.qubit] = retained
    logger.debug(f"Eve captured {transit.qubit} bound for {transit.recipient}, delivered {delivered}")
    return delivered


def on_return_transit(
    strategy: EveStrategy,
    registry: QubitRegistry,
    transit: Transit,
    eve: EveState,
    randomness: RandomSource,
) -> str:
    """Hook for a qubit travelling back to Alice; returns the name of the qubit that arrives."""
    qubit = transit.qubit
    _require_transit(registry, qubit)
    outbound = eve.routes.get(qubit)
    retained = eve.retained.get(outbound) if outbound is not None else None
    if not strategy.is_active or retained is None:
        return qubit

    policy = strategy.return_policy
    if policy is ReturnPolicy.RANDOM_BELL_GUESS and strategy.kind is not EveKind.TWO_PARTY_INTERCEPT:
        raise InvalidArgumentError("random_bell_guess is only defined for the two-party attack")

    registry.transfer(qubit, EVE)
    eve.held_qubits.add(qubit)
    label = registry.measure_bell([qubit, retained], randomness)
    eve.return_labels[qubit] = label
    if strategy.kind is EveKind.TWO_PARTY_INTERCEPT:
        eve.secret_inference = label

    if policy is ReturnPolicy.FORWARD_CAPTURED:
        forwarded = qubit
    elif policy is ReturnPolicy.FORWARD_ANCILLA:
        forwarded = retained
    else:
        # hand Alice the captured outbound qubit in a uniformly random Bell state
        eve.guess = randomness.pick(BELL_LABELS)
        registry.apply_pauli(outbound, eve.guess)
        forwarded = outbound

    eve.held_qubits.discard(forwarded)
    eve.forwarded[qubit] = forwarded
    registry.transfer(forwarded, CHANNEL)
    logger.debug(f"Eve measured {qubit} against {retained} -> {label}, forwarding {forwarded}")
    return forwarded


def on_announcement(
    strategy: EveStrategy,
    registry: QubitRegistry,
    public: str,
    eve: EveState,
    layout: ProtocolLayout,
    table: InferenceTable,
    randomness: RandomSource,
) -> Optional[str]:
    """Eve's reconstruction of AS after Alice broadcasts the public result."""
    eve.announced_ap_seen = public
    if not strategy.is_active or not eve.return_labels:
        return None

    if strategy.kind is EveKind.TWO_PARTY_INTERCEPT:
        inferred = _two_party_reconstruction(strategy, registry, public, eve, layout, randomness)
    else:
        inferred = _multiparty_reconstruction(strategy, public, eve, layout, table)
    eve.inferred_key = inferred
    return inferred


def _two_party_reconstruction(strategy, registry, public, eve, layout, randomness) -> Optional[str]:
    l12, l35, _ = layout.initial_labels
    return_qubit = layout.returns[0].qubit
    if return_qubit not in eve.return_labels:
        return None
    if strategy.return_policy is ReturnPolicy.RANDOM_BELL_GUESS:
        return xor_labels(public, eve.guess, l12, l35)

    captured = eve.routes[return_qubit]
    kept = return_qubit if eve.forwarded[return_qubit] != return_qubit else eve.retained[captured]
    # swaps Alice's leftover partner of the captured qubit onto the forwarded one
    closing = registry.measure_bell([captured, kept], randomness)
    eve.held_qubits.difference_update((captured, kept))
    return xor_labels(public, closing, eve.secret_inference, l12, l35)


def _multiparty_reconstruction(strategy, public, eve, layout, table) -> Optional[str]:
    recovered = {}
    for transit in layout.returns:
        label = eve.return_labels.get(transit.qubit)
        if label is None:
            return None
        recovered[transit.sender] = xor_labels(label, layout.factor_label(transit.qubit), strategy.ancilla_label)
    try:
        return table.unique_value("Alice", {PUBLIC: public, **recovered})
    except ProtocolViolationError:
        return None


def eve_key_accuracy(records: Iterable[RoundRecord]) -> float:
    """Fraction of attacked rounds in which Eve's reconstruction equals Alice's key."""
    attacked = [record for record in records if record.eve_active]
    if not attacked or all(record.eve_inferred is None for record in attacked):
        raise InvalidArgumentError("no eavesdropper inference was recorded")
    hits = sum(1 for record in attacked if record.eve_inferred is not None and record.eve_inferred == record.key)
    return hits / len(attacked)
