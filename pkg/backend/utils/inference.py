"""
Inference Utility Functions
Protocol layouts for the entanglement-swapping protocols, exhaustive
correspondence tables built from them, and the lookups parties use to infer
Alice's secret result from the public announcement and their own result.
"""

import logging
import string
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from models import PARTY_NAMES, Protocol
from utils.errors import InsufficientSharesError, InvalidArgumentError, ProtocolViolationError
from utils.quantum_core import (
    MeasurementBasis,
    prepare_bell,
    prepare_ghz,
    validate_bell_label,
    validate_ghz_label,
)
from utils.registry import QubitRegistry

logger = logging.getLogger(__name__)

PUBLIC = "public"
PROBABILITY = "probability"


@dataclass(frozen=True)
class PreparedFactor:
    basis: MeasurementBasis
    label: str
    names: Tuple[str, ...]
    owner: str


@dataclass(frozen=True)
class Transit:
    qubit: str
    sender: str
    recipient: str


@dataclass(frozen=True)
class ProtocolLayout:
    """Public description of one entanglement-swapping protocol instance."""

    protocol: Protocol
    parties: Tuple[str, ...]
    factors: Tuple[PreparedFactor, ...]
    outbound: Tuple[Transit, ...]
    secret: Tuple[Tuple[str, Tuple[str, str]], ...]
    returns: Tuple[Transit, ...]
    public: Tuple[str, ...]
    public_basis: MeasurementBasis
    return_routes: Tuple[Tuple[str, str], ...]  # (return qubit, outbound qubit of the same party)

    @property
    def initial_labels(self) -> Tuple[str, ...]:
        return tuple(factor.label for factor in self.factors)

    @property
    def routes(self) -> Dict[str, str]:
        return dict(self.return_routes)

    def factor_label(self, qubit: str) -> str:
        """Initial label of the factor a qubit was prepared in."""
        for factor in self.factors:
            if qubit in factor.names:
                return factor.label
        raise InvalidArgumentError(f"qubit {qubit!r} is not part of this layout")

    def prepare(self) -> QubitRegistry:
        registry = QubitRegistry()
        for factor in self.factors:
            if factor.basis is MeasurementBasis.BELL:
                state = prepare_bell(factor.label, factor.names)
            else:
                state = prepare_ghz(factor.label, factor.names)
            registry.add(state, factor.owner)
        return registry


def _resolve_labels(initial_labels: Optional[Sequence[str]], widths: Sequence[int]) -> List[str]:
    if initial_labels is None:
        return ["0" * width for width in widths]
    labels = [str(label) for label in initial_labels]
    if len(labels) != len(widths):
        raise InvalidArgumentError(f"expected {len(widths)} initial labels, got {len(labels)}")
    resolved = []
    for label, width in zip(labels, widths):
        resolved.append(validate_bell_label(label) if width == 2 else validate_ghz_label(label, width))
    return resolved


def two_party_layout(initial_labels: Optional[Sequence[str]] = None) -> ProtocolLayout:
    """Alice holds pairs (1,2) and (3,5), Bob holds (4,6); 2 goes out, 6 comes back."""
    l12, l35, l46 = _resolve_labels(initial_labels, (2, 2, 2))
    return ProtocolLayout(
        protocol=Protocol.TWO_PARTY_ES,
        parties=("Alice", "Bob"),
        factors=(
            PreparedFactor(MeasurementBasis.BELL, l12, ("1", "2"), "Alice"),
            PreparedFactor(MeasurementBasis.BELL, l35, ("3", "5"), "Alice"),
            PreparedFactor(MeasurementBasis.BELL, l46, ("4", "6"), "Bob"),
        ),
        outbound=(Transit("2", "Alice", "Bob"),),
        secret=(("Alice", ("1", "3")), ("Bob", ("2", "4"))),
        returns=(Transit("6", "Bob", "Alice"),),
        public=("5", "6"),
        public_basis=MeasurementBasis.BELL,
        return_routes=(("6", "2"),),
    )


def multiparty_layout(num_parties: int, initial_labels: Optional[Sequence[str]] = None) -> ProtocolLayout:
    """
    N-party layout generalizing the three-party naming.

    Alice holds the Bell pair (1,2) and the GHZ qubits (3, A, B, ...); letter A
    goes to Bob, B to Carol and so on. The next N-1 letters are the return
    qubits, handed out in reverse party order, and each receiving party's
    numbered qubit is assigned from 4 upward in reverse party order. For N=3:
    Bob holds (5,D), Carol holds (4,C), and Alice's public GHZ measurement
    acts on (1, C, D).
    """
    if not 2 <= num_parties <= len(PARTY_NAMES):
        raise InvalidArgumentError(f"multiparty layouts support 2..{len(PARTY_NAMES)} parties")
    others = PARTY_NAMES[1:num_parties]
    outbound_letters = string.ascii_uppercase[: num_parties - 1]
    return_letters = string.ascii_uppercase[num_parties - 1 : 2 * num_parties - 2]
    returned = dict(zip(reversed(others), return_letters))
    numbered = {party: str(4 + index) for index, party in enumerate(reversed(others))}
    outbound = dict(zip(others, outbound_letters))

    widths = [2, num_parties] + [2] * len(others)
    labels = _resolve_labels(initial_labels, widths)
    factors = [
        PreparedFactor(MeasurementBasis.BELL, labels[0], ("1", "2"), "Alice"),
        PreparedFactor(MeasurementBasis.GHZ, labels[1], ("3",) + tuple(outbound_letters), "Alice"),
    ]
    for party, label in zip(others, labels[2:]):
        factors.append(PreparedFactor(MeasurementBasis.BELL, label, (numbered[party], returned[party]), party))

    return ProtocolLayout(
        protocol=Protocol.MULTIPARTY_ES,
        parties=PARTY_NAMES[:num_parties],
        factors=tuple(factors),
        outbound=tuple(Transit(outbound[party], "Alice", party) for party in others),
        secret=(("Alice", ("2", "3")),) + tuple((party, (numbered[party], outbound[party])) for party in others),
        returns=tuple(Transit(returned[party], party, "Alice") for party in others),
        public=("1",) + tuple(sorted(return_letters)),
        public_basis=MeasurementBasis.GHZ,
        return_routes=tuple((returned[party], outbound[party]) for party in others),
    )


def layout_for(protocol: Protocol, num_parties: int, initial_labels: Optional[Sequence[str]] = None) -> ProtocolLayout:
    protocol = Protocol(protocol)
    if protocol is Protocol.TWO_PARTY_ES:
        if num_parties != 2:
            raise InvalidArgumentError("two_party_es has exactly two parties")
        return two_party_layout(initial_labels)
    if protocol is Protocol.MULTIPARTY_ES:
        return multiparty_layout(num_parties, initial_labels)
    raise InvalidArgumentError(f"{protocol.value} has no entanglement-swapping layout")


class InferenceTable:
    """Every nonzero-probability joint outcome of a layout, with cached lookups."""

    def __init__(self, frame: pd.DataFrame, parties: Sequence[str]):
        self.frame = frame.reset_index(drop=True)
        self.parties = tuple(parties)
        self._groups: Dict[Tuple[str, ...], Dict[Tuple[str, ...], List[int]]] = {}
        self._lock = threading.Lock()

    @property
    def columns(self) -> Tuple[str, ...]:
        return (PUBLIC,) + self.parties

    def __len__(self) -> int:
        return len(self.frame)

    def rows(self) -> List[Tuple[str, ...]]:
        return [tuple(row) for row in self.frame[list(self.columns)].itertuples(index=False, name=None)]

    def filter(self, coordinates: Mapping[str, str]) -> "InferenceTable":
        mask = pd.Series(True, index=self.frame.index)
        for column, value in coordinates.items():
            self._check_column(column)
            mask &= self.frame[column] == str(value)
        return InferenceTable(self.frame[mask], self.parties)

    def _check_column(self, column: str) -> None:
        if column not in self.columns:
            raise InvalidArgumentError(f"unknown table column {column!r}; expected one of {', '.join(self.columns)}")

    def _group_index(self, columns: Tuple[str, ...]) -> Dict[Tuple[str, ...], List[int]]:
        with self._lock:
            if columns not in self._groups:
                grouped = self.frame.groupby(list(columns), sort=False).indices
                # pandas may key single-column groups by scalar
                self._groups[columns] = {
                    (key if isinstance(key, tuple) else (key,)): list(index) for key, index in grouped.items()
                }
            return self._groups[columns]

    def consistent_values(self, column: str, coordinates: Mapping[str, str]) -> Tuple[str, ...]:
        """Sorted distinct values of ``column`` over the rows matching ``coordinates``."""
        self._check_column(column)
        for key in coordinates:
            self._check_column(key)
        columns = tuple(sorted(coordinates))
        positions = self._group_index(columns).get(tuple(str(coordinates[c]) for c in columns), [])
        return tuple(sorted(set(self.frame[column].iloc[positions])))

    def unique_value(self, column: str, coordinates: Mapping[str, str]) -> str:
        values = self.consistent_values(column, coordinates)
        if len(values) != 1:
            described = ", ".join(f"{key}={value}" for key, value in sorted(coordinates.items()))
            reason = "no row" if not values else f"{len(values)} values"
            raise ProtocolViolationError(f"{reason} for {column} given {described}")
        return values[0]

    def to_records(self) -> List[Dict]:
        return self.frame.to_dict(orient="records")


def build_inference_table(layout: ProtocolLayout) -> InferenceTable:
    """Chain every secret measurement and the public one over all branches."""
    leaves = [({}, 1.0, layout.prepare())]
    for party, names in layout.secret:
        expanded = []
        for outcomes, probability, registry in leaves:
            for label, branch_probability, branch in registry.branches(MeasurementBasis.BELL, names):
                expanded.append(({**outcomes, party: label}, probability * branch_probability, branch))
        leaves = expanded

    rows = []
    for outcomes, probability, registry in leaves:
        for label, branch_probability, _ in registry.branches(layout.public_basis, layout.public):
            rows.append({PUBLIC: label, **outcomes, PROBABILITY: probability * branch_probability})

    columns = [PUBLIC] + list(layout.parties)
    frame = pd.DataFrame(rows, columns=columns + [PROBABILITY])
    frame = frame.sort_values(columns, kind="mergesort").reset_index(drop=True)
    logger.info(f"Built {layout.protocol.value} inference table: {len(frame)} rows for {len(layout.parties)} parties")
    return InferenceTable(frame, layout.parties)


@lru_cache(maxsize=32)
def _cached_table(protocol: Protocol, num_parties: int, initial_labels: Optional[Tuple[str, ...]]) -> InferenceTable:
    return build_inference_table(layout_for(protocol, num_parties, initial_labels))


def inference_table(
    protocol: Protocol, num_parties: int, initial_labels: Optional[Sequence[str]] = None
) -> InferenceTable:
    """Shared, cached table for a protocol configuration."""
    labels = tuple(initial_labels) if initial_labels is not None else None
    return _cached_table(Protocol(protocol), int(num_parties), labels)


def infer_two_party(ap: str, bs: str, table: Optional[InferenceTable] = None) -> str:
    """Bob's reading of AS from the public result and his own secret result."""
    table = table if table is not None else inference_table(Protocol.TWO_PARTY_ES, 2)
    return table.unique_value("Alice", {PUBLIC: ap, "Bob": bs})


def infer_first_bit(party: str, ap: str, own_secret: str, table: InferenceTable) -> str:
    """First bit of AS as one party can infer it alone."""
    if party not in table.parties[1:]:
        raise InvalidArgumentError(f"{party!r} is not a receiving party of this table")
    values = table.consistent_values("Alice", {PUBLIC: ap, party: own_secret})
    bits = {value[0] for value in values}
    if len(bits) != 1:
        raise ProtocolViolationError(
            f"{party} cannot infer the first bit from public={ap}, own={own_secret} ({len(values)} candidates)"
        )
    return bits.pop()


def infer_second_bit(secrets: Mapping[str, str], ap: str, table: InferenceTable) -> str:
    """Second bit of AS; needs the secret result of every receiving party."""
    required = table.parties[1:]
    missing = [party for party in required if party not in secrets]
    if missing:
        raise InsufficientSharesError(f"second bit needs every share; missing {', '.join(missing)}")
    coordinates = {PUBLIC: ap, **{party: secrets[party] for party in required}}
    return table.unique_value("Alice", coordinates)[1]
