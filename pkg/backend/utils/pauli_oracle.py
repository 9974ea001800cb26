"""
Pauli Oracle
Label algebra for entanglement swapping over products of Bell pairs.

A Bell label b1b0 is the Pauli X^b1 Z^b0 that takes |00>+|11> to that state,
so swapping composes labels by XOR, up to global phase.
"""

import itertools
import operator
from dataclasses import dataclass, field
from functools import reduce
from types import MappingProxyType
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from utils.errors import InvalidArgumentError
from utils.quantum_core import BELL_LABELS, BellLabel, QubitName, validate_bell_label

TWO_PARTY_PAIRS: Tuple[Tuple[QubitName, QubitName], ...] = (("1", "2"), ("3", "5"), ("4", "6"))


def xor_labels(*labels: str) -> str:
    """Bitwise XOR of equal-width bit strings."""
    if not labels:
        raise InvalidArgumentError("xor_labels needs at least one label")
    width = len(labels[0])
    if any(len(label) != width for label in labels):
        raise InvalidArgumentError(f"labels of different widths: {', '.join(labels)}")
    value = reduce(operator.xor, (int(label, 2) for label in labels), 0)
    return format(value, f"0{width}b")


def swap_labels(p: BellLabel, q: BellLabel, r: BellLabel) -> BellLabel:
    """Label left on (1,4) when pairs (1,2)=p and (3,4)=q are swapped by a BSM on (2,3) giving r."""
    return xor_labels(validate_bell_label(p), validate_bell_label(q), validate_bell_label(r))


def name_sort_key(name: QubitName):
    """Numbered qubits first, numerically, then lettered ones."""
    return (0, int(name), "") if name.isdigit() else (1, 0, name)


def pair_key(a: QubitName, b: QubitName) -> FrozenSet[QubitName]:
    pair = frozenset((str(a), str(b)))
    if len(pair) != 2:
        raise InvalidArgumentError(f"a Bell pair needs two distinct qubits, got {a!r} twice")
    return pair


@dataclass(frozen=True, eq=False)
class LabelFrame:
    """A product of Bell states keyed by unordered qubit pairs."""

    pairs: Mapping[FrozenSet[QubitName], BellLabel] = field(default_factory=dict)

    def __post_init__(self):
        normalized: Dict[FrozenSet[QubitName], BellLabel] = {}
        seen = set()
        for key, label in dict(self.pairs).items():
            pair = pair_key(*key)
            overlap = seen & pair
            if overlap:
                raise InvalidArgumentError(f"qubit {sorted(overlap)[0]!r} appears in two pairs")
            seen |= pair
            normalized[pair] = validate_bell_label(label)
        object.__setattr__(self, "pairs", MappingProxyType(normalized))

    @classmethod
    def from_pairs(cls, pairs: Mapping[Tuple[QubitName, QubitName], BellLabel]) -> "LabelFrame":
        return cls({pair_key(*names): label for names, label in pairs.items()})

    def pair_containing(self, name: QubitName) -> Optional[FrozenSet[QubitName]]:
        for pair in self.pairs:
            if str(name) in pair:
                return pair
        return None

    def label_of(self, a: QubitName, b: QubitName) -> BellLabel:
        try:
            return self.pairs[pair_key(a, b)]
        except KeyError:
            raise InvalidArgumentError(f"({a}, {b}) is not a pair of this frame") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelFrame):
            return NotImplemented
        return dict(self.pairs) == dict(other.pairs)

    def __hash__(self) -> int:
        return hash(frozenset(self.pairs.items()))

    def to_dict(self) -> Dict[str, BellLabel]:
        ordered = sorted(
            (tuple(sorted(pair, key=name_sort_key)), label) for pair, label in self.pairs.items()
        )
        return {f"{a}-{b}": label for (a, b), label in ordered}

    def __repr__(self) -> str:
        return f"LabelFrame({self.to_dict()})"


def apply_bsm(frame: LabelFrame, names: Sequence[QubitName], outcome: BellLabel) -> LabelFrame:
    """Record a Bell measurement across two pairs and the pair it leaves behind."""
    if len(names) != 2:
        raise InvalidArgumentError("a Bell measurement acts on exactly two qubits")
    a, b = (str(name) for name in names)
    first, second = frame.pair_containing(a), frame.pair_containing(b)
    if first is None or second is None:
        missing = a if first is None else b
        raise InvalidArgumentError(f"qubit {missing!r} is not in the frame")
    if first == second:
        raise InvalidArgumentError(f"({a}, {b}) already form one pair; nothing to swap")
    (x,) = first - {a}
    (y,) = second - {b}
    pairs = dict(frame.pairs)
    p, q = pairs.pop(first), pairs.pop(second)
    pairs[pair_key(a, b)] = validate_bell_label(outcome)
    pairs[pair_key(x, y)] = swap_labels(p, q, outcome)
    return LabelFrame(pairs)


def two_party_frame(l12: BellLabel = "00", l35: BellLabel = "00", l46: BellLabel = "00") -> LabelFrame:
    return LabelFrame.from_pairs(dict(zip(TWO_PARTY_PAIRS, (l12, l35, l46))))


def enumerate_two_party_table(initial: LabelFrame) -> List[Tuple[BellLabel, BellLabel, BellLabel]]:
    """All 16 (AP, AS, BS) triples of the two-party swap chain, ordered by (AP, AS)."""
    if set(initial.pairs) != {pair_key(*names) for names in TWO_PARTY_PAIRS}:
        raise InvalidArgumentError(
            f"two-party frame must hold exactly the pairs 1-2, 3-5, 4-6; got {initial.to_dict()}"
        )
    rows = []
    for alice_secret, bob_secret in itertools.product(BELL_LABELS, repeat=2):
        frame = apply_bsm(initial, ("1", "3"), alice_secret)
        frame = apply_bsm(frame, ("2", "4"), bob_secret)
        rows.append((frame.label_of("5", "6"), alice_secret, bob_secret))
    return sorted(rows)
