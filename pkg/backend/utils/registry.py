"""
Qubit Registry
The protocol world as a set of independent PureState factors plus the current
owner of every named qubit.

A measurement merges only the factors it touches and splits the measured group
back off afterwards, so factors stay small while ancillas keep being added.
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from utils.errors import InvalidArgumentError
from utils.quantum_core import (
    Label,
    MeasurementBasis,
    PureState,
    QubitName,
    apply_pauli,
    factored_outcomes,
    measure_factored,
    permute,
    tensor,
)
from utils.rng import RandomSource

CHANNEL = "channel"
EVE = "Eve"


class QubitRegistry:
    """Owner-aware collection of PureState factors with disjoint qubit names."""

    def __init__(self):
        self._factors: List[PureState] = []
        self._owners: Dict[QubitName, str] = {}

    def copy(self) -> "QubitRegistry":
        # factors are never mutated in place, sharing them is safe
        clone = QubitRegistry()
        clone._factors = list(self._factors)
        clone._owners = dict(self._owners)
        return clone

    # -- bookkeeping -------------------------------------------------------

    def add(self, state: PureState, owner) -> None:
        """Add a factor; ``owner`` is one party name or a name per qubit."""
        clashes = [name for name in state.qubit_order if name in self._owners]
        if clashes:
            raise InvalidArgumentError(f"qubit names already registered: {', '.join(clashes)}")
        owners = [owner] * state.num_qubits if isinstance(owner, str) else list(owner)
        if len(owners) != state.num_qubits:
            raise InvalidArgumentError("one owner per qubit is required")
        self._factors.append(state)
        self._owners.update(zip(state.qubit_order, owners))

    @property
    def names(self) -> Tuple[QubitName, ...]:
        return tuple(self._owners)

    def __contains__(self, name) -> bool:
        return str(name) in self._owners

    def owner_of(self, name: QubitName) -> str:
        try:
            return self._owners[str(name)]
        except KeyError:
            raise InvalidArgumentError(f"unknown qubit {name!r}") from None

    def qubits_of(self, owner: str) -> List[QubitName]:
        return [name for name, held_by in self._owners.items() if held_by == owner]

    def transfer(self, name: QubitName, owner: str) -> None:
        self.owner_of(name)
        self._owners[str(name)] = owner

    def begin_transit(self, name: QubitName) -> str:
        """Put a qubit on the quantum channel; returns the sender."""
        sender = self.owner_of(name)
        if sender == CHANNEL:
            raise InvalidArgumentError(f"qubit {name!r} is already in transit")
        self._owners[str(name)] = CHANNEL
        return sender

    def in_transit(self, name: QubitName) -> bool:
        return self.owner_of(name) == CHANNEL

    def deliver(self, name: QubitName, recipient: str) -> None:
        if not self.in_transit(name):
            raise InvalidArgumentError(f"qubit {name!r} is not in transit")
        self._owners[str(name)] = recipient

    # -- factors -----------------------------------------------------------

    def _index_of(self, name: QubitName) -> int:
        self.owner_of(name)
        for index, factor in enumerate(self._factors):
            if name in factor.qubit_order:
                return index
        raise InvalidArgumentError(f"qubit {name!r} has no factor")

    def factor_of(self, name: QubitName) -> PureState:
        return self._factors[self._index_of(str(name))]

    def _take(self, names: Iterable[QubitName]) -> PureState:
        """Remove and return the tensor product of every factor touching ``names``."""
        indices = sorted({self._index_of(str(name)) for name in names})
        merged = tensor([self._factors[index] for index in indices])
        for index in reversed(indices):
            del self._factors[index]
        return merged

    def state(self, order: Optional[Sequence[QubitName]] = None) -> PureState:
        """The full register as one PureState (small registries only)."""
        full = tensor(self._factors)
        return permute(full, order if order is not None else self.names)

    # -- operations --------------------------------------------------------

    def apply_pauli(self, name: QubitName, label: str) -> None:
        index = self._index_of(str(name))
        self._factors[index] = apply_pauli(self._factors[index], str(name), label)

    def measure(self, basis, names: Sequence[QubitName], randomness: RandomSource, axis=None) -> Label:
        names = [str(name) for name in names]
        merged = self._take(names)
        outcome = measure_factored(merged, basis, names, randomness, axis)
        self._factors.append(outcome.measured)
        if outcome.remainder is not None:
            self._factors.append(outcome.remainder)
        return outcome.label

    def measure_bell(self, names: Sequence[QubitName], randomness: RandomSource) -> str:
        return self.measure(MeasurementBasis.BELL, names, randomness)

    def measure_ghz(self, names: Sequence[QubitName], randomness: RandomSource) -> str:
        return self.measure(MeasurementBasis.GHZ, names, randomness)

    def measure_pauli(self, name: QubitName, axis, randomness: RandomSource) -> int:
        return self.measure(MeasurementBasis.PAULI, [name], randomness, axis)

    def branches(self, basis, names: Sequence[QubitName], axis=None) -> List[Tuple[Label, float, "QubitRegistry"]]:
        """Every outcome of a measurement with its probability and resulting registry."""
        names = [str(name) for name in names]
        base = self.copy()
        merged = base._take(names)
        results = []
        for outcome in factored_outcomes(merged, basis, names, axis):
            branch = base.copy()
            branch._factors.append(outcome.measured)
            if outcome.remainder is not None:
                branch._factors.append(outcome.remainder)
            results.append((outcome.label, outcome.probability, branch))
        return results

    def __repr__(self) -> str:
        sizes = ", ".join(str(factor.num_qubits) for factor in self._factors)
        return f"QubitRegistry(qubits={len(self._owners)}, factors=[{sizes}])"
