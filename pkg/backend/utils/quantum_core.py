"""
Quantum Core
Exact statevectors over named qubits, with projective measurements in the
computational, Pauli (z/x/y), Bell and N-qubit GHZ bases.

Register position 0 is the most significant bit of the amplitude index, and
``qubit_order`` lists the qubits left to right as they are written in kets.
Measured qubits are never discarded: they stay in the register, in the
eigenstate of the outcome.
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from utils.errors import CapacityError, ConsistencyError, InvalidArgumentError
from utils.rng import RandomSource

NORM_TOLERANCE = 1e-12
CHAIN_TOLERANCE = 1e-9
PROBABILITY_FLOOR = 1e-12
MAX_QUBITS = 16

QubitName = str
BellLabel = str
GhzLabel = str
Label = Union[str, int]

_SQRT1_2 = 1 / math.sqrt(2)

BELL_LABELS: Tuple[BellLabel, ...] = ("00", "01", "10", "11")

# b1 selects the parity branch, b0 the relative sign
_BELL_KETS: Dict[BellLabel, np.ndarray] = {
    "00": np.array([1, 0, 0, 1], dtype=complex) * _SQRT1_2,
    "01": np.array([1, 0, 0, -1], dtype=complex) * _SQRT1_2,
    "10": np.array([0, 1, 1, 0], dtype=complex) * _SQRT1_2,
    "11": np.array([0, 1, -1, 0], dtype=complex) * _SQRT1_2,
}

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

SIGNS: Tuple[int, int] = (1, -1)


class PauliAxis(str, Enum):
    Z = "z"
    X = "x"
    Y = "y"

    @classmethod
    def parse(cls, value) -> "PauliAxis":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidArgumentError(f"unknown Pauli axis {value!r}; expected z, x or y") from None


# +1 eigenvector first; the y eigenvectors are (|0> +/- i|1>)/sqrt(2)
_PAULI_KETS: Dict[PauliAxis, Dict[int, np.ndarray]] = {
    PauliAxis.Z: {1: np.array([1, 0], dtype=complex), -1: np.array([0, 1], dtype=complex)},
    PauliAxis.X: {1: np.array([1, 1], dtype=complex) * _SQRT1_2, -1: np.array([1, -1], dtype=complex) * _SQRT1_2},
    PauliAxis.Y: {1: np.array([1, 1j], dtype=complex) * _SQRT1_2, -1: np.array([1, -1j], dtype=complex) * _SQRT1_2},
}


class MeasurementBasis(str, Enum):
    BELL = "bell"
    GHZ = "ghz"
    PAULI = "pauli"


# ---------------------------------------------------------------------------
# Labels
# ---------------------------------------------------------------------------

def validate_bell_label(label) -> BellLabel:
    label = str(label)
    if label not in BELL_LABELS:
        raise InvalidArgumentError(f"invalid Bell label {label!r}; expected one of {', '.join(BELL_LABELS)}")
    return label


def validate_ghz_label(label, size: Optional[int] = None) -> GhzLabel:
    label = str(label)
    if len(label) < 2 or set(label) - {"0", "1"}:
        raise InvalidArgumentError(f"invalid GHZ label {label!r}; expected at least two bits")
    if size is not None and len(label) != size:
        raise InvalidArgumentError(f"GHZ label {label!r} has {len(label)} bits but {size} qubits were named")
    return label


def ghz_labels(size: int) -> List[GhzLabel]:
    """All 2^size GHZ labels in lexicographic order."""
    return ["".join(bits) for bits in itertools.product("01", repeat=size)]


def sign_to_bit(sign: int) -> str:
    """+1 -> "0", -1 -> "1"."""
    return "0" if sign == 1 else "1"


def ghz_ket(label: GhzLabel) -> np.ndarray:
    """
    Ket of a GHZ basis label.

    Leading bits d give the flip pattern of qubits 2..N relative to qubit 1 and
    the last bit the relative sign: (|0 d> + (-1)^s |1 d'>)/sqrt(2), d' the
    complement. For N >= 3 with d all ones the |1 0...0> branch is written first.
    """
    label = validate_ghz_label(label)
    size = len(label)
    pattern = label[:-1]
    sign = -1 if label[-1] == "1" else 1
    first = "0" + pattern
    second = "".join("1" if bit == "0" else "0" for bit in first)
    if size >= 3 and set(pattern) == {"1"}:
        first, second = second, first
    ket = np.zeros(2 ** size, dtype=complex)
    ket[int(first, 2)] = _SQRT1_2
    ket[int(second, 2)] = sign * _SQRT1_2
    return ket


def pauli_ket(axis, sign: int) -> np.ndarray:
    axis = PauliAxis.parse(axis)
    if sign not in SIGNS:
        raise InvalidArgumentError(f"Pauli outcome must be +1 or -1, got {sign}")
    return _PAULI_KETS[axis][sign].copy()


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

def _distinct_names(names: Sequence[QubitName], size: Optional[int] = None) -> Tuple[QubitName, ...]:
    names = tuple(str(name) for name in names)
    if size is not None and len(names) != size:
        raise InvalidArgumentError(f"expected {size} qubit names, got {len(names)}")
    if any(not name for name in names):
        raise InvalidArgumentError("qubit names must be non-empty")
    if len(set(names)) != len(names):
        raise InvalidArgumentError(f"qubit names must be distinct: {', '.join(names)}")
    return names


@dataclass(eq=False)
class PureState:
    """Normalized amplitude vector over ``qubit_order``."""

    amplitudes: np.ndarray
    qubit_order: Tuple[QubitName, ...]

    def __post_init__(self):
        self.qubit_order = _distinct_names(self.qubit_order)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        size = len(self.qubit_order)
        if size < 1:
            raise InvalidArgumentError("a state needs at least one qubit")
        if size > MAX_QUBITS:
            raise CapacityError(f"{size} qubits exceed the {MAX_QUBITS}-qubit register cap")
        if self.amplitudes.size != 2 ** size:
            raise InvalidArgumentError(
                f"{self.amplitudes.size} amplitudes do not match {size} qubits"
            )
        if not np.all(np.isfinite(self.amplitudes)):
            raise ConsistencyError("amplitudes must be finite")
        if abs(self.norm_squared() - 1.0) > NORM_TOLERANCE:
            raise ConsistencyError(f"state is not normalized (squared norm {self.norm_squared():.15f})")

    @classmethod
    def from_vector(cls, vector, names: Sequence[QubitName], normalize: bool = False) -> "PureState":
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0:
                raise InvalidArgumentError("cannot normalize the zero vector")
            vector = vector / norm
        return cls(vector, tuple(names))

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_order)

    def position(self, name: QubitName) -> int:
        try:
            return self.qubit_order.index(str(name))
        except ValueError:
            raise InvalidArgumentError(f"qubit {name!r} is not in this state") from None

    def amplitude(self, bits: str) -> complex:
        """Amplitude of a computational basis ket written in ``qubit_order``."""
        if len(bits) != self.num_qubits or set(bits) - {"0", "1"}:
            raise InvalidArgumentError(f"{bits!r} is not a {self.num_qubits}-bit basis ket")
        return complex(self.amplitudes[int(bits, 2)])

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def to_dict(self) -> Dict:
        return {
            "qubit_order": list(self.qubit_order),
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }


def prepare_bell(label: BellLabel, names: Sequence[QubitName]) -> PureState:
    names = _distinct_names(names, 2)
    return PureState(_BELL_KETS[validate_bell_label(label)].copy(), names)


def prepare_ghz(label: GhzLabel, names: Sequence[QubitName]) -> PureState:
    names = _distinct_names(names)
    label = validate_ghz_label(label, len(names))
    return PureState(ghz_ket(label), names)


def prepare_ghz_x(names: Sequence[QubitName]) -> PureState:
    """(|0̄...0̄> + |1̄...1̄>)/sqrt(2) with |0̄>, |1̄> the sigma-x eigenstates."""
    names = _distinct_names(names)
    if len(names) < 2:
        raise InvalidArgumentError("a GHZ state needs at least two qubits")
    plus = reduce(np.kron, [_PAULI_KETS[PauliAxis.X][1]] * len(names))
    minus = reduce(np.kron, [_PAULI_KETS[PauliAxis.X][-1]] * len(names))
    return PureState((plus + minus) * _SQRT1_2, names)


def prepare_pauli_eigenstate(axis, sign: int, name: QubitName) -> PureState:
    return PureState(pauli_ket(axis, sign), (str(name),))


def tensor(states: Sequence[PureState]) -> PureState:
    if not states:
        raise InvalidArgumentError("tensor needs at least one state")
    names = [name for state in states for name in state.qubit_order]
    if len(set(names)) != len(names):
        clashes = sorted({name for name in names if names.count(name) > 1})
        raise InvalidArgumentError(f"qubit names collide: {', '.join(clashes)}")
    if len(names) > MAX_QUBITS:
        raise CapacityError(f"{len(names)} qubits exceed the {MAX_QUBITS}-qubit register cap")
    amplitudes = reduce(np.kron, (state.amplitudes for state in states))
    return PureState(amplitudes, tuple(names))


def permute(state: PureState, order: Sequence[QubitName]) -> PureState:
    """Same state with register positions relabeled to ``order``."""
    order = _distinct_names(order)
    if sorted(order) != sorted(state.qubit_order):
        raise InvalidArgumentError(f"{', '.join(order)} is not a reordering of {', '.join(state.qubit_order)}")
    if order == state.qubit_order:
        return state
    axes = [state.position(name) for name in order]
    amplitudes = state.amplitudes.reshape([2] * state.num_qubits).transpose(axes).reshape(-1)
    return PureState(amplitudes, order)


def apply_pauli(state: PureState, name: QubitName, label: BellLabel) -> PureState:
    """Apply X^b1 Z^b0 to one qubit; on half of a Bell pair this XORs the pair's label."""
    label = validate_bell_label(label)
    matrix = np.eye(2, dtype=complex)
    if label[1] == "1":
        matrix = _PAULI_Z @ matrix
    if label[0] == "1":
        matrix = _PAULI_X @ matrix
    position = state.position(name)
    moved = np.moveaxis(state.amplitudes.reshape([2] * state.num_qubits), position, 0)
    result = np.moveaxis(np.tensordot(matrix, moved, axes=([1], [0])), 0, position)
    return PureState(result.reshape(-1), state.qubit_order)


def inner_product(left: PureState, right: PureState) -> complex:
    """<left|right>, aligning ``right`` to the qubit order of ``left``."""
    right = permute(right, left.qubit_order)
    return complex(np.vdot(left.amplitudes, right.amplitudes))


# ---------------------------------------------------------------------------
# Measurements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Outcome:
    label: Label
    probability: float
    post_state: PureState


@dataclass(frozen=True)
class FactoredOutcome:
    """Outcome with the measured group split off from the untouched remainder."""

    label: Label
    probability: float
    measured: PureState
    remainder: Optional[PureState]

    def joined(self, order: Sequence[QubitName]) -> PureState:
        parts = [self.measured] if self.remainder is None else [self.measured, self.remainder]
        return permute(tensor(parts), order)


def basis_vectors(basis, size: int = 2, axis=None) -> Tuple[List[Label], np.ndarray]:
    """Labels and kets (as rows) of a measurement basis on ``size`` qubits."""
    basis = MeasurementBasis(basis)
    if basis is MeasurementBasis.BELL:
        if size != 2:
            raise InvalidArgumentError("a Bell measurement acts on exactly two qubits")
        labels: List[Label] = list(BELL_LABELS)
        kets = np.stack([_BELL_KETS[label] for label in BELL_LABELS])
    elif basis is MeasurementBasis.GHZ:
        if size < 2:
            raise InvalidArgumentError("a GHZ measurement acts on at least two qubits")
        labels = list(ghz_labels(size))
        kets = np.stack([ghz_ket(label) for label in labels])
    else:
        if size != 1:
            raise InvalidArgumentError("a Pauli measurement acts on exactly one qubit")
        if axis is None:
            raise InvalidArgumentError("a Pauli measurement needs an axis")
        axis = PauliAxis.parse(axis)
        labels = list(SIGNS)
        kets = np.stack([_PAULI_KETS[axis][sign] for sign in SIGNS])
    return labels, kets


def _check_norm(state: PureState) -> None:
    if abs(state.norm_squared() - 1.0) > CHAIN_TOLERANCE:
        raise ConsistencyError(f"state norm drifted to {state.norm_squared():.12f}")


def _project(state: PureState, basis, names: Sequence[QubitName], axis=None):
    names = _distinct_names(names)
    _check_norm(state)
    labels, kets = basis_vectors(basis, len(names), axis)
    positions = [state.position(name) for name in names]
    rest = [index for index in range(state.num_qubits) if index not in positions]
    matrix = (
        state.amplitudes.reshape([2] * state.num_qubits)
        .transpose(positions + rest)
        .reshape(2 ** len(positions), -1)
    )
    coefficients = kets.conj() @ matrix
    probabilities = np.sum(np.abs(coefficients) ** 2, axis=1)
    if abs(probabilities.sum() - 1.0) > CHAIN_TOLERANCE:
        raise ConsistencyError(
            f"{MeasurementBasis(basis).value} outcome probabilities sum to {probabilities.sum():.12f}"
        )
    rest_names = tuple(state.qubit_order[index] for index in rest)
    return names, labels, kets, coefficients, probabilities, rest_names


def _factor(names, label, probability, ket, coefficient, rest_names) -> FactoredOutcome:
    measured = PureState(ket.copy(), names)
    remainder = None
    if rest_names:
        remainder = PureState(coefficient / math.sqrt(probability), rest_names)
    return FactoredOutcome(label, float(probability), measured, remainder)


def factored_outcomes(state: PureState, basis, names: Sequence[QubitName], axis=None) -> List[FactoredOutcome]:
    """Every outcome above the probability floor, in label order, kept factored."""
    names, labels, kets, coefficients, probabilities, rest_names = _project(state, basis, names, axis)
    return [
        _factor(names, label, probability, kets[index], coefficients[index], rest_names)
        for index, (label, probability) in enumerate(zip(labels, probabilities))
        if probability > PROBABILITY_FLOOR
    ]


def outcome_probabilities(state: PureState, basis, names: Sequence[QubitName], axis=None) -> Dict[Label, float]:
    _, labels, _, _, probabilities, _ = _project(state, basis, names, axis)
    return {label: float(p) for label, p in zip(labels, probabilities) if p > PROBABILITY_FLOOR}


def reduced_probabilities(state: PureState, name: QubitName, axis) -> Dict[int, float]:
    """Single-qubit Pauli outcome probabilities, both signs always present."""
    _, labels, _, _, probabilities, _ = _project(state, MeasurementBasis.PAULI, [name], axis)
    return {label: float(p) for label, p in zip(labels, probabilities)}


def outcome_distribution(state: PureState, basis, names: Sequence[QubitName], axis=None) -> List[Outcome]:
    """All outcomes with their probability and full post-measurement state."""
    return [
        Outcome(outcome.label, outcome.probability, outcome.joined(state.qubit_order))
        for outcome in factored_outcomes(state, basis, names, axis)
    ]


def measure_factored(
    state: PureState, basis, names: Sequence[QubitName], randomness: RandomSource, axis=None
) -> FactoredOutcome:
    """Born-rule sample of one outcome, returned factored."""
    names, labels, kets, coefficients, probabilities, rest_names = _project(state, basis, names, axis)
    index = randomness.choice_index(probabilities)
    return _factor(names, labels[index], probabilities[index], kets[index], coefficients[index], rest_names)


def measure_bell(
    state: PureState, names: Sequence[QubitName], randomness: RandomSource
) -> Tuple[BellLabel, PureState]:
    outcome = measure_factored(state, MeasurementBasis.BELL, names, randomness)
    return outcome.label, outcome.joined(state.qubit_order)


def measure_ghz(
    state: PureState, names: Sequence[QubitName], randomness: RandomSource
) -> Tuple[GhzLabel, PureState]:
    outcome = measure_factored(state, MeasurementBasis.GHZ, names, randomness)
    return outcome.label, outcome.joined(state.qubit_order)


def measure_pauli(
    state: PureState, name: QubitName, axis, randomness: RandomSource
) -> Tuple[int, PureState]:
    outcome = measure_factored(state, MeasurementBasis.PAULI, [name], randomness, axis)
    return outcome.label, outcome.joined(state.qubit_order)
