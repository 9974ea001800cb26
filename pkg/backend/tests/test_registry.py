import pytest

from utils.errors import InvalidArgumentError
from utils.quantum_core import prepare_bell, prepare_ghz
from utils.registry import CHANNEL, EVE, QubitRegistry
from utils.rng import RandomSource


@pytest.fixture
def registry():
    registry = QubitRegistry()
    registry.add(prepare_bell("00", ("1", "2")), "Alice")
    registry.add(prepare_bell("00", ("3", "4")), ["Alice", "Bob"])
    return registry


def test_owners(registry):
    assert registry.owner_of("2") == "Alice"
    assert registry.owner_of("4") == "Bob"
    assert registry.qubits_of("Alice") == ["1", "2", "3"]
    assert "4" in registry
    assert "5" not in registry


def test_duplicate_names_rejected(registry):
    with pytest.raises(InvalidArgumentError):
        registry.add(prepare_bell("00", ("2", "9")), "Bob")


def test_owner_count_must_match():
    with pytest.raises(InvalidArgumentError):
        QubitRegistry().add(prepare_bell("00", ("1", "2")), ["Alice"])


def test_unknown_qubit(registry):
    with pytest.raises(InvalidArgumentError):
        registry.owner_of("9")


def test_transit_cycle(registry):
    assert registry.begin_transit("2") == "Alice"
    assert registry.in_transit("2")
    assert registry.owner_of("2") == CHANNEL
    with pytest.raises(InvalidArgumentError):
        registry.begin_transit("2")
    registry.deliver("2", "Bob")
    assert registry.owner_of("2") == "Bob"
    with pytest.raises(InvalidArgumentError):
        registry.deliver("2", "Bob")


def test_transfer(registry):
    registry.transfer("1", EVE)
    assert registry.qubits_of(EVE) == ["1"]


def test_measurement_keeps_factors_small(registry):
    assert registry.factor_of("1").num_qubits == 2
    label = registry.measure_bell(["2", "3"], RandomSource(5))
    assert registry.factor_of("2").qubit_order == ("2", "3")
    assert registry.factor_of("1").qubit_order == ("1", "4")
    assert registry.measure_bell(["1", "4"], RandomSource(6)) == label


def test_branches_cover_every_outcome(registry):
    branches = registry.branches("bell", ["2", "3"])
    assert [label for label, _, _ in branches] == ["00", "01", "10", "11"]
    assert sum(probability for _, probability, _ in branches) == pytest.approx(1.0)
    # the original registry is untouched
    assert registry.factor_of("2").qubit_order == ("1", "2")


def test_full_state_order(registry):
    assert registry.state(["4", "3", "2", "1"]).qubit_order == ("4", "3", "2", "1")


def test_ghz_measurement(registry):
    registry.add(prepare_ghz("011", ("A", "B", "C")), "Alice")
    assert registry.measure_ghz(["A", "B", "C"], RandomSource(1)) == "011"


def test_pauli_measurement_returns_sign():
    registry = QubitRegistry()
    registry.add(prepare_bell("00", ("1", "2")), "Alice")
    first = registry.measure_pauli("1", "z", RandomSource(2))
    assert first in (1, -1)
    assert registry.measure_pauli("2", "z", RandomSource(3)) == first


def test_apply_pauli_relabels(registry):
    registry.apply_pauli("2", "10")
    assert registry.measure_bell(["1", "2"], RandomSource(0)) == "10"
