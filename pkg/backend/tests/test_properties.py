"""Property-based tests for the statevector engine and the label algebra."""

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from utils.pauli_oracle import LabelFrame, apply_bsm, enumerate_two_party_table, two_party_frame, xor_labels
from utils.quantum_core import (
    BELL_LABELS,
    CHAIN_TOLERANCE,
    NORM_TOLERANCE,
    PureState,
    apply_pauli,
    inner_product,
    measure_bell,
    outcome_distribution,
    outcome_probabilities,
    permute,
    prepare_bell,
    tensor,
)
from utils.rng import RandomSource

NAMES = ("a", "b", "c")

component = st.floats(min_value=-1, max_value=1, allow_nan=False, allow_infinity=False, allow_subnormal=False)
vectors = st.lists(component, min_size=16, max_size=16)
bell_labels = st.sampled_from(BELL_LABELS)
orders = st.permutations(NAMES)


def _state(values):
    vector = np.array(values[:8]) + 1j * np.array(values[8:])
    assume(np.linalg.norm(vector) > 1e-3)
    return PureState.from_vector(vector, NAMES, normalize=True)


@given(vectors)
def test_normalized_to_tolerance(values):
    assert abs(_state(values).norm_squared() - 1) < NORM_TOLERANCE


@given(vectors, st.sampled_from([("a", "b"), ("b", "c"), ("c", "a")]))
def test_bell_outcomes_complete(values, pair):
    probabilities = outcome_probabilities(_state(values), "bell", list(pair))
    assert sum(probabilities.values()) == pytest.approx(1.0, abs=CHAIN_TOLERANCE)


@given(vectors, orders)
def test_permutation_preserves_outcomes(values, order):
    state = _state(values)
    original = outcome_probabilities(state, "bell", ["a", "c"])
    permuted = outcome_probabilities(permute(state, order), "bell", ["a", "c"])
    for label in set(original) | set(permuted):
        assert permuted.get(label, 0.0) == pytest.approx(original.get(label, 0.0), abs=1e-11)


@settings(max_examples=50)
@given(vectors, st.integers(min_value=0, max_value=2 ** 32))
def test_measurement_is_repeatable(values, seed):
    label, post = measure_bell(_state(values), ["a", "b"], RandomSource(seed))
    assert outcome_probabilities(post, "bell", ["a", "b"]) == {label: pytest.approx(1.0, abs=1e-9)}


@given(bell_labels, bell_labels, bell_labels)
def test_xor_group_laws(p, q, r):
    assert xor_labels(p, "00") == p
    assert xor_labels(p, p) == "00"
    assert xor_labels(p, q) == xor_labels(q, p)
    assert xor_labels(xor_labels(p, q), r) == xor_labels(p, xor_labels(q, r))


@given(bell_labels, bell_labels)
def test_pauli_composes_by_xor(label, pauli):
    relabeled = apply_pauli(prepare_bell(label, ("a", "b")), "b", pauli)
    target = prepare_bell(xor_labels(label, pauli), ("a", "b"))
    assert abs(inner_product(target, relabeled)) == pytest.approx(1.0, abs=1e-12)


@given(bell_labels, bell_labels)
def test_swap_matches_statevector(p, q):
    state = tensor([prepare_bell(p, ("1", "2")), prepare_bell(q, ("3", "4"))])
    initial = LabelFrame.from_pairs({("1", "2"): p, ("3", "4"): q})
    for outcome in outcome_distribution(state, "bell", ["2", "3"]):
        expected = apply_bsm(initial, ("2", "3"), outcome.label).label_of("1", "4")
        assert outcome_probabilities(outcome.post_state, "bell", ["1", "4"]) == {expected: pytest.approx(1.0)}


@given(bell_labels, bell_labels, bell_labels)
def test_two_party_table_is_latin(l12, l35, l46):
    rows = enumerate_two_party_table(two_party_frame(l12, l35, l46))
    # every (public, Bob) pair fixes Alice's result
    assert len({(ap, bs) for ap, _, bs in rows}) == 16
    assert len({(ap, alice) for ap, alice, _ in rows}) == 16
