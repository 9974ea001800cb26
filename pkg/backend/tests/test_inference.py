import pytest

from models import Protocol
from utils.errors import InsufficientSharesError, InvalidArgumentError, ProtocolViolationError
from utils.inference import (
    PROBABILITY,
    PUBLIC,
    build_inference_table,
    infer_first_bit,
    infer_second_bit,
    infer_two_party,
    inference_table,
    layout_for,
    multiparty_layout,
    two_party_layout,
)
from utils.verification import GOLDEN_TABLE_I, GOLDEN_TABLE_II


@pytest.fixture(scope="module")
def table_ii():
    return inference_table(Protocol.MULTIPARTY_ES, 3)


class TestLayouts:
    def test_two_party(self):
        layout = two_party_layout()
        assert layout.initial_labels == ("00", "00", "00")
        assert [t.qubit for t in layout.outbound] == ["2"]
        assert layout.public == ("5", "6")
        assert layout.routes == {"6": "2"}

    def test_two_party_custom_labels(self):
        assert two_party_layout(["01", "10", "11"]).factor_label("6") == "11"
        with pytest.raises(InvalidArgumentError):
            two_party_layout(["01", "10"])
        with pytest.raises(InvalidArgumentError):
            two_party_layout(["01", "10", "12"])

    def test_three_party_naming(self):
        layout = multiparty_layout(3)
        secret = dict(layout.secret)
        assert secret == {"Alice": ("2", "3"), "Bob": ("5", "A"), "Carol": ("4", "B")}
        assert layout.public == ("1", "C", "D")
        assert layout.routes == {"D": "A", "C": "B"}
        assert layout.initial_labels == ("00", "000", "00", "00")

    def test_four_party_naming(self):
        layout = multiparty_layout(4)
        assert layout.public == ("1", "D", "E", "F")
        assert dict(layout.secret)["David"] == ("4", "C")
        assert {t.qubit: t.sender for t in layout.returns} == {"F": "Bob", "E": "Carol", "D": "David"}

    def test_layout_for(self):
        assert layout_for(Protocol.MULTIPARTY_ES, 4).parties == ("Alice", "Bob", "Carol", "David")
        with pytest.raises(InvalidArgumentError):
            layout_for(Protocol.TWO_PARTY_ES, 3)
        with pytest.raises(InvalidArgumentError):
            layout_for(Protocol.HBB99, 3)

    def test_factor_label_unknown_qubit(self):
        with pytest.raises(InvalidArgumentError):
            two_party_layout().factor_label("Z")


class TestTables:
    def test_two_party_table(self):
        table = build_inference_table(two_party_layout())
        assert table.columns == (PUBLIC, "Alice", "Bob")
        assert table.rows() == sorted(GOLDEN_TABLE_I)
        assert table.frame[PROBABILITY].sum() == pytest.approx(1.0)

    def test_three_party_table(self, table_ii):
        assert len(table_ii) == 64
        assert set(table_ii.rows()) == set(GOLDEN_TABLE_II)

    def test_filter(self, table_ii):
        filtered = table_ii.filter({PUBLIC: "000"})
        assert len(filtered) == 8
        with pytest.raises(InvalidArgumentError):
            table_ii.filter({"Mallory": "00"})

    def test_consistent_values(self, table_ii):
        assert table_ii.consistent_values("Alice", {PUBLIC: "000", "Bob": "00"}) == ("00", "01")
        assert table_ii.consistent_values("Alice", {PUBLIC: "000", "Bob": "00", "Carol": "11"}) == ()

    def test_unique_value_ambiguous(self, table_ii):
        with pytest.raises(ProtocolViolationError):
            table_ii.unique_value("Alice", {PUBLIC: "000"})

    def test_cached_accessor(self):
        assert inference_table(Protocol.TWO_PARTY_ES, 2) is inference_table(Protocol.TWO_PARTY_ES, 2)

    def test_records(self):
        records = inference_table(Protocol.TWO_PARTY_ES, 2).to_records()
        assert records[0] == {PUBLIC: "00", "Alice": "00", "Bob": "00", PROBABILITY: pytest.approx(1 / 16)}


class TestInference:
    @pytest.mark.parametrize("public, alice, bob", GOLDEN_TABLE_I)
    def test_two_party(self, public, alice, bob):
        assert infer_two_party(public, bob) == alice

    def test_every_row_of_table_ii(self, table_ii):
        for public, alice, bob, carol in table_ii.rows():
            assert infer_first_bit("Bob", public, bob, table_ii) == alice[0]
            assert infer_first_bit("Carol", public, carol, table_ii) == alice[0]
            assert infer_second_bit({"Bob": bob, "Carol": carol}, public, table_ii) == alice[1]

    def test_second_bit_needs_every_share(self, table_ii):
        with pytest.raises(InsufficientSharesError):
            infer_second_bit({"Bob": "00"}, "000", table_ii)

    def test_inconsistent_shares(self, table_ii):
        with pytest.raises(ProtocolViolationError):
            infer_second_bit({"Bob": "00", "Carol": "11"}, "000", table_ii)

    def test_first_bit_unknown_party(self, table_ii):
        with pytest.raises(InvalidArgumentError):
            infer_first_bit("Alice", "000", "00", table_ii)

    def test_four_party(self):
        table = inference_table(Protocol.MULTIPARTY_ES, 4)
        shares = ("Bob", "Carol", "David")
        for row in table.filter({PUBLIC: "0110"}).rows():
            public, alice = row[0], row[1]
            secrets = dict(zip(shares, row[2:]))
            for party in shares:
                assert infer_first_bit(party, public, secrets[party], table) == alice[0]
            assert infer_second_bit(secrets, public, table) == alice[1]
