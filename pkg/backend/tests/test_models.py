import pytest

from config import default_settings, load_settings_file, merge_settings, normalize_settings
from models import EveKind, EveState, EveStrategy, Protocol, ProtocolConfig, ReturnPolicy, RoundRecord
from utils.errors import InvalidArgumentError


class TestSettings:
    def test_normalize_keys(self):
        assert normalize_settings({"Eve-Policy": "forward_ancilla"}) == {"eve_policy": "forward_ancilla"}
        with pytest.raises(InvalidArgumentError):
            normalize_settings({"colour": "blue"})

    def test_precedence(self, tmp_path):
        path = tmp_path / "campaign.env"
        path.write_text("PROTOCOL=multiparty_es\nROUNDS=20\nseed=9\n")
        merged = merge_settings({"rounds": 5, "seed": None}, str(path))
        assert merged["protocol"] == "multiparty_es"
        assert merged["rounds"] == 5
        assert merged["seed"] == "9"
        assert merged["workers"] == default_settings()["workers"]

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidArgumentError):
            load_settings_file(str(tmp_path / "absent.env"))

    def test_file_with_unknown_key(self, tmp_path):
        path = tmp_path / "bad.env"
        path.write_text("ROUNDS=3\nMODE=fast\n")
        with pytest.raises(InvalidArgumentError):
            load_settings_file(str(path))


class TestProtocolConfig:
    def test_defaults_from_settings(self):
        config = ProtocolConfig.from_settings({"protocol": "multiparty_es"})
        assert config.num_parties == 3
        assert config.parties == ("Alice", "Bob", "Carol")
        assert config.eve.kind is EveKind.NONE

    def test_intercept_resolves_by_protocol(self):
        assert ProtocolConfig.from_settings({"eve": "intercept"}).eve.kind is EveKind.TWO_PARTY_INTERCEPT
        multiparty = ProtocolConfig.from_settings({"protocol": "multiparty_es", "eve": "intercept"})
        assert multiparty.eve.kind is EveKind.MULTIPARTY_INTERCEPT

    @pytest.mark.parametrize("settings", [
        {"protocol": "multiparty_es", "eve": "two_party_intercept"},
        {"protocol": "two_party_es", "eve": "multiparty_intercept"},
        {"protocol": "two_party_es", "parties": 3},
        {"protocol": "hbb99", "parties": 4},
        {"protocol": "multiparty_es", "parties": 6},
        {"rounds": 0},
        {"seed": -1},
        {"seed": 2 ** 64},
        {"compare_fraction": 1.5},
        {"compare_fraction": "half"},
        {"workers": 0},
        {"rounds": "many"},
        {"protocol": "bb84"},
        {"eve": "photon_splitting"},
        {"eve_policy": "drop"},
        {"ancilla_label": "22"},
        {"eve": "intercept", "eve_targets": "Mallory"},
        {"announce_basis": "maybe"},
    ])
    def test_invalid(self, settings):
        with pytest.raises(InvalidArgumentError):
            ProtocolConfig.from_settings(settings)

    def test_targets(self):
        config = ProtocolConfig.from_settings({"protocol": "multiparty_es", "eve": "intercept", "eve_targets": "Bob, Carol"})
        assert config.eve.targets == frozenset({"Bob", "Carol"})
        assert config.eve.attacks("Bob")
        assert not EveStrategy().attacks("Bob")

    def test_to_dict(self):
        data = ProtocolConfig.from_settings({"protocol": "kki99", "initial_labels": None}).to_dict()
        assert data["protocol"] == "kki99"
        assert data["eve"]["return_policy"] is None

    def test_protocol_parse(self):
        assert Protocol.parse(" HBB99 ") is Protocol.HBB99

    @pytest.mark.parametrize("protocol", list(Protocol))
    def test_enum_members_parse_to_themselves(self, protocol):
        assert Protocol.parse(protocol) is protocol
        assert ProtocolConfig(protocol=protocol, num_parties=3 if protocol is not Protocol.TWO_PARTY_ES else 2).protocol is protocol

    def test_parsed_members_pass_through(self):
        assert ReturnPolicy.parse(ReturnPolicy.FORWARD_ANCILLA) is ReturnPolicy.FORWARD_ANCILLA
        assert EveKind.parse(EveKind.MULTIPARTY_INTERCEPT) is EveKind.MULTIPARTY_INTERCEPT

    @pytest.mark.parametrize("protocol", [member.value for member in Protocol])
    def test_from_settings_accepts_every_protocol(self, protocol):
        config = ProtocolConfig.from_settings({"protocol": protocol, "rounds": 4})
        assert config.protocol is Protocol(protocol)
        assert config.rounds == 4


def test_eve_state_to_dict():
    eve = EveState(held_qubits={"7", "2"}, return_labels={"6": "10"}, inferred_key="01")
    data = eve.to_dict()
    assert data["held_qubits"] == ["2", "7"]
    assert data["return_labels"] == {"6": "10"}
    assert data["inferred_key"] == "01"
    assert data["guess"] is None


def test_mismatch_treats_missing_inference_as_wrong():
    assert RoundRecord.mismatch({"Bob": None}, {"Bob": "01"})
    assert RoundRecord.mismatch({}, {"Bob": "01"})
    assert not RoundRecord.mismatch({"Bob": "01"}, {"Bob": "01"})
