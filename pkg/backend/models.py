from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Set, Tuple

from config import default_settings
from utils.errors import InvalidArgumentError
from utils.quantum_core import validate_bell_label
from utils.rng import MAX_SEED

PARTY_NAMES: Tuple[str, ...] = ("Alice", "Bob", "Carol", "David", "Erin")
MAX_PARTIES = len(PARTY_NAMES)


class Protocol(str, Enum):
    TWO_PARTY_ES = "two_party_es"
    MULTIPARTY_ES = "multiparty_es"
    MULTIPARTY_GHZ = "multiparty_ghz"
    HBB99 = "hbb99"
    KKI99 = "kki99"

    @classmethod
    def parse(cls, value) -> "Protocol":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(member.value for member in cls)
            raise InvalidArgumentError(f"unknown protocol {value!r}; expected one of {choices}") from None


# Allowed party counts per protocol
PARTY_RANGES: Dict[Protocol, Tuple[int, int]] = {
    Protocol.TWO_PARTY_ES: (2, 2),
    Protocol.MULTIPARTY_ES: (3, MAX_PARTIES),
    Protocol.MULTIPARTY_GHZ: (2, MAX_PARTIES),
    Protocol.HBB99: (3, 3),
    Protocol.KKI99: (3, 3),
}

DEFAULT_PARTY_COUNTS: Dict[Protocol, int] = {
    Protocol.TWO_PARTY_ES: 2,
    Protocol.MULTIPARTY_ES: 3,
    Protocol.MULTIPARTY_GHZ: 3,
    Protocol.HBB99: 3,
    Protocol.KKI99: 3,
}


class EveKind(str, Enum):
    NONE = "none"
    TWO_PARTY_INTERCEPT = "two_party_intercept"
    MULTIPARTY_INTERCEPT = "multiparty_intercept"

    @classmethod
    def parse(cls, value, protocol: Optional[Protocol] = None) -> "EveKind":
        """``intercept`` picks the intercept-substitute variant matching ``protocol``."""
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        if text == "intercept":
            if protocol is None:
                raise InvalidArgumentError("'intercept' needs a protocol to resolve against")
            return cls.TWO_PARTY_INTERCEPT if protocol is Protocol.TWO_PARTY_ES else cls.MULTIPARTY_INTERCEPT
        try:
            return cls(text)
        except ValueError:
            choices = ", ".join(["intercept"] + [member.value for member in cls])
            raise InvalidArgumentError(f"unknown eve strategy {value!r}; expected one of {choices}") from None


class ReturnPolicy(str, Enum):
    FORWARD_CAPTURED = "forward_captured"
    FORWARD_ANCILLA = "forward_ancilla"
    RANDOM_BELL_GUESS = "random_bell_guess"

    @classmethod
    def parse(cls, value) -> "ReturnPolicy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(member.value for member in cls)
            raise InvalidArgumentError(f"unknown eve policy {value!r}; expected one of {choices}") from None


@dataclass(frozen=True)
class EveStrategy:
    kind: EveKind = EveKind.NONE
    return_policy: ReturnPolicy = ReturnPolicy.FORWARD_CAPTURED
    ancilla_label: str = "00"
    targets: Optional[FrozenSet[str]] = None  # None: every channel

    def __post_init__(self):
        object.__setattr__(self, "kind", EveKind(self.kind))
        object.__setattr__(self, "return_policy", ReturnPolicy(self.return_policy))
        object.__setattr__(self, "ancilla_label", validate_bell_label(self.ancilla_label))
        if self.targets is not None:
            targets = frozenset(str(target) for target in self.targets)
            if not targets:
                raise InvalidArgumentError("eve targets must name at least one party")
            object.__setattr__(self, "targets", targets)

    @property
    def is_active(self) -> bool:
        return self.kind is not EveKind.NONE

    def attacks(self, party: str) -> bool:
        """Whether the channel to/from ``party`` is attacked."""
        return self.is_active and (self.targets is None or party in self.targets)

    def to_dict(self):
        return {
            'kind': self.kind.value,
            'return_policy': self.return_policy.value if self.is_active else None,
            'ancilla_label': self.ancilla_label,
            'targets': sorted(self.targets) if self.targets is not None else None,
        }


@dataclass
class EveState:
    """Eve's per-round bookkeeping."""

    routes: Dict[str, str] = field(default_factory=dict)  # return qubit -> outbound qubit of the same party
    held_qubits: Set[str] = field(default_factory=set)
    retained: Dict[str, str] = field(default_factory=dict)  # captured outbound qubit -> ancilla half kept
    return_labels: Dict[str, str] = field(default_factory=dict)  # return qubit -> Eve's Bell outcome
    forwarded: Dict[str, str] = field(default_factory=dict)  # return qubit -> qubit handed on
    secret_inference: Optional[str] = None
    guess: Optional[str] = None
    announced_ap_seen: Optional[str] = None
    inferred_key: Optional[str] = None

    def to_dict(self):
        return {
            'held_qubits': sorted(self.held_qubits),
            'secret_inference': self.secret_inference,
            'return_labels': dict(self.return_labels),
            'guess': self.guess,
            'announced_ap_seen': self.announced_ap_seen,
            'inferred_key': self.inferred_key,
        }


def _parse_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise InvalidArgumentError(f"expected a boolean, got {value!r}")


def _parse_list(value) -> Optional[Tuple[str, ...]]:
    if value is None:
        return None
    items = value.split(",") if isinstance(value, str) else list(value)
    items = tuple(str(item).strip() for item in items if str(item).strip())
    return items or None


def _parse_int(name: str, value) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"{name} must be an integer, got {value!r}") from None


@dataclass(frozen=True)
class ProtocolConfig:
    protocol: Protocol = Protocol.TWO_PARTY_ES
    num_parties: int = 2
    rounds: int = 1
    seed: int = 0
    eve: EveStrategy = field(default_factory=EveStrategy)
    comparison_fraction: float = 0.5
    ghz_variant_announce: bool = False
    initial_labels: Optional[Tuple[str, ...]] = None  # None: all-zero public labels
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))
        low, high = PARTY_RANGES[self.protocol]
        if not low <= self.num_parties <= high:
            raise InvalidArgumentError(
                f"{self.protocol.value} supports {low}..{high} parties, got {self.num_parties}"
            )
        if self.rounds < 1:
            raise InvalidArgumentError(f"rounds must be at least 1, got {self.rounds}")
        if not 0 <= self.seed < MAX_SEED:
            raise InvalidArgumentError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0.0 <= self.comparison_fraction <= 1.0:
            raise InvalidArgumentError(f"compare fraction must lie in [0, 1], got {self.comparison_fraction}")
        if self.workers < 1:
            raise InvalidArgumentError(f"workers must be at least 1, got {self.workers}")
        if self.initial_labels is not None:
            object.__setattr__(self, "initial_labels", tuple(str(label) for label in self.initial_labels))
        self._check_eve()

    def _check_eve(self):
        kind = self.eve.kind
        if kind is EveKind.TWO_PARTY_INTERCEPT and self.protocol is not Protocol.TWO_PARTY_ES:
            raise InvalidArgumentError(
                f"two_party_intercept only applies to two_party_es, not {self.protocol.value} "
                f"with {self.num_parties} parties"
            )
        if kind is EveKind.MULTIPARTY_INTERCEPT:
            if self.protocol is Protocol.TWO_PARTY_ES:
                raise InvalidArgumentError("multiparty_intercept needs more than two parties; use two_party_intercept")
            if self.eve.return_policy is ReturnPolicy.RANDOM_BELL_GUESS:
                raise InvalidArgumentError("random_bell_guess is only defined for the two-party attack")
        if self.eve.targets is not None:
            unknown = sorted(self.eve.targets - set(self.parties[1:]))
            if unknown:
                raise InvalidArgumentError(f"eve targets are not receiving parties: {', '.join(unknown)}")

    @property
    def parties(self) -> Tuple[str, ...]:
        return PARTY_NAMES[: self.num_parties]

    @classmethod
    def from_settings(cls, settings: Mapping[str, Any]) -> "ProtocolConfig":
        """Build from flat settings (CLI flags, config file, API body)."""
        values = default_settings()
        values.update({k: v for k, v in settings.items() if v is not None})
        protocol = Protocol.parse(values["protocol"])
        parties = values.get("parties")
        if parties in (None, ""):
            num_parties = DEFAULT_PARTY_COUNTS[protocol]
        else:
            num_parties = _parse_int("parties", parties)
        try:
            fraction = float(values["compare_fraction"])
        except (TypeError, ValueError):
            raise InvalidArgumentError(f"compare fraction must be a number, got {values['compare_fraction']!r}") from None
        targets = _parse_list(values.get("eve_targets"))
        eve = EveStrategy(
            kind=EveKind.parse(values["eve"], protocol),
            return_policy=ReturnPolicy.parse(values["eve_policy"]),
            ancilla_label=str(values["ancilla_label"]),
            targets=frozenset(targets) if targets else None,
        )
        return cls(
            protocol=protocol,
            num_parties=num_parties,
            rounds=_parse_int("rounds", values["rounds"]),
            seed=_parse_int("seed", values["seed"]),
            eve=eve,
            comparison_fraction=fraction,
            ghz_variant_announce=_parse_bool(values["announce_basis"]),
            initial_labels=_parse_list(values.get("initial_labels")),
            workers=_parse_int("workers", values["workers"]),
        )

    def to_dict(self):
        return {
            'protocol': self.protocol.value,
            'num_parties': self.num_parties,
            'rounds': self.rounds,
            'seed': self.seed,
            'eve': self.eve.to_dict(),
            'comparison_fraction': self.comparison_fraction,
            'ghz_variant_announce': self.ghz_variant_announce,
            'initial_labels': list(self.initial_labels) if self.initial_labels is not None else None,
            'workers': self.workers,
        }


@dataclass
class RoundRecord:
    round_index: int
    protocol: Protocol
    secret_results: Dict[str, str] = field(default_factory=dict)
    public_result: Optional[str] = None
    inferences: Dict[str, Optional[str]] = field(default_factory=dict)
    expected: Dict[str, str] = field(default_factory=dict)
    key: Optional[str] = None
    kept: bool = True
    eve_active: bool = False
    eve_inferred: Optional[str] = None
    eve_view: Optional[Dict[str, Any]] = None  # Eve's bookkeeping for attacked rounds
    detected_mismatch: bool = False
    bases: Dict[str, str] = field(default_factory=dict)
    declarations: List[str] = field(default_factory=list)
    consumed: bool = False

    @staticmethod
    def mismatch(inferences: Mapping[str, Optional[str]], expected: Mapping[str, str]) -> bool:
        """Any inference slot that is missing or differs from its expected bits."""
        return any(inferences.get(slot) != bits for slot, bits in expected.items())

    def to_dict(self):
        return {
            'round_index': self.round_index,
            'protocol': self.protocol.value,
            'secret_results': dict(self.secret_results),
            'public_result': self.public_result,
            'inferences': dict(self.inferences),
            'expected': dict(self.expected),
            'key': self.key,
            'kept': self.kept,
            'eve_active': self.eve_active,
            'eve_inferred': self.eve_inferred,
            'eve_view': self.eve_view,
            'detected_mismatch': self.detected_mismatch,
            'bases': dict(self.bases),
            'declarations': list(self.declarations),
            'consumed': self.consumed,
        }


@dataclass
class CampaignReport:
    config: ProtocolConfig
    rounds: int
    kept: int
    key_bits: int
    tested: int = 0
    mismatches: int = 0
    mismatch_rate: Optional[float] = None
    mismatch_stderr: Optional[float] = None
    alarm: bool = False
    eve_accuracy: Optional[float] = None
    eve_accuracy_stderr: Optional[float] = None
    elapsed_seconds: float = 0.0

    @property
    def keep_rate(self) -> float:
        return self.kept / self.rounds

    def to_dict(self):
        """Convert report to dictionary for JSON responses"""
        return {
            'report_type': 'Campaign Report',
            'config': self.config.to_dict(),
            'protocol': self.config.protocol.value,
            'rounds': self.rounds,
            'kept': self.kept,
            'keep_rate': self.keep_rate,
            'key_bits': self.key_bits,
            'tested': self.tested,
            'mismatches': self.mismatches,
            'mismatch_rate': self.mismatch_rate,
            'mismatch_stderr': self.mismatch_stderr,
            'alarm': self.alarm,
            'eve_accuracy': self.eve_accuracy,
            'eve_accuracy_stderr': self.eve_accuracy_stderr,
            'elapsed_seconds': round(self.elapsed_seconds, 6),
        }
