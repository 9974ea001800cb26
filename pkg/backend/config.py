import os
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values, load_dotenv

from utils.errors import InvalidArgumentError

load_dotenv()


class Config:
    # Campaign defaults (flags and config files override these)
    DEFAULT_PROTOCOL = os.getenv("SIM_PROTOCOL", "two_party_es")
    DEFAULT_PARTIES = os.getenv("SIM_PARTIES")  # None: the protocol's own party count
    DEFAULT_ROUNDS = int(os.getenv("SIM_ROUNDS", "1000"))
    DEFAULT_SEED = int(os.getenv("SIM_SEED", "0"))
    DEFAULT_EVE = os.getenv("SIM_EVE", "none")
    DEFAULT_EVE_POLICY = os.getenv("SIM_EVE_POLICY", "forward_captured")
    DEFAULT_ANCILLA_LABEL = os.getenv("SIM_ANCILLA_LABEL", "00")
    DEFAULT_COMPARE_FRACTION = float(os.getenv("SIM_COMPARE_FRACTION", "0.5"))
    DEFAULT_WORKERS = int(os.getenv("SIM_WORKERS", "1"))
    DEFAULT_FORMAT = os.getenv("SIM_FORMAT", "text")

    # HTTP report service
    MAX_API_ROUNDS = int(os.getenv("MAX_API_ROUNDS", "20000"))

    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
    CLI_LOG_LEVEL = os.getenv("CLI_LOG_LEVEL", "WARNING").upper()


# Keys accepted in config files and API bodies; they mirror the CLI flag names
SETTING_KEYS = (
    "protocol",
    "parties",
    "rounds",
    "seed",
    "eve",
    "eve_policy",
    "eve_targets",
    "ancilla_label",
    "compare_fraction",
    "announce_basis",
    "initial_labels",
    "workers",
    "format",
)


def default_settings() -> Dict[str, Any]:
    """Built-in defaults after environment / .env overrides."""
    return {
        "protocol": Config.DEFAULT_PROTOCOL,
        "parties": Config.DEFAULT_PARTIES,
        "rounds": Config.DEFAULT_ROUNDS,
        "seed": Config.DEFAULT_SEED,
        "eve": Config.DEFAULT_EVE,
        "eve_policy": Config.DEFAULT_EVE_POLICY,
        "eve_targets": None,
        "ancilla_label": Config.DEFAULT_ANCILLA_LABEL,
        "compare_fraction": Config.DEFAULT_COMPARE_FRACTION,
        "announce_basis": False,
        "initial_labels": None,
        "workers": Config.DEFAULT_WORKERS,
        "format": Config.DEFAULT_FORMAT,
    }


def normalize_settings(raw: Mapping[str, Any]) -> Dict[str, Any]:
    """Lower-case keys, dashes to underscores; unknown keys are rejected."""
    settings = {}
    for key, value in raw.items():
        normalized = str(key).strip().lower().replace("-", "_")
        if normalized not in SETTING_KEYS:
            raise InvalidArgumentError(f"unknown setting {key!r}")
        settings[normalized] = value
    return settings


def load_settings_file(path: str) -> Dict[str, Any]:
    """Read a flat KEY=value config file."""
    if not os.path.isfile(path):
        raise InvalidArgumentError(f"config file not found: {path}")
    return normalize_settings(dotenv_values(path))


def merge_settings(flags: Mapping[str, Any], config_path: Optional[str] = None) -> Dict[str, Any]:
    """Flags > config file > environment > defaults; ``None`` flags are unset."""
    settings = default_settings()
    if config_path:
        settings.update({k: v for k, v in load_settings_file(config_path).items() if v not in (None, "")})
    settings.update({k: v for k, v in normalize_settings(flags).items() if v is not None})
    return settings
