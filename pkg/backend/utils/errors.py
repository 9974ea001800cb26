"""
Simulation Errors
Exception hierarchy shared by the simulator, the CLI and the HTTP layer.
"""


class SimulationError(Exception):
    """Base class for every error raised by the simulator."""


class InvalidArgumentError(SimulationError, ValueError):
    """Bad input: unknown qubit, malformed label, name collision, bad config."""


class ConsistencyError(SimulationError, RuntimeError):
    """An internal invariant (normalization, completeness) no longer holds."""


class CapacityError(SimulationError):
    """The requested register does not fit the statevector cap."""


class ProtocolViolationError(SimulationError):
    """Protocol rules broken: out-of-order declaration, inputs absent from a table."""


class InsufficientSharesError(ProtocolViolationError):
    """A cooperative inference was attempted without every required share."""
