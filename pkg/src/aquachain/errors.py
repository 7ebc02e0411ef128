"""Exception types shared across the simulator."""


class ConfigurationError(ValueError):
    """A config, scenario file or parameter set violates its invariants."""


class EmptyNetworkError(RuntimeError):
    """An operation that needs at least one alive node found none."""


class SimulationComplete(RuntimeError):
    """Raised by run_round when every node is already dead at round entry."""


class ProtocolError(RuntimeError):
    """Packet-level contract violation (e.g. fusing packets of unequal length)."""


class ComparisonError(ValueError):
    """Two simulation results are not comparable (different config or seed)."""
