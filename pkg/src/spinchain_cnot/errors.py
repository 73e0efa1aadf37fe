class SimulationError(Exception):
    """Base class for simulator failures."""


class StateError(SimulationError, ValueError):
    """Density matrix violates a precondition (Hermiticity, trace, shape)."""


class NumericalFailure(SimulationError):
    """Non-finite values appeared during integration."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t={t:.9g} us")
        self.t = t


class IntegrityError(SimulationError):
    """A monitored invariant drifted beyond its hard limit."""


class UnsupportedError(SimulationError):
    pass


class ConfigError(SimulationError, ValueError):
    pass
