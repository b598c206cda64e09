"""Exception types shared across the simulator."""


class ConfigurationError(ValueError):
    """Invalid user-supplied configuration (field layout, run parameters, CLI flags)."""


class InvariantViolation(RuntimeError):
    """Simulation state broke a structural invariant (e.g. two ball holders)."""
