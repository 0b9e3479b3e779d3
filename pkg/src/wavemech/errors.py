"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A scenario, grid or CLI parameter is invalid or inconsistent."""


class PropagationDivergedError(RuntimeError):
    """The wave field picked up NaN/Inf amplitudes during propagation."""
