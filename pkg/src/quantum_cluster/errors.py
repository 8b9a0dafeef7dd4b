"""Exception types shared across the package."""


class QuantumClusterError(Exception):
    """Base class for all package errors."""


class ModelError(QuantumClusterError, ValueError):
    """Invalid spin-model input or inconsistent dimensions."""


class RegionError(QuantumClusterError, ValueError):
    """Inverse temperature outside the convergence disc without an override."""


class ResourceError(QuantumClusterError, MemoryError):
    """A dense operator would exceed the configured dimension cap."""


class NumericError(QuantumClusterError, ArithmeticError):
    """An iterative numerical routine failed to converge."""
