"""Statevector engine: compiled gate kernels when built, NumPy fallback otherwise."""
from .core import (
    ZERO_SUCCESS_THRESHOLD,
    RunOutcome,
    StateVector,
    active_backend,
    apply_gate,
    available_backends,
    born_probabilities,
    fidelity,
    overlap,
    project_bit,
    run,
    run_gates,
    use_backend,
)

__all__ = [
    "ZERO_SUCCESS_THRESHOLD",
    "RunOutcome",
    "StateVector",
    "active_backend",
    "apply_gate",
    "available_backends",
    "born_probabilities",
    "fidelity",
    "overlap",
    "project_bit",
    "run",
    "run_gates",
    "use_backend",
]
