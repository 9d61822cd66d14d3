"""Exact dense statevector simulation with post-selection.

Conventions, fixed here and assumed by every oracle and consumer:

  * Qubit 0 is the most significant bit of the basis index, so |q0 q1 ... >
    reads left to right off the binary expansion of the amplitude index.
  * R_P(theta) = exp(-i theta P / 2) for P in {X, Y, Z}; controlled rotations
    apply R_P(theta) on the target when the control is 1.
  * Post-selection projects qubits onto outcome 0 sequentially without
    renormalizing; the success probability is the squared norm left at the end.

Two interchangeable kernel backends exist: a compiled extension
(qdisco.engine._kernel, Cython) and a pure-NumPy fallback. The compiled one is
picked at import when present; QDISCO_ENGINE=numpy|cython forces a choice.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ..ir import CircuitIR, GateOp, ParamRef, ParamStore
from . import _numpy_kernel

try:
    from . import _kernel as _cython_kernel
except ImportError:
    _cython_kernel = None

ZERO_SUCCESS_THRESHOLD = 1e-12

_BACKENDS = {"numpy": _numpy_kernel}
if _cython_kernel is not None:
    _BACKENDS["cython"] = _cython_kernel


def _select_initial_backend():
    requested = os.environ.get("QDISCO_ENGINE", "auto").lower()
    if requested == "auto":
        return "cython" if "cython" in _BACKENDS else "numpy"
    if requested not in _BACKENDS:
        available = ", ".join(sorted(_BACKENDS))
        raise ImportError(f"QDISCO_ENGINE={requested!r} not available (have: {available})")
    return requested


_ACTIVE = _select_initial_backend()


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def active_backend() -> str:
    return _ACTIVE


def use_backend(name: str) -> None:
    """Switch gate kernels; mainly for tests and the backend benchmark."""
    global _ACTIVE
    if name == "auto":
        _ACTIVE = "cython" if "cython" in _BACKENDS else "numpy"
        return
    if name not in _BACKENDS:
        available = ", ".join(sorted(_BACKENDS))
        raise ValueError(f"unknown backend {name!r} (have: {available})")
    _ACTIVE = name


def _kern():
    return _BACKENDS[_ACTIVE]


@dataclass
class StateVector:
    """Amplitudes over 2**qubit_count basis states (qubit 0 = most significant bit)."""

    amplitudes: np.ndarray
    qubit_count: int

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2**self.qubit_count,):
            raise ValueError(
                f"expected {2**self.qubit_count} amplitudes for {self.qubit_count} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    @classmethod
    def zero(cls, qubit_count: int) -> "StateVector":
        amps = np.zeros(2**qubit_count, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps, qubit_count)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.qubit_count)


@dataclass
class RunOutcome:
    """Post-selected sentence state plus the probability of surviving post-selection.

    sentence_state is None when the success probability fell below the zero
    threshold; callers decide how to score that (the trainer treats it as a
    max-loss sample, evaluation as a wrong prediction).
    """

    sentence_state: StateVector | None
    success_probability: float

    @property
    def ok(self) -> bool:
        return self.sentence_state is not None


def _apply_op(amps: np.ndarray, n: int, op: GateOp, params: ParamStore | None) -> None:
    kern = _kern()
    kind = op.kind
    if kind == "CNOT":
        kern.apply_cnot(amps, n, op.qubits[0], op.qubits[1])
        return
    if kind == "H":
        r = 1.0 / math.sqrt(2.0)
        kern.apply_unitary1(amps, n, op.qubits[0], r + 0j, r + 0j, r + 0j, -r + 0j)
        return

    if isinstance(op.param, ParamRef):
        if params is None:
            raise ValueError(f"gate {kind} has symbolic parameter {op.param.label()} but no store was given")
        theta = params.resolve(op.param)
    else:
        theta = float(op.param)

    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    if kind == "Rx":
        kern.apply_unitary1(amps, n, op.qubits[0], c + 0j, -1j * s, -1j * s, c + 0j)
    elif kind == "Ry":
        kern.apply_unitary1(amps, n, op.qubits[0], c + 0j, -s + 0j, s + 0j, c + 0j)
    elif kind == "Rz":
        kern.apply_unitary1(amps, n, op.qubits[0], c - 1j * s, 0j, 0j, c + 1j * s)
    elif kind == "CRx":
        kern.apply_controlled1(amps, n, op.qubits[0], op.qubits[1], c + 0j, -1j * s, -1j * s, c + 0j)
    elif kind == "CRz":
        kern.apply_controlled1(amps, n, op.qubits[0], op.qubits[1], c - 1j * s, 0j, 0j, c + 1j * s)
    else:
        raise ValueError(f"unknown gate kind {kind!r}")


def apply_gate(state: StateVector, op: GateOp, params: ParamStore | None = None) -> StateVector:
    """Apply one gate, returning a new StateVector; the input is left untouched."""
    for q in op.qubits:
        if not 0 <= q < state.qubit_count:
            raise ValueError(f"qubit {q} out of range for {state.qubit_count}-qubit state")
    out = state.copy()
    _apply_op(out.amplitudes, out.qubit_count, op, params)
    return out


def run_gates(gates, qubit_count: int, params: ParamStore | None = None) -> StateVector:
    """Apply a gate sequence to |0...0> with no post-selection."""
    state = StateVector.zero(qubit_count)
    for op in gates:
        _apply_op(state.amplitudes, qubit_count, op, params)
    return state


def project_bit(state: StateVector, qubit: int, bit: int) -> StateVector:
    """Project one qubit onto `bit` without renormalizing (amplitudes of the other
    branch are zeroed)."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    out = state.copy()
    _kern().project_bit(out.amplitudes, out.qubit_count, qubit, bit)
    return out


def run(circuit: CircuitIR, params: ParamStore | None = None) -> RunOutcome:
    """Simulate a compiled circuit and post-select every marked qubit on 0.

    The returned sentence state covers circuit.sentence_qubits with the
    lowest-indexed kept qubit as the most significant bit.
    """
    n = circuit.qubit_count
    post = set(circuit.postselect)
    if post | set(circuit.sentence_qubits) != set(range(n)) or post & set(circuit.sentence_qubits):
        raise ValueError("postselect and sentence_qubits must partition the register")

    state = StateVector.zero(n)
    amps = state.amplitudes
    for op in circuit.gates:
        _apply_op(amps, n, op, params)

    kern = _kern()
    for q in circuit.postselect:
        kern.project_bit(amps, n, q, 0)

    success = float(np.vdot(amps, amps).real)
    if not math.isfinite(success) or success < ZERO_SUCCESS_THRESHOLD:
        return RunOutcome(None, success)

    picker = tuple(0 if q in post else slice(None) for q in range(n))
    block = amps.reshape([2] * n)[picker].ravel().copy()
    block /= math.sqrt(success)
    return RunOutcome(StateVector(block, len(circuit.sentence_qubits)), success)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 of two pure states over the same number of qubits."""
    if a.qubit_count != b.qubit_count:
        raise ValueError(f"qubit counts differ: {a.qubit_count} vs {b.qubit_count}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def overlap(a: StateVector, b: StateVector) -> complex:
    """Complex inner product <a|b>."""
    if a.qubit_count != b.qubit_count:
        raise ValueError(f"qubit counts differ: {a.qubit_count} vs {b.qubit_count}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def born_probabilities(state: StateVector) -> np.ndarray:
    """|amplitude|^2 per basis state."""
    return np.abs(state.amplitudes) ** 2
