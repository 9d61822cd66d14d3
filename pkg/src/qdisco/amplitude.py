"""Amplitude encoding of signed real vectors via a sign split and an ancilla.

A normalized vector d with entries of either sign is written as
d = d_plus - d_minus with both parts non-negative on disjoint support. The
state |d_plus>|0> + |d_minus>|1> (ancilla last) is physically preparable since
all amplitudes are non-negative; a Hadamard on the ancilla turns the |1> branch
into (|d_plus> - |d_minus>)/sqrt(2), so post-selecting the ancilla on 1
recovers the signed vector exactly, with success probability 1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ansatz import AnsatzSpec, ansatz_gates, ansatz_param_count
from .engine import StateVector, apply_gate, fidelity, project_bit, run_gates
from .ir import GateOp
from .training import SPSAConfig, spsa_step

_NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SignSplit:
    d_plus: np.ndarray
    d_minus: np.ndarray

    @property
    def data(self) -> np.ndarray:
        return self.d_plus - self.d_minus

    @property
    def qubits(self) -> int:
        return int(math.log2(len(self.d_plus)))


def sign_split(data: np.ndarray) -> SignSplit:
    """Split a unit-norm real vector of length 2**n into positive/negative parts."""
    data = np.asarray(data, dtype=float)
    if data.ndim != 1 or len(data) < 2 or len(data) & (len(data) - 1) != 0:
        raise ValueError(f"data length must be a power of two >= 2, got {data.shape}")
    norm = float(np.linalg.norm(data))
    if norm == 0.0:
        raise ValueError("cannot encode the zero vector")
    if abs(norm - 1.0) > _NORM_TOLERANCE:
        raise ValueError(f"data must be normalized to unit norm (got {norm})")
    return SignSplit(d_plus=np.maximum(data, 0.0), d_minus=np.maximum(-data, 0.0))


def _recover_from_state(state: StateVector) -> tuple[StateVector | None, float]:
    """Hadamard the last qubit, post-select it on 1, and return the kept block."""
    n = state.qubit_count
    state = apply_gate(state, GateOp("H", (n - 1,)))
    state = project_bit(state, n - 1, 1)
    success = float(np.vdot(state.amplitudes, state.amplitudes).real)
    if success < 1e-12:
        return None, success
    block = state.amplitudes.reshape([2] * n)[..., 1].ravel() / math.sqrt(success)
    return StateVector(block, n - 1), success


def aae_recover(split: SignSplit) -> tuple[StateVector, float]:
    """Reconstruct the signed vector from its split; returns (state, success prob)."""
    n = split.qubits
    amps = np.zeros(2 ** (n + 1), dtype=np.complex128)
    amps[0::2] = split.d_plus
    amps[1::2] = split.d_minus
    recovered, success = _recover_from_state(StateVector(amps, n + 1))
    if recovered is None:
        raise ValueError("post-selection annihilated the state (zero data?)")
    return recovered, success


def aae_variational_fit(
    target: np.ndarray,
    ansatz: AnsatzSpec,
    config: SPSAConfig,
    seed: int = 0,
) -> tuple[np.ndarray, float]:
    """SPSA-fit an ansatz over n+1 qubits (data + ancilla) so that the
    post-selected branch matches `target`; returns (best params, best fidelity).

    Zero-success parameter points score the maximal loss of 1.
    """
    target = np.asarray(target, dtype=float)
    n = int(math.log2(len(target)))
    if 2**n != len(target):
        raise ValueError("target length must be a power of two")
    if abs(np.linalg.norm(target) - 1.0) > _NORM_TOLERANCE:
        raise ValueError("target must be normalized")
    target_state = StateVector(target.astype(np.complex128), n)

    width = n + 1
    qubits = list(range(width))
    dim = ansatz_param_count(ansatz, width)

    def loss(theta: np.ndarray) -> float:
        state = run_gates(ansatz_gates(ansatz, qubits, [float(t) for t in theta]), width)
        recovered, _ = _recover_from_state(state)
        if recovered is None:
            return 1.0
        return 1.0 - fidelity(recovered, target_state)

    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=dim)
    best_theta, best_loss = theta.copy(), loss(theta)
    for k in range(config.epochs):
        theta, _ = spsa_step(theta, loss, config, k, rng)
        current = loss(theta)
        if current < best_loss:
            best_theta, best_loss = theta.copy(), current
    return best_theta, 1.0 - best_loss
