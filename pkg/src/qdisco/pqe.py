"""Deterministic word-to-angle encoders (the frozen layer of the few-shot scheme).

Two encoders are provided:

  * BasePQEEncoder broadcasts one Euler triplet per word across the register.
    The triplet comes from the word's reduced 3-vector through a per-coordinate
    affine map fitted on the training vocabulary (min -> 0, max -> pi). Words
    outside the fitted range are clamped into [0, pi]; the scaling itself is
    frozen, so unseen words need no refit.

  * NNPQEEncoder feeds the full embedding through a small feed-forward network
    whose outputs are the rotation angles for a single Circuit4 block. The
    network is trained classically, via SPSA on the mean squared error between
    register fidelities and squared inner products of unit-normalized
    embeddings.

Both maps are pure functions of (frozen artifact, token): repeated calls are
bit-identical, and training the downstream model never mutates them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ansatz import AnsatzSpec, ansatz_gates, layer_param_count
from .embeddings import Vocabulary
from .engine import StateVector, fidelity, overlap, run_gates
from .ir import SCOPE_FROZEN, GateOp, ParamRef
from .training import SPSAConfig, spsa_step

_CIRCUIT4 = AnsatzSpec("Circuit4", 1)
_EULER_AXES = ("Rx", "Ry", "Rz")


class BasePQEEncoder:
    """Frozen Euler-angle map: reduced 3-vector -> (theta_x, theta_y, theta_z),
    replicated on every qubit of a word's register."""

    def __init__(self, vocab: Vocabulary, fit_tokens: Sequence[str] | None = None):
        if vocab.reduced is None:
            raise ValueError("vocabulary has no reduced map; run reduce_dimensions first")
        tokens = sorted(fit_tokens) if fit_tokens is not None else sorted(vocab.reduced)
        missing = [t for t in tokens if t not in vocab.reduced]
        if missing:
            raise KeyError(f"tokens missing from the reduced map: {missing}")
        coords = np.array([vocab.reduced[t] for t in tokens])
        self.vocab = vocab
        self.fit_tokens = tuple(tokens)
        self.mins = coords.min(axis=0)
        self.spans = coords.max(axis=0) - self.mins
        self.frozen_values: dict[ParamRef, float] = {}

    def triplet(self, token: str) -> np.ndarray:
        if self.vocab.reduced is None or token not in self.vocab.reduced:
            raise KeyError(f"token {token!r} has no reduced embedding (OOV at embedding level)")
        coords = self.vocab.reduced[token]
        with np.errstate(invalid="ignore"):
            scaled = np.where(self.spans > 0, (coords - self.mins) / np.where(self.spans > 0, self.spans, 1.0), 0.0)
        return np.clip(scaled * math.pi, 0.0, math.pi)

    def gates(self, token: str, qubits: Sequence[int]) -> list[GateOp]:
        angles = self.triplet(token)
        ops: list[GateOp] = []
        for k, q in enumerate(qubits):
            for axis, kind in enumerate(_EULER_AXES):
                ref = ParamRef(SCOPE_FROZEN, token, 3 * k + axis)
                self.frozen_values[ref] = float(angles[axis])
                ops.append(GateOp(kind, (q,), ref))
        return ops

    def angle_values(self, token: str, width: int) -> dict[ParamRef, float]:
        angles = self.triplet(token)
        return {
            ParamRef(SCOPE_FROZEN, token, 3 * k + axis): float(angles[axis])
            for k in range(width)
            for axis in range(3)
        }

    def register_state(self, token: str, width: int) -> StateVector:
        angles = self.triplet(token)
        ops = [
            GateOp(kind, (q,), float(angles[axis]))
            for q in range(width)
            for axis, kind in enumerate(_EULER_AXES)
        ]
        return run_gates(ops, width)

    def scaling_dump(self) -> str:
        lines = ["coordinate\tmin\tspan"]
        for i, name in enumerate("xyz"):
            lines.append(f"{name}\t{self.mins[i]:.17g}\t{self.spans[i]:.17g}")
        return "\n".join(lines) + "\n"


def base_pqe(encoder: BasePQEEncoder, token: str, width: int) -> list[GateOp]:
    """The frozen gate list (numeric angles) preparing `token` on a width-N register."""
    angles = encoder.triplet(token)
    return [
        GateOp(kind, (q,), float(angles[axis]))
        for q in range(width)
        for axis, kind in enumerate(_EULER_AXES)
    ]


def inner_product_law_check(encoder, token_a: str, token_b: str, width: int) -> tuple[complex, complex]:
    """Register overlap vs the N-th power of the single-qubit overlap.

    For product-state encoders the two agree exactly; returning both lets tests
    assert |lhs - rhs| below tolerance.
    """
    lhs = overlap(encoder.register_state(token_a, width), encoder.register_state(token_b, width))
    single = overlap(encoder.register_state(token_a, 1), encoder.register_state(token_b, 1))
    return lhs, single**width


@dataclass
class FeedForwardNet:
    """One-hidden-layer network v -> angles in [0, 2pi] via pi * (1 + tanh(.))."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    @classmethod
    def create(cls, dim_in: int, hidden: int, dim_out: int, seed: int = 0) -> "FeedForwardNet":
        rng = np.random.default_rng(seed)
        return cls(
            w1=rng.normal(0.0, 1.0 / math.sqrt(dim_in), size=(hidden, dim_in)),
            b1=np.zeros(hidden),
            w2=rng.normal(0.0, 1.0 / math.sqrt(hidden), size=(dim_out, hidden)),
            b2=np.zeros(dim_out),
        )

    @property
    def dim_out(self) -> int:
        return self.w2.shape[0]

    def forward(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.w1.shape[1],):
            raise ValueError(f"expected input of dimension {self.w1.shape[1]}, got {v.shape}")
        hidden = np.tanh(self.w1 @ v + self.b1)
        return math.pi * (1.0 + np.tanh(self.w2 @ hidden + self.b2))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.w1.ravel(), self.b1, self.w2.ravel(), self.b2])

    def set_flat(self, vector: np.ndarray) -> None:
        sizes = [self.w1.size, self.b1.size, self.w2.size, self.b2.size]
        if len(vector) != sum(sizes):
            raise ValueError(f"expected {sum(sizes)} weights, got {len(vector)}")
        chunks = np.split(np.asarray(vector, dtype=float), np.cumsum(sizes)[:-1])
        self.w1 = chunks[0].reshape(self.w1.shape)
        self.b1 = chunks[1]
        self.w2 = chunks[2].reshape(self.w2.shape)
        self.b2 = chunks[3]

    def dump(self) -> str:
        header = f"{self.w1.shape[1]} {self.w1.shape[0]} {self.w2.shape[0]}"
        body = "\n".join(f"{x:.17g}" for x in self.flat())
        return header + "\n" + body + "\n"

    @classmethod
    def load(cls, text: str) -> "FeedForwardNet":
        lines = text.split("\n")
        dim_in, hidden, dim_out = (int(x) for x in lines[0].split())
        net = cls.create(dim_in, hidden, dim_out, seed=0)
        net.set_flat(np.array([float(x) for x in lines[1:] if x.strip()]))
        return net


def nn_forward(net: FeedForwardNet, embedding: np.ndarray, width: int) -> np.ndarray:
    """Angles for a width-N Circuit4 block: the first 3N-1 outputs of the head."""
    count = layer_param_count("Circuit4", width)
    if net.dim_out < count:
        raise ValueError(f"network head ({net.dim_out}) smaller than needed {count} for width {width}")
    return net.forward(embedding)[:count]


def circuit4_state(angles: Sequence[float], width: int) -> StateVector:
    gates = ansatz_gates(_CIRCUIT4, list(range(width)), [float(a) for a in angles])
    return run_gates(gates, width)


class NNPQEEncoder:
    """Frozen network-driven encoder emitting a single Circuit4 block per word."""

    def __init__(self, net: FeedForwardNet, vocab: Vocabulary):
        self.net = net
        self.vocab = vocab
        self.frozen_values: dict[ParamRef, float] = {}

    def _angles(self, token: str, width: int) -> np.ndarray:
        return nn_forward(self.net, self.vocab.vector(token), width)

    def gates(self, token: str, qubits: Sequence[int]) -> list[GateOp]:
        angles = self._angles(token, len(qubits))
        refs = [ParamRef(SCOPE_FROZEN, token, i) for i in range(len(angles))]
        for ref, angle in zip(refs, angles):
            self.frozen_values[ref] = float(angle)
        return ansatz_gates(_CIRCUIT4, list(qubits), refs)

    def angle_values(self, token: str, width: int) -> dict[ParamRef, float]:
        angles = self._angles(token, width)
        return {ParamRef(SCOPE_FROZEN, token, i): float(a) for i, a in enumerate(angles)}

    def register_state(self, token: str, width: int) -> StateVector:
        return circuit4_state(self._angles(token, width), width)


@dataclass
class NNTrainReport:
    epochs: int
    initial_mse: float
    final_mse: float
    seed: int


def pairwise_targets(vectors: np.ndarray) -> np.ndarray:
    """Squared inner products of unit-normalized rows; the values the register
    fidelities are trained to match."""
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise ValueError("cannot normalize a zero embedding")
    unit = vectors / norms
    return (unit @ unit.T) ** 2


def train_nn_pqe(
    net: FeedForwardNet,
    vocab: Vocabulary,
    width: int,
    config: SPSAConfig,
    seed: int = 0,
    tokens: Sequence[str] | None = None,
) -> NNTrainReport:
    """SPSA-fit the network so register fidelities match embedding inner products.

    The loss is the mean over word pairs (i < j) of
    (fidelity(state_i, state_j) - (v_i . v_j)^2)^2 with unit-normalized
    embeddings. The network is left holding the best weights seen.
    """
    names = sorted(tokens) if tokens is not None else sorted(vocab.tokens)
    if len(names) < 2:
        raise ValueError("need at least two words to fit the encoder")
    vectors = np.array([vocab.vector(t) for t in names])
    targets = pairwise_targets(vectors)
    pairs = [(i, j) for i in range(len(names)) for j in range(i + 1, len(names))]

    def loss(flat: np.ndarray) -> float:
        net.set_flat(flat)
        states = [circuit4_state(nn_forward(net, v, width), width) for v in vectors]
        total = 0.0
        for i, j in pairs:
            total += (fidelity(states[i], states[j]) - targets[i, j]) ** 2
        value = total / len(pairs)
        if not np.isfinite(value):
            raise ValueError("non-finite encoder loss")
        return value

    rng = np.random.default_rng(seed)
    theta = net.flat()
    best_theta, best_loss = theta.copy(), loss(theta)
    initial = best_loss
    for k in range(config.epochs):
        theta, _ = spsa_step(theta, loss, config, k, rng)
        current = loss(theta)
        if current < best_loss:
            best_theta, best_loss = theta.copy(), current
    net.set_flat(best_theta)
    return NNTrainReport(epochs=config.epochs, initial_mse=initial, final_mse=best_loss, seed=seed)
