"""SPSA training of circuit parameters against binary cross-entropy, plus
prediction, evaluation, and per-epoch metric logging.

SPSA schedule: a_k = a / (A + k + 1)^alpha, c_k = c / (k + 1)^gamma with the
step counter k counting batches across the whole run. The default exponents are
alpha = 0.5, gamma = 0.101: the slower-than-asymptotic gain decay keeps late
steps large enough for short desk-scale runs (with a = 0.05, c = 0.06, A = 5 a
scalar quadratic contracts from 1 to under 0.05 within 500 steps, which the
textbook 0.602 decay does not achieve).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .engine import born_probabilities, run
from .ir import CircuitIR, ParamRef, ParamStore, SCOPE_FROZEN

log = logging.getLogger(__name__)

BCE_EPSILON = 1e-9
MAX_SAMPLE_LOSS = -float(np.log(BCE_EPSILON))


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SPSAConfig:
    a: float = 0.05
    c: float = 0.06
    A: float = 0.0
    alpha: float = 0.5
    gamma: float = 0.101
    epochs: int = 100
    batch_size: int = 700

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0:
            raise ValueError("a and c must be positive")
        if self.A < 0:
            raise ValueError("A must be non-negative")


@dataclass
class EpochMetrics:
    epoch: int
    seed: int
    train_loss: float
    train_accuracy: float
    dev_accuracy: float


def spsa_step(theta: np.ndarray, loss_fn, config: SPSAConfig, k: int, rng) -> tuple[np.ndarray, bool]:
    """One simultaneous-perturbation update; returns (theta_next, stepped).

    A non-finite loss at either perturbed point skips the update and logs it.
    """
    delta = rng.integers(0, 2, size=theta.shape) * 2 - 1
    ck = config.c / (k + 1) ** config.gamma
    ak = config.a / (config.A + k + 1) ** config.alpha
    loss_plus = loss_fn(theta + ck * delta)
    loss_minus = loss_fn(theta - ck * delta)
    if not (np.isfinite(loss_plus) and np.isfinite(loss_minus)):
        log.warning("SPSA step %d skipped: non-finite loss (%r, %r)", k, loss_plus, loss_minus)
        return theta, False
    grad = (loss_plus - loss_minus) / (2.0 * ck) * delta
    return theta - ak * grad, True


def spsa_minimize(theta0: np.ndarray, loss_fn, config: SPSAConfig, steps: int, rng) -> tuple[np.ndarray, int]:
    """Run `steps` SPSA updates; returns the final point and the skip count."""
    theta = np.asarray(theta0, dtype=float).copy()
    skipped = 0
    for k in range(steps):
        theta, stepped = spsa_step(theta, loss_fn, config, k, rng)
        if not stepped:
            skipped += 1
    return theta, skipped


def predict(circuit: CircuitIR, params: ParamStore) -> tuple[int | None, np.ndarray | None]:
    """Class and Born probabilities of the post-selected sentence qubit.

    The state is rounded to its nearest basis state: argmax probability, ties
    going to class 0. A zero-success outcome returns (None, None).
    """
    if len(circuit.sentence_qubits) != 1:
        raise ValueError("predict requires a single sentence qubit")
    outcome = run(circuit, params)
    if not outcome.ok:
        return None, None
    probs = born_probabilities(outcome.sentence_state)
    label = 0 if probs[0] >= probs[1] else 1
    return label, probs


def bce_loss(probs, label: int, eps: float = BCE_EPSILON) -> float:
    p0, p1 = float(probs[0]), float(probs[1])
    if label == 1:
        return -float(np.log(p1 + eps))
    return -float(np.log(p0 + eps))


def sample_loss(circuit: CircuitIR, label: int, params: ParamStore) -> float:
    """BCE of one sentence; zero-success outcomes score the maximal -log(eps).

    A non-finite success probability (blown-up parameters) propagates as NaN so
    the SPSA step is skipped rather than silently scored as max loss.
    """
    outcome = run(circuit, params)
    if not outcome.ok:
        return MAX_SAMPLE_LOSS if np.isfinite(outcome.success_probability) else float("nan")
    return bce_loss(born_probabilities(outcome.sentence_state), label)


def batch_loss(items, params: ParamStore) -> float:
    return float(np.mean([sample_loss(c, y, params) for c, y in items]))


def evaluate(items, params: ParamStore) -> float:
    """Fraction of correct predictions; zero-success outcomes count as wrong."""
    if not items:
        raise ValueError("empty evaluation split")
    correct = 0
    for circuit, label in items:
        predicted, _ = predict(circuit, params)
        if predicted == label:
            correct += 1
    return correct / len(items)


def init_param_store(
    circuits,
    mode: str,
    rng,
    frozen_values: dict[ParamRef, float] | None = None,
) -> ParamStore:
    """Collect every ParamRef of `circuits` into a store: trainable keys drawn
    uniformly from [0, 2pi), frozen PQE keys taken from `frozen_values`."""
    refs = sorted({ref for circuit in circuits for ref in circuit.param_refs()})
    store = ParamStore(mode=mode)
    frozen_values = frozen_values or {}
    trainable = [r for r in refs if r.scope != SCOPE_FROZEN]
    angles = rng.uniform(0.0, 2.0 * np.pi, size=len(trainable))
    for ref, angle in zip(trainable, angles):
        store.values[ref] = float(angle)
    for ref in refs:
        if ref.scope == SCOPE_FROZEN:
            if ref not in frozen_values:
                raise ValueError(f"no frozen value recorded for {ref.label()}")
            store.values[ref] = float(frozen_values[ref])
    return store


def train(
    items,
    store: ParamStore,
    config: SPSAConfig,
    rng,
    seed: int = 0,
    dev_items=None,
) -> tuple[list[EpochMetrics], ParamStore]:
    """SPSA-train the store's trainable parameters on mean batch BCE.

    One update per batch, shuffling each epoch with `rng`. Only parameters that
    actually appear in `items` are optimized: frozen PQE values are never
    touched, and out-of-vocabulary words keep their seeded initialization
    exactly. Aborts when more than half of an epoch's batches yield non-finite
    losses.
    """
    if not items:
        raise ValueError("empty training corpus")
    items = list(items)
    batch_size = min(config.batch_size, len(items))

    scope = store._trainable_scope
    refs = sorted({r for circuit, _ in items for r in circuit.param_refs() if r.scope == scope})

    def write(theta):
        for ref, value in zip(refs, theta):
            store.values[ref] = float(value)

    def make_loss(batch):
        def loss(theta):
            write(theta)
            return batch_loss(batch, store)

        return loss

    metrics: list[EpochMetrics] = []
    theta = np.array([store.values[r] for r in refs])
    k = 0
    for epoch in range(config.epochs):
        order = rng.permutation(len(items))
        skipped = batches = 0
        for start in range(0, len(items), batch_size):
            batch = [items[i] for i in order[start : start + batch_size]]
            theta, stepped = spsa_step(theta, make_loss(batch), config, k, rng)
            k += 1
            batches += 1
            if not stepped:
                skipped += 1
        if skipped > batches / 2:
            raise TrainingError(f"epoch {epoch}: {skipped}/{batches} batches had non-finite loss")

        write(theta)
        metrics.append(
            EpochMetrics(
                epoch=epoch,
                seed=seed,
                train_loss=batch_loss(items, store),
                train_accuracy=evaluate(items, store),
                dev_accuracy=evaluate(dev_items, store) if dev_items else float("nan"),
            )
        )
    return metrics, store


METRICS_HEADER = "epoch,seed,train_loss,train_acc,dev_acc"


def metrics_to_csv(metrics) -> str:
    lines = [METRICS_HEADER]
    for m in metrics:
        lines.append(
            f"{m.epoch},{m.seed},{m.train_loss:.12g},{m.train_accuracy:.12g},{m.dev_accuracy:.12g}"
        )
    return "\n".join(lines) + "\n"
