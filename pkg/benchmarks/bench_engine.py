"""Benchmark the compiled gate kernels against the pure-NumPy fallback.

Two workloads:
  * raw gate throughput on random circuits at several register sizes;
  * a training-shaped loop (compile the bundled corpus, evaluate the batch
    loss repeatedly), which is what SPSA hammers in practice.

Usage: python benchmarks/bench_engine.py [--gate-circuits 300] [--loss-evals 40]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qdisco import data, grammar
from qdisco.ansatz import AnsatzSpec, TypeDimensionMap, compile_diagram
from qdisco.engine import active_backend, available_backends, run_gates, use_backend
from qdisco.ir import GateOp
from qdisco.training import batch_loss, init_param_store

GATE_KINDS = ["H", "Rx", "Ry", "Rz", "CRz", "CRx", "CNOT"]


def random_circuit(rng, qubits: int, gates: int) -> list[GateOp]:
    ops = []
    for _ in range(gates):
        kind = GATE_KINDS[rng.integers(len(GATE_KINDS))]
        if kind in ("CRz", "CRx", "CNOT"):
            q = tuple(int(x) for x in rng.choice(qubits, size=2, replace=False))
        else:
            q = (int(rng.integers(qubits)),)
        param = float(rng.uniform(0, 2 * np.pi)) if kind not in ("H", "CNOT") else None
        ops.append(GateOp(kind, q, param))
    return ops


def bench_gates(circuits: int) -> dict[str, dict[int, float]]:
    out: dict[str, dict[int, float]] = {}
    for backend in available_backends():
        use_backend(backend)
        out[backend] = {}
        for qubits in (4, 8, 12):
            rng = np.random.default_rng(0)
            batch = [random_circuit(rng, qubits, 60) for _ in range(circuits)]
            start = time.perf_counter()
            for ops in batch:
                run_gates(ops, qubits)
            out[backend][qubits] = time.perf_counter() - start
    return out


def bench_training_loss(evals: int) -> dict[str, float]:
    lexicon = grammar.load_lexicon(data.path("lexicon.tsv"))
    corpus = grammar.load_corpus(data.path("train.tsv"))
    dims = TypeDimensionMap(1)
    spec = AnsatzSpec("Sim15", 1)
    items = []
    for label, sentence in corpus:
        diagram = grammar.parse_sentence(sentence, lexicon)
        items.append((compile_diagram(diagram, spec, dims, "traditional"), label))

    out: dict[str, float] = {}
    for backend in available_backends():
        use_backend(backend)
        store = init_param_store([c for c, _ in items], "traditional", np.random.default_rng(0))
        theta = store.get_trainable()
        start = time.perf_counter()
        for i in range(evals):
            store.set_trainable(theta + 0.01 * i)
            batch_loss(items, store)
        out[backend] = time.perf_counter() - start
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--gate-circuits", type=int, default=300)
    parser.add_argument("--loss-evals", type=int, default=40)
    args = parser.parse_args()

    if len(available_backends()) < 2:
        print("note: compiled kernel not built; only the numpy backend will run")

    gate_times = bench_gates(args.gate_circuits)
    print(f"\nrandom circuits ({args.gate_circuits} x 60 gates), seconds:")
    print(f"{'qubits':>8} " + " ".join(f"{b:>10}" for b in gate_times))
    for qubits in (4, 8, 12):
        row = " ".join(f"{gate_times[b][qubits]:10.3f}" for b in gate_times)
        print(f"{qubits:>8} {row}")
    if "cython" in gate_times and "numpy" in gate_times:
        for qubits in (4, 8, 12):
            speedup = gate_times["numpy"][qubits] / gate_times["cython"][qubits]
            print(f"  {qubits} qubits: cython {speedup:.1f}x faster")

    loss_times = bench_training_loss(args.loss_evals)
    print(f"\ntraining-shaped batch loss ({args.loss_evals} evaluations, q_n=1), seconds:")
    for backend, seconds in loss_times.items():
        print(f"  {backend:>8}: {seconds:.3f}")
    if "cython" in loss_times and "numpy" in loss_times:
        print(f"  cython {loss_times['numpy'] / loss_times['cython']:.1f}x faster")

    use_backend("auto")
    print(f"\nactive backend restored to: {active_backend()}")


if __name__ == "__main__":
    main()
