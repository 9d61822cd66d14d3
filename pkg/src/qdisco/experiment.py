"""End-to-end experiment pipeline behind the CLI.

Loads corpus/lexicon/embeddings, fits the requested frozen encoder, compiles
every split up front (so out-of-vocabulary words get their parameters at
initialization and are simply never updated by training), then trains and
evaluates once per seed. Per-seed artifacts: metrics_seed<k>.csv and
params_seed<k>.dat; a summary.json aggregates accuracies and the trainable
parameter count.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import grammar
from .ansatz import AnsatzSpec, TypeDimensionMap, compile_diagram, count_trainable
from .config import ExperimentConfig
from .embeddings import Vocabulary, export_reduced_csv, load_embeddings, reduce_dimensions
from .ir import CircuitIR, ParamStore
from .pqe import BasePQEEncoder, FeedForwardNet, NNPQEEncoder, train_nn_pqe
from .training import EpochMetrics, SPSAConfig, evaluate, init_param_store, metrics_to_csv, train


class ExperimentError(RuntimeError):
    """Input validation failed; carries one message per offending line/file."""

    def __init__(self, problems: list[str]):
        super().__init__("\n".join(problems))
        self.problems = problems


@dataclass
class SeedResult:
    seed: int
    metrics: list[EpochMetrics]
    store: ParamStore
    accuracies: dict[str, float]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trainable_parameters: int
    seed_results: list[SeedResult]

    def mean_accuracies(self) -> dict[str, float]:
        splits = self.seed_results[0].accuracies.keys()
        return {
            split: float(np.mean([r.accuracies[split] for r in self.seed_results]))
            for split in splits
        }

    def summary(self) -> dict:
        return {
            "mode": self.config.mode,
            "ansatz": self.config.ansatz,
            "layers": self.config.layers,
            "q_n": self.config.q_n,
            "epochs": self.config.epochs,
            "seeds": list(self.config.seeds),
            "trainable_parameters": self.trainable_parameters,
            "per_seed": {str(r.seed): r.accuracies for r in self.seed_results},
            "mean_accuracy": self.mean_accuracies(),
        }


def load_splits(config: ExperimentConfig, lexicon) -> dict[str, list[tuple[int, grammar.SentenceDiagram]]]:
    """Parse every configured split; collect all failures before giving up."""
    problems: list[str] = []
    splits: dict[str, list[tuple[int, grammar.SentenceDiagram]]] = {}
    for name, path in config.split_paths().items():
        if not path.exists():
            problems.append(f"{name}: file not found: {path}")
            continue
        parsed = []
        for lineno, (label, sentence) in enumerate(grammar.load_corpus(path), start=1):
            try:
                parsed.append((label, grammar.parse_sentence(sentence, lexicon)))
            except grammar.ParseError as exc:
                problems.append(f"{name}:{lineno}: {exc}")
        splits[name] = parsed
    if problems:
        raise ExperimentError(problems)
    if "train" not in splits or not splits["train"]:
        raise ExperimentError(["train split is missing or empty"])
    return splits


def build_vocabulary(config: ExperimentConfig, needed_tokens: set[str]) -> Vocabulary:
    path = config.resolve(config.embeddings)
    if not path.exists():
        raise ExperimentError([f"embeddings file not found: {path}"])
    vocab, missing = load_embeddings(path, tokens=needed_tokens)
    if missing:
        raise ExperimentError([f"embeddings missing for tokens: {sorted(missing)}"])
    return vocab


def build_encoder(config: ExperimentConfig, splits, lexicon):
    """The frozen word encoder for the configured mode (None for traditional)."""
    if config.mode == "traditional":
        return None
    used_tokens = {
        token for items in splits.values() for _, diagram in items for token, _ in diagram.words
    }
    vocab = build_vocabulary(config, used_tokens)
    if config.mode == "fsl_base":
        reduce_dimensions(vocab, normalize=config.embedding_normalize)
        train_tokens = sorted(
            {token for _, diagram in splits["train"] for token, _ in diagram.words}
        )
        return BasePQEEncoder(vocab, fit_tokens=train_tokens)
    # fsl_nn: one head sized for the widest pregroup type, sliced per width
    dims = TypeDimensionMap(config.q_n)
    max_width = max(dims.type_width(entry.type) for entry in lexicon.values())
    net = FeedForwardNet.create(vocab.dimension, config.nn_hidden, 3 * max_width - 1, seed=config.nn_seed)
    nn_config = SPSAConfig(
        a=config.a,
        c=config.c,
        A=0.01 * config.nn_steps,
        alpha=config.alpha,
        gamma=config.gamma,
        epochs=config.nn_steps,
        batch_size=config.batch_size,
    )
    train_nn_pqe(net, vocab, max_width, nn_config, seed=config.nn_seed)
    return NNPQEEncoder(net, vocab)


def compile_splits(config: ExperimentConfig, splits, encoder) -> dict[str, list[tuple[CircuitIR, int]]]:
    ansatz = AnsatzSpec(config.ansatz, config.layers)
    dims = TypeDimensionMap(config.q_n)
    mode = config.store_mode
    compiled: dict[str, list[tuple[CircuitIR, int]]] = {}
    for name, items in splits.items():
        compiled[name] = [
            (compile_diagram(diagram, ansatz, dims, mode, pqe=encoder), label)
            for label, diagram in items
        ]
    return compiled


def run_seed(seed: int, config: ExperimentConfig, compiled, frozen_values) -> SeedResult:
    all_circuits = [circuit for items in compiled.values() for circuit, _ in items]
    rng = np.random.default_rng(seed)
    store = init_param_store(all_circuits, config.store_mode, rng, frozen_values)
    spsa = SPSAConfig(
        a=config.a,
        c=config.c,
        A=config.effective_A,
        alpha=config.alpha,
        gamma=config.gamma,
        epochs=config.epochs,
        batch_size=config.batch_size,
    )
    metrics, store = train(
        compiled["train"],
        store,
        spsa,
        rng,
        seed=seed,
        dev_items=compiled.get("dev"),
    )
    accuracies = {name: evaluate(items, store) for name, items in compiled.items()}
    return SeedResult(seed=seed, metrics=metrics, store=store, accuracies=accuracies)


def run_experiment(config: ExperimentConfig, workers: int = 1, output_dir: Path | None = None) -> ExperimentResult:
    lexicon_path = config.resolve(config.lexicon)
    if not lexicon_path.exists():
        raise ExperimentError([f"lexicon file not found: {lexicon_path}"])
    lexicon = grammar.load_lexicon(lexicon_path)

    splits = load_splits(config, lexicon)
    encoder = build_encoder(config, splits, lexicon)
    compiled = compile_splits(config, splits, encoder)
    frozen_values = dict(encoder.frozen_values) if encoder is not None else {}

    out = output_dir if output_dir is not None else config.resolved_output_dir()
    out.mkdir(parents=True, exist_ok=True)

    if workers <= 1:
        results = [run_seed(seed, config, compiled, frozen_values) for seed in config.seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_seed, s, config, compiled, frozen_values) for s in config.seeds]
            results = [f.result() for f in futures]

    for result in results:
        (out / f"metrics_seed{result.seed}.csv").write_text(metrics_to_csv(result.metrics))
        (out / f"params_seed{result.seed}.dat").write_text(result.store.dump())

    if encoder is not None:
        _write_encoder_artifacts(encoder, out)

    experiment = ExperimentResult(
        config=config,
        trainable_parameters=count_trainable(results[0].store),
        seed_results=results,
    )
    (out / "summary.json").write_text(json.dumps(experiment.summary(), indent=2, sort_keys=True))
    return experiment


def _write_encoder_artifacts(encoder, out: Path) -> None:
    if isinstance(encoder, BasePQEEncoder):
        export_reduced_csv(encoder.vocab, out / "reduced_embeddings.csv")
        (out / "base_scaling.txt").write_text(encoder.scaling_dump())
    elif isinstance(encoder, NNPQEEncoder):
        (out / "nn_weights.txt").write_text(encoder.net.dump())
