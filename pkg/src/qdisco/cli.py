"""Command-line surface: train/eval experiments, circuit diagnostics, amplitude
encoding demo, parameter counting, and data utilities."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import grammar
from .amplitude import aae_recover, aae_variational_fit, sign_split
from .ansatz import AnsatzSpec, TypeDimensionMap, ansatz_param_count, layer_param_count
from .config import load_config
from .diagnostics import (
    FidelityHistogram,
    euler_family,
    expressibility,
    family_from_ansatz,
    fixed_state_family,
    rz_only_family,
    sample_fidelities,
)
from .embeddings import export_reduced_csv, load_embeddings, reduce_dimensions
from .experiment import ExperimentError, build_encoder, compile_splits, load_splits, run_experiment
from .ir import ParamStore
from .training import SPSAConfig, evaluate


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ExperimentError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdisco", description=__doc__)
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("train", help="run the training pipeline for every configured seed")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a saved parameter store on one split")
    p.add_argument("--config", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--split", required=True, choices=("train", "dev", "test", "redundancy", "oov"))
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("expressibility", help="KL divergence of sampled fidelities vs Haar")
    p.add_argument("--ansatz", action="append", required=True,
                   help="euler, rz-only, fixed, or one of IQP/Sim15/Circuit4 (repeatable)")
    p.add_argument("--width", type=int, default=1)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--bins", type=int, default=75)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hist-csv", default=None)
    p.set_defaults(func=cmd_expressibility)

    p = sub.add_parser("aae-demo", help="sign-split amplitude encoding round trip")
    p.add_argument("--vector", default="0.5773502691896258,0,0.5773502691896258,-0.5773502691896258")
    p.add_argument("--fit", action="store_true", help="also run the variational SPSA fit")
    p.add_argument("--fit-layers", type=int, default=2)
    p.add_argument("--fit-steps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_aae_demo)

    p = sub.add_parser("counts", help="trainable parameter counts for a lexicon")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--q-n", type=int, default=1)
    p.add_argument("--mode", choices=("traditional", "fsl"), default="fsl")
    p.add_argument("--ansatz", default="Circuit4")
    p.add_argument("--layers", type=int, default=1)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("reduce-embeddings", help="write the 3-d reduction as CSV")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lexicon", default=None, help="restrict to lexicon tokens")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(func=cmd_reduce_embeddings)

    p = sub.add_parser("parse-check", help="parse every corpus line, reporting failures")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_parse_check)

    return parser


def cmd_train(args) -> int:
    config = load_config(args.config)
    out = Path(args.output_dir) if args.output_dir else None
    result = run_experiment(config, workers=args.workers, output_dir=out)
    print(json.dumps(result.summary(), indent=2, sort_keys=True))
    return 0


def cmd_eval(args) -> int:
    config = load_config(args.config)
    lexicon = grammar.load_lexicon(config.resolve(config.lexicon))
    splits = load_splits(config, lexicon)
    if args.split not in splits:
        print(f"error: split {args.split!r} not configured", file=sys.stderr)
        return 1
    encoder = build_encoder(config, splits, lexicon)
    compiled = compile_splits(config, splits, encoder)
    store = ParamStore.load(Path(args.params).read_text())
    accuracy = evaluate(compiled[args.split], store)
    print(json.dumps({"split": args.split, "accuracy": accuracy}))
    return 0


def _named_family(name: str, width: int, layers: int):
    lowered = name.lower()
    if lowered == "euler":
        return euler_family()
    if lowered in ("rz-only", "rz_only", "rzonly"):
        return rz_only_family()
    if lowered == "fixed":
        return fixed_state_family(width)
    canonical = {"iqp": "IQP", "sim15": "Sim15", "circuit4": "Circuit4"}.get(lowered)
    if canonical is None:
        raise ValueError(f"unknown ansatz {name!r}")
    return family_from_ansatz(AnsatzSpec(canonical, layers), width)


def cmd_expressibility(args) -> int:
    reports = []
    for name in args.ansatz:
        family = _named_family(name, args.width, args.layers)
        report = expressibility(family, samples=args.samples, bins=args.bins, seed=args.seed, layers=args.layers)
        reports.append(report)
        if args.hist_csv:
            rng = np.random.default_rng(args.seed)
            fids = sample_fidelities(family, args.samples, rng)
            hist = FidelityHistogram.from_fidelities(fids, args.bins)
            Path(args.hist_csv).write_text(hist.to_csv())
    print(json.dumps([r.__dict__ for r in reports], indent=2, sort_keys=True))
    return 0


def cmd_aae_demo(args) -> int:
    data = np.array([float(x) for x in args.vector.split(",")])
    data = data / np.linalg.norm(data)
    split = sign_split(data)
    recovered, success = aae_recover(split)
    print("input:    ", np.array2string(data, precision=10))
    print("recovered:", np.array2string(recovered.amplitudes.real, precision=10))
    print(f"success probability: {success:.10f}")
    print(f"max entrywise error: {np.abs(recovered.amplitudes.real - data).max():.3e}")
    if args.fit:
        config = SPSAConfig(a=0.2, c=0.2, A=0.01 * args.fit_steps, epochs=args.fit_steps)
        _, fidelity = aae_variational_fit(data, AnsatzSpec("Circuit4", args.fit_layers), config, seed=args.seed)
        print(f"variational fit fidelity: {fidelity:.6f}")
    return 0


def cmd_counts(args) -> int:
    lexicon = grammar.load_lexicon(args.lexicon)
    dims = TypeDimensionMap(args.q_n)
    ansatz = AnsatzSpec(args.ansatz, args.layers)
    report: dict = {"mode": args.mode, "ansatz": args.ansatz, "layers": args.layers, "q_n": args.q_n}
    if args.mode == "fsl":
        per_type = {}
        for entry in lexicon.values():
            width = dims.type_width(entry.type)
            per_type[entry.part_of_speech] = {
                "width": width,
                "trainable": args.layers * layer_param_count(ansatz.kind, width),
            }
        report["per_type"] = dict(sorted(per_type.items()))
        report["total"] = sum(v["trainable"] for v in per_type.values())
    else:
        per_word = {
            entry.token: ansatz_param_count(ansatz, dims.type_width(entry.type))
            for entry in lexicon.values()
        }
        report["words"] = len(per_word)
        report["total"] = sum(per_word.values())
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def cmd_reduce_embeddings(args) -> int:
    tokens = None
    if args.lexicon:
        tokens = set(grammar.load_lexicon(args.lexicon))
    vocab, missing = load_embeddings(args.embeddings, tokens=tokens)
    if missing:
        print(f"warning: missing from embeddings: {sorted(missing)}", file=sys.stderr)
    reduce_dimensions(vocab, normalize=args.normalize)
    export_reduced_csv(vocab, args.out)
    print(f"wrote {len(vocab)} reduced vectors to {args.out}")
    return 0


def cmd_parse_check(args) -> int:
    lexicon = grammar.load_lexicon(args.lexicon)
    failures = 0
    for lineno, (label, sentence) in enumerate(grammar.load_corpus(args.corpus), start=1):
        try:
            diagram = grammar.parse_sentence(sentence, lexicon)
        except grammar.ParseError as exc:
            failures += 1
            print(f"{lineno}: FAIL ({exc})")
            continue
        if args.verbose:
            print(f"{lineno}: OK label={label} cups={list(diagram.cups)}")
        else:
            print(f"{lineno}: OK")
    if failures:
        print(f"{failures} sentence(s) failed to parse", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
