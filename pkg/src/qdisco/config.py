"""Flat key-value experiment configuration (one experiment per file).

Format: `key = value` lines, `#` comments, blank lines ignored. Relative paths
are resolved against the config file's directory when loaded from disk.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

MODES = ("traditional", "fsl_base", "fsl_nn")

_SPLITS = ("train", "dev", "test", "redundancy", "oov")


@dataclass
class ExperimentConfig:
    ansatz: str = "Sim15"
    layers: int = 1
    q_n: int = 1
    mode: str = "traditional"
    a: float = 0.05
    c: float = 0.06
    A: float | None = None  # None -> 0.01 * epochs
    alpha: float = 0.5
    gamma: float = 0.101
    epochs: int = 500
    batch_size: int = 700
    seeds: tuple[int, ...] = (0,)
    train: str = ""
    dev: str = ""
    test: str = ""
    redundancy: str = ""
    oov: str = ""
    lexicon: str = ""
    embeddings: str = ""
    output_dir: str = ""
    embedding_normalize: bool = False
    nn_hidden: int = 64
    nn_steps: int = 1500
    nn_seed: int = 0
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.seeds:
            raise ValueError("seeds must be non-empty")

    @property
    def store_mode(self) -> str:
        return "traditional" if self.mode == "traditional" else "fsl"

    @property
    def effective_A(self) -> float:
        return 0.01 * self.epochs if self.A is None else self.A

    def resolve(self, value: str) -> Path:
        path = Path(value)
        return path if path.is_absolute() else self.base_dir / path

    def split_paths(self) -> dict[str, Path]:
        return {name: self.resolve(getattr(self, name)) for name in _SPLITS if getattr(self, name)}

    def resolved_output_dir(self) -> Path:
        if self.output_dir:
            return self.resolve(self.output_dir)
        return Path(os.environ.get("QDISCO_OUTPUT_DIR", "qdisco_output"))

    def serialize(self) -> str:
        lines = []
        for f in fields(self):
            if f.name == "base_dir":
                continue
            value = getattr(self, f.name)
            if f.name == "seeds":
                value = ", ".join(str(s) for s in value)
            elif value is None:
                value = ""
            elif isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"


def parse_config(text: str, base_dir: Path = Path(".")) -> ExperimentConfig:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected `key = value`, got {raw!r}")
        values[key.strip()] = value.strip()

    kwargs: dict = {"base_dir": base_dir}
    known = {f.name: f for f in fields(ExperimentConfig) if f.name != "base_dir"}
    for key, value in values.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        kwargs[key] = _convert(key, value)
    return ExperimentConfig(**kwargs)


def _convert(key: str, value: str):
    if key == "seeds":
        return tuple(int(s) for s in value.replace(",", " ").split())
    if key == "A":
        return None if value == "" else float(value)
    if key in ("a", "c", "alpha", "gamma"):
        return float(value)
    if key in ("layers", "q_n", "epochs", "batch_size", "nn_hidden", "nn_steps", "nn_seed"):
        return int(value)
    if key == "embedding_normalize":
        if value.lower() in ("true", "1", "yes"):
            return True
        if value.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"embedding_normalize must be boolean, got {value!r}")
    return value


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)
