"""Circuit intermediate representation shared by the compiler, engine, and trainer."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

GATE_KINDS = ("H", "Rx", "Ry", "Rz", "CRz", "CRx", "CNOT")
PARAMETRIC_KINDS = frozenset({"Rx", "Ry", "Rz", "CRz", "CRx"})

SCOPE_WORD = "word"
SCOPE_TYPE = "pregroup_type"
SCOPE_FROZEN = "frozen_pqe"


@dataclass(frozen=True, order=True)
class ParamRef:
    """Symbolic parameter handle: scoped to one word, one pregroup type, or a frozen encoding."""

    scope: str
    key: str
    index: int

    def __post_init__(self):
        if self.scope not in (SCOPE_WORD, SCOPE_TYPE, SCOPE_FROZEN):
            raise ValueError(f"unknown parameter scope {self.scope!r}")

    def label(self) -> str:
        return f"{self.scope}:{self.key}:{self.index}"


@dataclass(frozen=True)
class GateOp:
    """One gate application. `param` is a ParamRef, a constant angle, or None for H/CNOT."""

    kind: str
    qubits: tuple[int, ...]
    param: ParamRef | float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        expected = 2 if self.kind in ("CRz", "CRx", "CNOT") else 1
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind} expects {expected} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} qubits must be distinct: {self.qubits}")
        if self.kind in PARAMETRIC_KINDS and self.param is None:
            raise ValueError(f"{self.kind} requires a parameter")
        if self.kind not in PARAMETRIC_KINDS and self.param is not None:
            raise ValueError(f"{self.kind} takes no parameter")


@dataclass
class CircuitIR:
    """Compiled circuit: gate list over a flat qubit register plus post-selection bookkeeping.

    `postselect` qubits are required to measure 0; `sentence_qubits` are the wires
    whose post-selected state is the run output. The two sets must partition the
    register.
    """

    qubit_count: int
    gates: list[GateOp]
    postselect: tuple[int, ...] = ()
    sentence_qubits: tuple[int, ...] = ()
    registers: dict[int, tuple[int, int]] = field(default_factory=dict)

    def validate(self) -> None:
        for op in self.gates:
            for q in op.qubits:
                if not 0 <= q < self.qubit_count:
                    raise ValueError(f"gate {op.kind} uses qubit {q} outside register of {self.qubit_count}")
        post = set(self.postselect)
        sent = set(self.sentence_qubits)
        if post & sent:
            raise ValueError(f"post-selected and sentence qubits overlap: {sorted(post & sent)}")
        if post | sent != set(range(self.qubit_count)):
            raise ValueError("postselect and sentence_qubits must cover every qubit")

    def param_refs(self) -> list[ParamRef]:
        """Distinct ParamRefs in gate order of first appearance."""
        seen: dict[ParamRef, None] = {}
        for op in self.gates:
            if isinstance(op.param, ParamRef):
                seen.setdefault(op.param)
        return list(seen)

    def to_json(self) -> str:
        def enc(op: GateOp):
            if isinstance(op.param, ParamRef):
                p = op.param.label()
            else:
                p = op.param
            return {"gate": op.kind, "qubits": list(op.qubits), "param": p}

        doc = {
            "qubits": self.qubit_count,
            "gates": [enc(op) for op in self.gates],
            "postselect": sorted(self.postselect),
            "sentence_qubits": list(self.sentence_qubits),
            "registers": {str(k): list(v) for k, v in sorted(self.registers.items())},
        }
        return json.dumps(doc, indent=2, sort_keys=True)


class UnresolvedParameterError(KeyError):
    pass


@dataclass
class ParamStore:
    """Angle values keyed by ParamRef.

    mode "traditional": trainable keys are word-scoped.
    mode "fsl": trainable keys are pregroup-type-scoped (the shared W layers);
    frozen_pqe keys are never trainable in either mode.
    """

    mode: str
    values: dict[ParamRef, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("traditional", "fsl"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def _trainable_scope(self) -> str:
        return SCOPE_WORD if self.mode == "traditional" else SCOPE_TYPE

    def resolve(self, param: ParamRef | float) -> float:
        if isinstance(param, ParamRef):
            try:
                return self.values[param]
            except KeyError:
                raise UnresolvedParameterError(param.label()) from None
        return float(param)

    def trainable_keys(self) -> list[ParamRef]:
        scope = self._trainable_scope
        return sorted(r for r in self.values if r.scope == scope)

    def get_trainable(self):
        import numpy as np

        return np.array([self.values[r] for r in self.trainable_keys()], dtype=float)

    def set_trainable(self, vector) -> None:
        keys = self.trainable_keys()
        if len(vector) != len(keys):
            raise ValueError(f"expected {len(keys)} values, got {len(vector)}")
        for ref, val in zip(keys, vector):
            self.values[ref] = float(val)

    def dump(self) -> str:
        lines = [f"{r.scope}\t{r.key}\t{r.index}\t{self.values[r]:.17g}" for r in sorted(self.values)]
        return "\n".join([self.mode] + lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "ParamStore":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty parameter dump")
        store = cls(mode=lines[0].strip())
        for ln in lines[1:]:
            scope, key, index, value = ln.split("\t")
            store.values[ParamRef(scope, key, int(index))] = float(value)
        return store
