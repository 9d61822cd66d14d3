"""Ansatz gate templates and compilation of sentence diagrams into circuits.

Ansatz layers on a width-N register:

  IQP:      N Hadamards, then CRz on each nearest-neighbour pair (N-1 parameters).
  Sim15:    N Ry rotations, then a CNOT ring: last->first followed by the
            descending chain i->i+1 (N parameters; the ring degenerates to no
            CNOTs at N=1).
  Circuit4: an Rx row, an Ry row, then a CRx chain i->i+1 (3N-1 parameters;
            width 1 degenerates to Rx+Ry).
  Euler:    Rx, Ry, Rz on a single qubit (3 parameters; width must be 1).

Rotation convention everywhere: R_P(theta) = exp(-i theta P / 2); controlled
rotations apply R_P on the target when the control is 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

from .grammar import PregroupType, SentenceDiagram
from .ir import SCOPE_TYPE, SCOPE_WORD, CircuitIR, GateOp, ParamRef, ParamStore

ANSATZ_KINDS = ("IQP", "Sim15", "Euler", "Circuit4")


@dataclass(frozen=True)
class AnsatzSpec:
    kind: str
    layers: int = 1

    def __post_init__(self):
        if self.kind not in ANSATZ_KINDS:
            raise ValueError(f"unknown ansatz kind {self.kind!r}")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")


@dataclass(frozen=True)
class TypeDimensionMap:
    """Qubits per atomic type; the sentence type s is always one qubit."""

    qubits_per_n: int = 1

    def __post_init__(self):
        if self.qubits_per_n < 1:
            raise ValueError("qubits_per_n must be >= 1")

    @property
    def qubits_per_s(self) -> int:
        return 1

    def atom_width(self, base: str) -> int:
        return self.qubits_per_n if base == "n" else self.qubits_per_s

    def type_width(self, ptype: PregroupType) -> int:
        return sum(self.atom_width(a.base) for a in ptype.atoms)


def layer_param_count(kind: str, width: int) -> int:
    if kind == "IQP":
        return max(width - 1, 0)
    if kind == "Sim15":
        return width
    if kind == "Circuit4":
        return 3 * width - 1 if width > 1 else 2
    if kind == "Euler":
        if width != 1:
            raise ValueError("Euler parameterization is defined for a single qubit only")
        return 3
    raise ValueError(f"unknown ansatz kind {kind!r}")


def ansatz_param_count(spec: AnsatzSpec, width: int) -> int:
    return spec.layers * layer_param_count(spec.kind, width)


def ansatz_gates(spec: AnsatzSpec, qubits: Sequence[int], params: Sequence) -> list[GateOp]:
    """Emit the gate list for `spec` on `qubits`, consuming `params` in emission order.

    Entries of `params` may be numeric angles or ParamRefs.
    """
    width = len(qubits)
    expected = ansatz_param_count(spec, width)
    if len(params) != expected:
        raise ValueError(f"{spec.kind} on width {width} x{spec.layers} layers needs {expected} parameters, got {len(params)}")

    gates: list[GateOp] = []
    it = iter(params)
    for _ in range(spec.layers):
        if spec.kind == "IQP":
            gates.extend(GateOp("H", (q,)) for q in qubits)
            for a, b in zip(qubits, qubits[1:]):
                gates.append(GateOp("CRz", (a, b), next(it)))
        elif spec.kind == "Sim15":
            gates.extend(GateOp("Ry", (q,), next(it)) for q in qubits)
            if width > 1:
                gates.append(GateOp("CNOT", (qubits[-1], qubits[0])))
                for a, b in zip(qubits, qubits[1:]):
                    gates.append(GateOp("CNOT", (a, b)))
        elif spec.kind == "Circuit4":
            gates.extend(GateOp("Rx", (q,), next(it)) for q in qubits)
            gates.extend(GateOp("Ry", (q,), next(it)) for q in qubits)
            for a, b in zip(qubits, qubits[1:]):
                gates.append(GateOp("CRx", (a, b), next(it)))
        else:  # Euler
            q = qubits[0]
            gates.append(GateOp("Rx", (q,), next(it)))
            gates.append(GateOp("Ry", (q,), next(it)))
            gates.append(GateOp("Rz", (q,), next(it)))
    return gates


class PQEEncoder(Protocol):
    """Frozen word-to-gates encoding used in fsl mode (see the pqe module)."""

    def gates(self, token: str, qubits: Sequence[int]) -> list[GateOp]: ...

    def angle_values(self, token: str, width: int) -> dict[ParamRef, float]: ...


def build_word_register(
    token: str,
    ptype: PregroupType,
    qubits: Sequence[int],
    ansatz: AnsatzSpec,
    mode: str,
    pqe: PQEEncoder | None = None,
) -> list[GateOp]:
    """Gates preparing one word's register.

    traditional: the ansatz with word-scoped parameters (occurrences of the same
    word share parameters). fsl: frozen PQE gates followed by the ansatz as the
    trainable W layer with parameters scoped to the word's pregroup type.
    """
    width = len(qubits)
    if mode == "traditional":
        refs = [ParamRef(SCOPE_WORD, token, i) for i in range(ansatz_param_count(ansatz, width))]
        return ansatz_gates(ansatz, qubits, refs)
    if mode == "fsl":
        if pqe is None:
            raise ValueError("fsl mode requires a PQE encoder")
        gates = pqe.gates(token, qubits)
        type_key = str(ptype)
        refs = [ParamRef(SCOPE_TYPE, type_key, i) for i in range(ansatz_param_count(ansatz, width))]
        gates.extend(ansatz_gates(ansatz, qubits, refs))
        return gates
    raise ValueError(f"unknown mode {mode!r}")


def realize_cup(pairs: Sequence[tuple[int, int]]) -> tuple[list[GateOp], list[int]]:
    """Bell-effect wiring for one cup: per qubit pair (a, b), CNOT(a->b) then H(a),
    post-selecting both on 0. Realizes the effect (<00| + <11|)/sqrt(2) per pair."""
    gates: list[GateOp] = []
    postselect: list[int] = []
    for a, b in pairs:
        gates.append(GateOp("CNOT", (a, b)))
        gates.append(GateOp("H", (a,)))
        postselect.extend((a, b))
    return gates, postselect


def compile_diagram(
    diagram: SentenceDiagram,
    ansatz: AnsatzSpec,
    dims: TypeDimensionMap,
    mode: str = "traditional",
    pqe: PQEEncoder | None = None,
) -> CircuitIR:
    """Lay out word registers left to right, prepare each word, and wire the cups.

    The surviving s atom's qubit is the sentence wire; every other qubit is
    post-selected on 0.
    """
    atom_qubits: list[list[int]] = []
    registers: dict[int, tuple[int, int]] = {}
    gates: list[GateOp] = []
    offset = 0
    for w, (token, ptype) in enumerate(diagram.words):
        start = offset
        word_qubits: list[int] = []
        for atom in ptype.atoms:
            width = dims.atom_width(atom.base)
            atom_qubits.append(list(range(offset, offset + width)))
            word_qubits.extend(range(offset, offset + width))
            offset += width
        registers[w] = (start, offset)
        gates.extend(build_word_register(token, ptype, word_qubits, ansatz, mode, pqe))

    postselect: list[int] = []
    for i, j in diagram.cups:
        left, right = atom_qubits[i], atom_qubits[j]
        if len(left) != len(right):
            raise ValueError(f"cup ({i}, {j}) joins registers of widths {len(left)} and {len(right)}")
        cup_gates, cup_post = realize_cup(list(zip(left, right)))
        gates.extend(cup_gates)
        postselect.extend(cup_post)

    sentence_qubits = tuple(atom_qubits[diagram.sentence_atom])
    circuit = CircuitIR(
        qubit_count=offset,
        gates=gates,
        postselect=tuple(sorted(postselect)),
        sentence_qubits=sentence_qubits,
        registers=registers,
    )
    circuit.validate()
    return circuit


def count_trainable(store: ParamStore) -> int:
    """Number of parameters the optimizer updates for this store's mode."""
    return len(store.trainable_keys())
