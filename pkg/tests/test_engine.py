import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import circuit_unitary, run_oracle
from qdisco.engine import (
    StateVector,
    apply_gate,
    born_probabilities,
    fidelity,
    run,
    run_gates,
    use_backend,
)
from qdisco.ir import CircuitIR, GateOp, ParamRef, ParamStore, UnresolvedParameterError

from oracles import random_circuit_ir


def test_hadamard_on_zero(backend):
    state = run_gates([GateOp("H", (0,))], 1)
    np.testing.assert_allclose(state.amplitudes, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)


def test_cnot_flips_target_when_control_set(backend):
    # |10> via Rx(pi) up to phase, then CNOT -> |11>
    state = run_gates([GateOp("Rx", (0,), np.pi), GateOp("CNOT", (0, 1))], 2)
    probs = born_probabilities(state)
    np.testing.assert_allclose(probs, [0, 0, 0, 1], atol=1e-15)


def test_random_circuit_matches_dense_oracle(backend):
    rng = np.random.default_rng(42)
    circuit = random_circuit_ir(rng, max_qubits=3, max_gates=20, max_postselect=0)
    state = run_gates(circuit.gates, circuit.qubit_count)
    expected = circuit_unitary(circuit.gates, circuit.qubit_count)[:, 0]
    np.testing.assert_allclose(state.amplitudes, expected, atol=1e-10)


def test_run_with_postselection_matches_oracle(backend):
    rng = np.random.default_rng(7)
    for _ in range(25):
        circuit = random_circuit_ir(rng)
        outcome = run(circuit)
        expected_state, expected_success = run_oracle(circuit)
        assert abs(outcome.success_probability - expected_success) < 1e-10
        if expected_state is None:
            assert not outcome.ok
        else:
            np.testing.assert_allclose(outcome.sentence_state.amplitudes, expected_state, atol=1e-10)


def test_backends_agree():
    rng = np.random.default_rng(3)
    circuit = random_circuit_ir(rng, max_qubits=4, max_gates=40, max_postselect=2)
    results = {}
    from qdisco.engine import available_backends

    for name in available_backends():
        use_backend(name)
        results[name] = run(circuit)
    use_backend("auto")
    outcomes = list(results.values())
    for other in outcomes[1:]:
        assert abs(outcomes[0].success_probability - other.success_probability) < 1e-14
        if outcomes[0].ok:
            np.testing.assert_allclose(
                outcomes[0].sentence_state.amplitudes, other.sentence_state.amplitudes, atol=1e-13
            )


def test_norm_preserved_over_ten_thousand_gates():
    rng = np.random.default_rng(0)
    kinds = ["H", "Rx", "Ry", "Rz", "CRz", "CRx", "CNOT"]
    state = StateVector.zero(4)
    for _ in range(10_000):
        kind = kinds[rng.integers(len(kinds))]
        if kind in ("CRz", "CRx", "CNOT"):
            qubits = tuple(int(x) for x in rng.choice(4, size=2, replace=False))
        else:
            qubits = (int(rng.integers(4)),)
        param = float(rng.uniform(0, 2 * np.pi)) if kind not in ("H", "CNOT") else None
        state = apply_gate(state, GateOp(kind, qubits, param))
    assert abs(state.norm() - 1.0) < 1e-9


def test_postselection_order_independence(backend):
    rng = np.random.default_rng(11)
    circuit = random_circuit_ir(rng, max_qubits=4, max_gates=30, max_postselect=2)
    while len(circuit.postselect) < 2:
        circuit = random_circuit_ir(rng, max_qubits=4, max_gates=30, max_postselect=2)
    reversed_post = CircuitIR(
        qubit_count=circuit.qubit_count,
        gates=circuit.gates,
        postselect=tuple(reversed(circuit.postselect)),
        sentence_qubits=circuit.sentence_qubits,
    )
    a = run(circuit)
    b = run(reversed_post)
    assert a.success_probability == pytest.approx(b.success_probability, abs=1e-15)
    np.testing.assert_allclose(a.sentence_state.amplitudes, b.sentence_state.amplitudes, atol=1e-15)


@pytest.mark.parametrize("kind", ["Rx", "Ry", "Rz"])
def test_full_turn_is_global_phase(backend, kind):
    rng = np.random.default_rng(5)
    prep = [GateOp(k, (0,), float(rng.uniform(0, 2 * np.pi))) for k in ("Rx", "Ry", "Rz")]
    state = run_gates(prep, 1)
    turned = apply_gate(state, GateOp(kind, (0,), 2 * np.pi))
    assert fidelity(turned, state) == pytest.approx(1.0, abs=1e-12)


def test_single_hadamard_postselect_born_rule(backend):
    circuit = CircuitIR(1, [GateOp("H", (0,))], postselect=(0,), sentence_qubits=())
    outcome = run(circuit)
    assert outcome.success_probability == pytest.approx(0.5, abs=1e-12)
    assert outcome.sentence_state.qubit_count == 0
    np.testing.assert_allclose(outcome.sentence_state.amplitudes, [1.0], atol=1e-12)


def test_identity_circuit(backend):
    circuit = CircuitIR(1, [], postselect=(), sentence_qubits=(0,))
    outcome = run(circuit)
    assert outcome.success_probability == pytest.approx(1.0)
    np.testing.assert_allclose(outcome.sentence_state.amplitudes, [1, 0])


def test_zero_success_is_flagged(backend):
    # Rx(pi) sends |0> to -i|1>; post-selecting 0 annihilates the state.
    circuit = CircuitIR(2, [GateOp("Rx", (0,), np.pi)], postselect=(0,), sentence_qubits=(1,))
    outcome = run(circuit)
    assert not outcome.ok
    assert outcome.sentence_state is None
    assert outcome.success_probability < 1e-12


def test_fidelity_basics():
    rng = np.random.default_rng(9)
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    amps /= np.linalg.norm(amps)
    psi = StateVector(amps, 2)
    assert fidelity(psi, psi) == pytest.approx(1.0, abs=1e-12)
    zero = StateVector(np.array([1, 0], dtype=complex), 1)
    one = StateVector(np.array([0, 1], dtype=complex), 1)
    assert fidelity(zero, one) == 0.0


def test_fidelity_matches_summation_oracle():
    rng = np.random.default_rng(13)
    a = rng.normal(size=8) + 1j * rng.normal(size=8)
    b = rng.normal(size=8) + 1j * rng.normal(size=8)
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    expected = abs(sum(np.conj(x) * y for x, y in zip(a, b))) ** 2
    assert fidelity(StateVector(a, 3), StateVector(b, 3)) == pytest.approx(expected, abs=1e-12)


def test_fidelity_size_mismatch():
    with pytest.raises(ValueError):
        fidelity(StateVector.zero(1), StateVector.zero(2))


def test_born_probabilities():
    plus = StateVector(np.array([1, 1]) / np.sqrt(2), 1)
    np.testing.assert_allclose(born_probabilities(plus), [0.5, 0.5], atol=1e-12)
    one = StateVector(np.array([0, 1], dtype=complex), 1)
    np.testing.assert_allclose(born_probabilities(one), [0, 1])
    rounded = StateVector(np.array([np.sqrt(0.75), np.sqrt(0.25)]), 1)
    np.testing.assert_allclose(born_probabilities(rounded), [0.75, 0.25], atol=1e-12)
    assert born_probabilities(rounded).sum() == pytest.approx(1.0, abs=1e-9)


def test_apply_gate_out_of_range():
    with pytest.raises(ValueError):
        apply_gate(StateVector.zero(1), GateOp("H", (1,)))


def test_unresolved_parameter():
    ref = ParamRef("word", "cat", 0)
    circuit = CircuitIR(1, [GateOp("Rx", (0,), ref)], sentence_qubits=(0,))
    with pytest.raises(UnresolvedParameterError):
        run(circuit, ParamStore(mode="traditional"))


def test_apply_gate_does_not_mutate_input():
    state = StateVector.zero(1)
    apply_gate(state, GateOp("H", (0,)))
    np.testing.assert_array_equal(state.amplitudes, [1, 0])


@settings(max_examples=30, deadline=None)
@given(
    kind=st.sampled_from(["Rx", "Ry", "Rz"]),
    theta=st.floats(min_value=0, max_value=2 * np.pi),
    qubit=st.integers(min_value=0, max_value=2),
)
def test_rotations_preserve_norm(kind, theta, qubit):
    rng = np.random.default_rng(17)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    amps /= np.linalg.norm(amps)
    out = apply_gate(StateVector(amps, 3), GateOp(kind, (qubit,), theta))
    assert abs(out.norm() - 1.0) < 1e-12
