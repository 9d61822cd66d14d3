import hashlib

import numpy as np
import pytest

from oracles import meyer_wallach_double_sum
from qdisco.ansatz import AnsatzSpec
from qdisco.diagnostics import (
    FidelityHistogram,
    euler_family,
    expressibility,
    family_from_ansatz,
    fixed_state_family,
    haar_bin_masses,
    haar_fidelity_samples,
    kl_vs_haar,
    meyer_wallach,
    rz_only_family,
    sample_fidelities,
)
from qdisco.engine import StateVector, run_gates
from qdisco.ir import GateOp

BELL = StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2), 2)


def test_constant_circuit_fidelities_are_one():
    family = fixed_state_family(1, [GateOp("H", (0,))])
    fids = sample_fidelities(family, 50, np.random.default_rng(0))
    np.testing.assert_allclose(fids, 1.0, atol=1e-12)


def test_euler_mean_fidelity_matches_haar():
    rng = np.random.default_rng(0)
    fids = sample_fidelities(euler_family(), 5000, rng)
    haar = haar_fidelity_samples(2, 5000, np.random.default_rng(1))
    assert abs(fids.mean() - 0.5) < 0.03  # Haar d=2 mean fidelity is 1/2
    assert abs(fids.mean() - haar.mean()) < 0.03


def test_iqp_fixed_seed_regression_hash():
    rng = np.random.default_rng(0)
    fids = sample_fidelities(family_from_ansatz(AnsatzSpec("IQP", 1), 2), 200, rng)
    digest = hashlib.sha256(np.round(fids, 12).tobytes()).hexdigest()
    assert digest == "1485ec983201d73ecbcd2016c824715330eb226ba815721413c40a4f5ecad0e3"


def test_kl_zero_when_distributions_match():
    edges = np.linspace(0.0, 1.0, 9)
    counts = (haar_bin_masses(2, edges) * 800).round().astype(int)  # uniform for d=2
    hist = FidelityHistogram(edges=edges, counts=counts, sample_size=int(counts.sum()))
    assert kl_vs_haar(hist, 2) == pytest.approx(0.0, abs=1e-9)


def test_kl_all_mass_at_one():
    fids = np.ones(5000)
    hist = FidelityHistogram.from_fidelities(fids, 75)
    kl = kl_vs_haar(hist, 2)
    assert kl > 1.0
    assert kl == pytest.approx(np.log(75), abs=1e-9)  # single bin against mass 1/75


def test_euler_beats_rz_only():
    euler = expressibility(euler_family(), samples=5000, bins=75, seed=0)
    rz = expressibility(rz_only_family(), samples=5000, bins=75, seed=0)
    assert euler.kl_divergence < 0.1
    assert euler.kl_divergence < rz.kl_divergence


def test_haar_masses_integrate_to_one():
    for d in (2, 4, 8, 16):
        edges = np.linspace(0.0, 1.0, 76)
        assert haar_bin_masses(d, edges).sum() == pytest.approx(1.0, abs=1e-9)


def test_haar_monte_carlo_agrees_with_analytic_masses():
    rng = np.random.default_rng(0)
    for d in (2, 4):
        samples = haar_fidelity_samples(d, 100_000, rng)
        counts, edges = np.histogram(samples, bins=75, range=(0.0, 1.0))
        empirical = counts / counts.sum()
        np.testing.assert_allclose(empirical, haar_bin_masses(d, edges), atol=0.02)


def test_kl_decreases_with_sample_size():
    means = {}
    for samples in (500, 5000):
        values = [
            expressibility(euler_family(), samples=samples, bins=75, seed=seed).kl_divergence
            for seed in range(5)
        ]
        means[samples] = np.mean(values)
    assert means[5000] < means[500]


def test_empty_histogram_rejected():
    hist = FidelityHistogram(edges=np.linspace(0, 1, 4), counts=np.zeros(3, dtype=int), sample_size=0)
    with pytest.raises(ValueError, match="empty"):
        kl_vs_haar(hist, 2)


def test_expressibility_report_json_round_trips():
    import json

    report = expressibility(euler_family(), samples=200, bins=10, seed=3)
    doc = json.loads(report.to_json())
    assert doc["samples"] == 200 and doc["bins"] == 10
    assert doc["kl_divergence"] == report.kl_divergence


def test_histogram_csv():
    hist = FidelityHistogram.from_fidelities(np.array([0.1, 0.9, 0.95]), 4)
    lines = hist.to_csv().splitlines()
    assert lines[0] == "bin_lo,bin_hi,count"
    assert len(lines) == 5


def test_meyer_wallach_product_states():
    assert meyer_wallach(StateVector.zero(2)) == pytest.approx(0.0, abs=1e-12)
    plus_zero = run_gates([GateOp("H", (0,))], 2)
    assert meyer_wallach(plus_zero) == pytest.approx(0.0, abs=1e-12)


def test_meyer_wallach_bell_is_one():
    assert meyer_wallach(BELL) == pytest.approx(1.0, abs=1e-9)


def test_meyer_wallach_single_qubit_flagged():
    with pytest.warns(UserWarning, match="single qubit"):
        assert meyer_wallach(StateVector.zero(1)) == 0.0


def test_meyer_wallach_matches_double_sum_oracle():
    rng = np.random.default_rng(5)
    for n in (2, 3, 4):
        amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        amps /= np.linalg.norm(amps)
        state = StateVector(amps, n)
        assert meyer_wallach(state) == pytest.approx(
            meyer_wallach_double_sum(amps, n), abs=1e-10
        )


def test_meyer_wallach_local_unitary_invariance():
    rng = np.random.default_rng(6)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        amps /= np.linalg.norm(amps)
        state = StateVector(amps, n)
        q_before = meyer_wallach(state)
        rotated = state
        for q in range(n):
            for kind in ("Rx", "Ry", "Rz"):
                from qdisco.engine import apply_gate

                rotated = apply_gate(rotated, GateOp(kind, (q,), float(rng.uniform(0, 2 * np.pi))))
        assert meyer_wallach(rotated) == pytest.approx(q_before, abs=1e-9)


def test_sample_count_validation():
    with pytest.raises(ValueError, match="2 samples"):
        sample_fidelities(euler_family(), 1, np.random.default_rng(0))
