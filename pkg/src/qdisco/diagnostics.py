"""Circuit diagnostics: expressibility against the Haar fidelity distribution,
and the Meyer-Wallach global entanglement measure.

Expressibility is estimated by sampling pairs of parameter vectors uniformly
from [0, 2pi)^dim, histogramming the state fidelities on [0, 1], and taking the
KL divergence against the Haar distribution integrated over the same bins. For
Hilbert dimension d the Haar fidelity density is (d-1)(1-F)^(d-2), so a bin
[lo, hi] carries mass (1-lo)^(d-1) - (1-hi)^(d-1). That analytic form is
cross-checked in the test suite by a Monte Carlo oracle built from normalized
complex Gaussian vectors. Lower KL means a more expressible circuit.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .ansatz import AnsatzSpec, ansatz_gates, ansatz_param_count
from .engine import StateVector, fidelity, run_gates
from .ir import GateOp


@dataclass(frozen=True)
class CircuitFamily:
    """A parameterized state family |psi(theta)> used for fidelity sampling."""

    name: str
    width: int
    param_count: int
    build: Callable[[np.ndarray], list[GateOp]]

    def state(self, params: np.ndarray) -> StateVector:
        return run_gates(self.build(params), self.width)


def family_from_ansatz(spec: AnsatzSpec, width: int) -> CircuitFamily:
    count = ansatz_param_count(spec, width)
    qubits = list(range(width))

    def build(params: np.ndarray) -> list[GateOp]:
        return ansatz_gates(spec, qubits, [float(p) for p in params])

    return CircuitFamily(f"{spec.kind}/L{spec.layers}/w{width}", width, count, build)


def euler_family() -> CircuitFamily:
    return family_from_ansatz(AnsatzSpec("Euler", 1), 1)


def rz_only_family() -> CircuitFamily:
    """A single Rz on |0>; the least expressible one-parameter circuit."""
    return CircuitFamily("RzOnly/w1", 1, 1, lambda p: [GateOp("Rz", (0,), float(p[0]))])


def fixed_state_family(width: int = 1, gates: Sequence[GateOp] = ()) -> CircuitFamily:
    """A parameterless circuit; every sampled fidelity is exactly 1."""
    frozen = list(gates)
    return CircuitFamily(f"Fixed/w{width}", width, 0, lambda p: list(frozen))


def sample_fidelities(family: CircuitFamily, samples: int, rng) -> np.ndarray:
    """`samples` fidelities |<psi(theta)|psi(phi)>|^2 with independent uniform draws."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    out = np.empty(samples)
    for i in range(samples):
        theta = rng.uniform(0.0, 2.0 * np.pi, size=family.param_count)
        phi = rng.uniform(0.0, 2.0 * np.pi, size=family.param_count)
        out[i] = fidelity(family.state(theta), family.state(phi))
    return out


@dataclass
class FidelityHistogram:
    edges: np.ndarray
    counts: np.ndarray
    sample_size: int

    @classmethod
    def from_fidelities(cls, fidelities: np.ndarray, bins: int) -> "FidelityHistogram":
        counts, edges = np.histogram(fidelities, bins=bins, range=(0.0, 1.0))
        return cls(edges=edges, counts=counts, sample_size=int(counts.sum()))

    def to_csv(self) -> str:
        lines = ["bin_lo,bin_hi,count"]
        for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.counts):
            lines.append(f"{lo:.12g},{hi:.12g},{int(c)}")
        return "\n".join(lines) + "\n"


def haar_bin_masses(dimension: int, edges: np.ndarray) -> np.ndarray:
    """Integral of the Haar fidelity pdf (d-1)(1-F)^(d-2) over each bin."""
    if dimension < 2:
        raise ValueError("Hilbert dimension must be >= 2")
    complement = (1.0 - edges) ** (dimension - 1)
    return complement[:-1] - complement[1:]


def kl_vs_haar(hist: FidelityHistogram, dimension: int) -> float:
    """D_KL(empirical || Haar) over the histogram bins, skipping empty bins."""
    if hist.sample_size == 0:
        raise ValueError("empty histogram")
    p_hat = hist.counts / hist.sample_size
    q = haar_bin_masses(dimension, hist.edges)
    mask = hist.counts > 0
    return float(np.sum(p_hat[mask] * np.log(p_hat[mask] / q[mask])))


def haar_fidelity_samples(dimension: int, samples: int, rng) -> np.ndarray:
    """Monte Carlo oracle: fidelities of pairs of Haar-random states, obtained by
    normalizing complex Gaussian vectors (no QR decomposition needed)."""
    shape = (samples, dimension)
    a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    b = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    return np.abs(np.sum(a.conj() * b, axis=1)) ** 2


@dataclass
class ExpressibilityReport:
    family: str
    qubits: int
    layers: int
    samples: int
    bins: int
    kl_divergence: float

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def expressibility(
    family: CircuitFamily,
    samples: int = 5000,
    bins: int = 75,
    seed: int = 0,
    layers: int = 1,
) -> ExpressibilityReport:
    rng = np.random.default_rng(seed)
    fids = sample_fidelities(family, samples, rng)
    hist = FidelityHistogram.from_fidelities(fids, bins)
    kl = kl_vs_haar(hist, 2**family.width)
    return ExpressibilityReport(
        family=family.name,
        qubits=family.width,
        layers=layers,
        samples=samples,
        bins=bins,
        kl_divergence=kl,
    )


def meyer_wallach(state: StateVector) -> float:
    """Global entanglement Q in [0, 1]: 0 on product states, 1 on e.g. Bell pairs.

    Q = (4/N) sum_j D(u_j, v_j) where u_j, v_j are the raw (sub-normalized)
    projections of the state onto qubit j being 0 and 1, and
    D(u, v) = |u|^2 |v|^2 - |<u|v>|^2 (the generalized wedge-product distance).
    """
    n = state.qubit_count
    if n < 2:
        warnings.warn("Meyer-Wallach is undefined for a single qubit; returning 0", stacklevel=2)
        return 0.0
    tensor = state.amplitudes.reshape([2] * n)
    total = 0.0
    for j in range(n):
        moved = np.moveaxis(tensor, j, 0)
        u = moved[0].ravel()
        v = moved[1].ravel()
        uu = float(np.vdot(u, u).real)
        vv = float(np.vdot(v, v).real)
        uv = np.vdot(u, v)
        total += uu * vv - float(abs(uv)) ** 2
    return 4.0 / n * total
