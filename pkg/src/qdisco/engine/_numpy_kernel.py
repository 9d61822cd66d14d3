"""Pure-NumPy gate kernels. Fallback used when the compiled extension is unavailable.

All functions mutate `state` (a contiguous complex128 array of length 2**n) in
place. Qubit 0 is the most significant bit of the basis index.
"""
from __future__ import annotations

import numpy as np


def apply_unitary1(state, n, q, m00, m01, m10, m11) -> None:
    t = np.moveaxis(state.reshape([2] * n), q, 0)
    a = t[0].copy()
    b = t[1]
    t[0] = m00 * a + m01 * b
    t[1] = m10 * a + m11 * b


def apply_controlled1(state, n, control, target, m00, m01, m10, m11) -> None:
    t = np.moveaxis(state.reshape([2] * n), (control, target), (0, 1))
    a = t[1, 0].copy()
    b = t[1, 1]
    t[1, 0] = m00 * a + m01 * b
    t[1, 1] = m10 * a + m11 * b


def apply_cnot(state, n, control, target) -> None:
    t = np.moveaxis(state.reshape([2] * n), (control, target), (0, 1))
    tmp = t[1, 0].copy()
    t[1, 0] = t[1, 1]
    t[1, 1] = tmp


def project_bit(state, n, q, bit) -> None:
    t = np.moveaxis(state.reshape([2] * n), q, 0)
    t[1 - bit] = 0.0
