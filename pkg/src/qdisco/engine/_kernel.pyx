# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate kernels: in-place updates of a complex128 statevector.

Same contract as _numpy_kernel: qubit 0 is the most significant bit of the
basis index, `state` has length 2**n and is mutated in place.
"""


def apply_unitary1(double complex[::1] state, int n, int q,
                   double complex m00, double complex m01,
                   double complex m10, double complex m11):
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t stride = 1 << (n - 1 - q)
    cdef Py_ssize_t base = 0
    cdef Py_ssize_t off, i0, i1
    cdef double complex a, b
    while base < size:
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            a = state[i0]
            b = state[i1]
            state[i0] = m00 * a + m01 * b
            state[i1] = m10 * a + m11 * b
        base += 2 * stride


def apply_controlled1(double complex[::1] state, int n, int control, int target,
                      double complex m00, double complex m01,
                      double complex m10, double complex m11):
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t cmask = 1 << (n - 1 - control)
    cdef Py_ssize_t tmask = 1 << (n - 1 - target)
    cdef Py_ssize_t i, i1
    cdef double complex a, b
    for i in range(size):
        if (i & cmask) != 0 and (i & tmask) == 0:
            i1 = i | tmask
            a = state[i]
            b = state[i1]
            state[i] = m00 * a + m01 * b
            state[i1] = m10 * a + m11 * b


def apply_cnot(double complex[::1] state, int n, int control, int target):
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t cmask = 1 << (n - 1 - control)
    cdef Py_ssize_t tmask = 1 << (n - 1 - target)
    cdef Py_ssize_t i, i1
    cdef double complex tmp
    for i in range(size):
        if (i & cmask) != 0 and (i & tmask) == 0:
            i1 = i | tmask
            tmp = state[i]
            state[i] = state[i1]
            state[i1] = tmp


def project_bit(double complex[::1] state, int n, int q, int bit):
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t shift = n - 1 - q
    cdef Py_ssize_t i
    for i in range(size):
        if ((i >> shift) & 1) != bit:
            state[i] = 0.0
