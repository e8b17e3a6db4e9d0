# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled amplitude stencils for 1- and 2-qubit operators.

Qubit 0 is the most significant bit of the basis index.  A density matrix
of ``n`` qubits is handled as a ``2n``-qubit vector: row qubits first,
column qubits after, so ``U rho U^dagger`` is ``U`` on qubit ``q`` plus
``conj(U)`` on qubit ``n + q``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


cdef inline void _stencil_1q(double complex* psi, Py_ssize_t dim, Py_ssize_t stride,
                             double complex u00, double complex u01,
                             double complex u10, double complex u11) noexcept nogil:
    cdef Py_ssize_t block = 0, i, j
    cdef double complex a0, a1
    while block < dim:
        for i in range(block, block + stride):
            j = i + stride
            a0 = psi[i]
            a1 = psi[j]
            psi[i] = u00 * a0 + u01 * a1
            psi[j] = u10 * a0 + u11 * a1
        block += 2 * stride


cdef inline void _stencil_2q(double complex* psi, Py_ssize_t dim, Py_ssize_t s0, Py_ssize_t s1,
                             const double complex* u) noexcept nogil:
    # u is a row-major 4x4 matrix; local index = 2*bit(q0) + bit(q1)
    cdef Py_ssize_t i, k, r
    cdef Py_ssize_t idx[4]
    cdef double complex a[4]
    cdef double complex acc
    for i in range(dim):
        if (i & s0) or (i & s1):
            continue
        idx[0] = i
        idx[1] = i | s1
        idx[2] = i | s0
        idx[3] = i | s0 | s1
        for k in range(4):
            a[k] = psi[idx[k]]
        for r in range(4):
            acc = 0
            for k in range(4):
                acc = acc + u[4 * r + k] * a[k]
            psi[idx[r]] = acc


def apply_1q(double complex[::1] psi, int n_qubits, int q, const double complex[:, ::1] u):
    """Apply a 2x2 operator to qubit ``q`` of ``psi`` in place."""
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n_qubits - 1 - q)
    with nogil:
        _stencil_1q(&psi[0], dim, stride, u[0, 0], u[0, 1], u[1, 0], u[1, 1])


def apply_2q(double complex[::1] psi, int n_qubits, int q0, int q1, const double complex[:, ::1] u):
    """Apply a 4x4 operator to the ordered pair ``(q0, q1)`` of ``psi`` in place."""
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t s0 = (<Py_ssize_t>1) << (n_qubits - 1 - q0)
    cdef Py_ssize_t s1 = (<Py_ssize_t>1) << (n_qubits - 1 - q1)
    with nogil:
        _stencil_2q(&psi[0], dim, s0, s1, &u[0, 0])


def conjugate_1q(double complex[::1] rho, int n_qubits, int q, const double complex[:, ::1] u):
    """rho -> U rho U^dagger in place, ``rho`` flattened row-major."""
    cdef int total = 2 * n_qubits
    cdef Py_ssize_t dim = rho.shape[0]
    cdef Py_ssize_t sr = (<Py_ssize_t>1) << (total - 1 - q)
    cdef Py_ssize_t sc = (<Py_ssize_t>1) << (n_qubits - 1 - q)
    with nogil:
        _stencil_1q(&rho[0], dim, sr, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        _stencil_1q(&rho[0], dim, sc, u[0, 0].conjugate(), u[0, 1].conjugate(),
                    u[1, 0].conjugate(), u[1, 1].conjugate())


def conjugate_2q(double complex[::1] rho, int n_qubits, int q0, int q1, const double complex[:, ::1] u):
    """rho -> U rho U^dagger in place for a 4x4 ``U`` on ``(q0, q1)``."""
    cdef int total = 2 * n_qubits
    cdef Py_ssize_t dim = rho.shape[0]
    cdef double complex uc[16]
    cdef int k
    for k in range(16):
        uc[k] = u[k // 4, k % 4].conjugate()
    with nogil:
        _stencil_2q(&rho[0], dim, (<Py_ssize_t>1) << (total - 1 - q0),
                    (<Py_ssize_t>1) << (total - 1 - q1), &u[0, 0])
        _stencil_2q(&rho[0], dim, (<Py_ssize_t>1) << (n_qubits - 1 - q0),
                    (<Py_ssize_t>1) << (n_qubits - 1 - q1), uc)


def channel_1q(const double complex[::1] rho, int n_qubits, int q, const double complex[:, :, ::1] kraus):
    """Return sum_k K rho K^dagger for 2x2 Kraus operators on qubit ``q``."""
    cdef Py_ssize_t dim = rho.shape[0]
    cdef Py_ssize_t m, i
    cdef int total = 2 * n_qubits
    cdef Py_ssize_t sr = (<Py_ssize_t>1) << (total - 1 - q)
    cdef Py_ssize_t sc = (<Py_ssize_t>1) << (n_qubits - 1 - q)
    out_arr = np.zeros(dim, dtype=np.complex128)
    tmp_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double complex[::1] tmp = tmp_arr
    cdef const double complex[:, :, ::1] k = kraus
    with nogil:
        for m in range(k.shape[0]):
            for i in range(dim):
                tmp[i] = rho[i]
            _stencil_1q(&tmp[0], dim, sr, k[m, 0, 0], k[m, 0, 1], k[m, 1, 0], k[m, 1, 1])
            _stencil_1q(&tmp[0], dim, sc, k[m, 0, 0].conjugate(), k[m, 0, 1].conjugate(),
                        k[m, 1, 0].conjugate(), k[m, 1, 1].conjugate())
            for i in range(dim):
                out[i] = out[i] + tmp[i]
    return out_arr


def channel_2q(const double complex[::1] rho, int n_qubits, int q0, int q1,
               const double complex[:, :, ::1] kraus):
    """Return sum_k K rho K^dagger for 4x4 Kraus operators on ``(q0, q1)``."""
    cdef Py_ssize_t dim = rho.shape[0]
    cdef Py_ssize_t m, i
    cdef int c, total = 2 * n_qubits
    cdef Py_ssize_t r0 = (<Py_ssize_t>1) << (total - 1 - q0)
    cdef Py_ssize_t r1 = (<Py_ssize_t>1) << (total - 1 - q1)
    cdef Py_ssize_t c0 = (<Py_ssize_t>1) << (n_qubits - 1 - q0)
    cdef Py_ssize_t c1 = (<Py_ssize_t>1) << (n_qubits - 1 - q1)
    cdef double complex kc[16]
    out_arr = np.zeros(dim, dtype=np.complex128)
    tmp_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double complex[::1] tmp = tmp_arr
    cdef const double complex[:, :, ::1] k = kraus
    with nogil:
        for m in range(k.shape[0]):
            for c in range(16):
                kc[c] = k[m, c // 4, c % 4].conjugate()
            for i in range(dim):
                tmp[i] = rho[i]
            _stencil_2q(&tmp[0], dim, r0, r1, &k[m, 0, 0])
            _stencil_2q(&tmp[0], dim, c0, c1, kc)
            for i in range(dim):
                out[i] = out[i] + tmp[i]
    return out_arr


def adam_update(double[::1] a, const double[::1] g, double[::1] m, double[::1] v,
                double alpha, double beta1, double beta2, double eps,
                bint bias_correction, double c1, double c2):
    """Fused in-place Adam step over flat parameter, moment and gradient arrays.

    ``c1``/``c2`` are ``1 - beta**t``; used only with ``bias_correction``.
    """
    cdef Py_ssize_t i, size = a.shape[0]
    cdef double step, denom, gi
    with nogil:
        for i in range(size):
            gi = g[i]
            m[i] = m[i] * beta1 + (1 - beta1) * gi
            v[i] = v[i] * beta2 + (1 - beta2) * (gi * gi)
            if bias_correction:
                step = (m[i] / c1) * alpha
                denom = v[i] / c2 + eps
            else:
                step = m[i] * alpha
                denom = v[i] + eps
            a[i] = a[i] - step / sqrt(denom)
