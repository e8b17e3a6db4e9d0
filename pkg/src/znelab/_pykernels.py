"""Numpy implementation of the amplitude stencils.

Same signatures and in-place semantics as the compiled ``_ckernels``
module; used when the extension is unavailable or ``ZNELAB_PURE=1``.
"""

import numpy as np


def _apply_local(psi, total, qubits, u):
    k = len(qubits)
    view = psi.reshape([2] * total)
    moved = np.moveaxis(view, qubits, range(k))
    shape = moved.shape
    out = u @ moved.reshape(2**k, -1)
    view[...] = np.moveaxis(out.reshape(shape), range(k), qubits)


def apply_1q(psi, n_qubits, q, u):
    _apply_local(psi, n_qubits, [q], u)


def apply_2q(psi, n_qubits, q0, q1, u):
    _apply_local(psi, n_qubits, [q0, q1], u)


def conjugate_1q(rho, n_qubits, q, u):
    total = 2 * n_qubits
    _apply_local(rho, total, [q], u)
    _apply_local(rho, total, [n_qubits + q], u.conj())


def conjugate_2q(rho, n_qubits, q0, q1, u):
    total = 2 * n_qubits
    _apply_local(rho, total, [q0, q1], u)
    _apply_local(rho, total, [n_qubits + q0, n_qubits + q1], u.conj())


def channel_1q(rho, n_qubits, q, kraus):
    out = np.zeros_like(rho)
    for k in kraus:
        tmp = rho.copy()
        conjugate_1q(tmp, n_qubits, q, k)
        out += tmp
    return out


def channel_2q(rho, n_qubits, q0, q1, kraus):
    out = np.zeros_like(rho)
    for k in kraus:
        tmp = rho.copy()
        conjugate_2q(tmp, n_qubits, q0, q1, k)
        out += tmp
    return out


def adam_update(a, g, m, v, alpha, beta1, beta2, eps, bias_correction, c1, c2):
    m *= beta1
    m += (1 - beta1) * g
    v *= beta2
    v += (1 - beta2) * (g * g)
    if bias_correction:
        step = (m / c1) * alpha
        denom = v / c2
    else:
        step = m * alpha
        denom = v + 0.0
    denom += eps
    np.sqrt(denom, out=denom)
    step /= denom
    a -= step
