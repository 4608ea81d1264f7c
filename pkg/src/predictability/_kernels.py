"""
Hot inner loops of the circuit simulator.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical semantics. The public names (``apply_1q``,
``apply_cnot``, ``flip_bits``) are bound at import time to the numba path
unless numba is missing or ``PREDICTABILITY_NO_NUMBA`` is set to a truthy
value, in which case the numpy path is used.

All kernels act on a flat complex vector whose index bit ``q`` is qubit ``q``
(qubit 0 is the least significant bit). They mutate their first argument in
place and return it.
"""

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return decorator


def _env_disables_numba():
    flag = os.environ.get("PREDICTABILITY_NO_NUMBA", "")
    return flag.strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = NUMBA_AVAILABLE and not _env_disables_numba()
BACKEND = "numba" if USE_NUMBA else "numpy"


# ----------------------------------------------------------------------------
# numba path
# ----------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def apply_1q_numba(state, u, qubit):
    n = state.shape[0]
    stride = 1 << qubit
    u00, u01, u10, u11 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    for base in range(0, n, 2 * stride):
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            a0 = state[i0]
            a1 = state[i1]
            state[i0] = u00 * a0 + u01 * a1
            state[i1] = u10 * a0 + u11 * a1
    return state


@njit(cache=True, nogil=True)
def apply_cnot_numba(state, control, target):
    n = state.shape[0]
    cmask = 1 << control
    tmask = 1 << target
    for i in range(n):
        # visit each swapped pair once, from its target-bit-0 member
        if (i & cmask) and not (i & tmask):
            j = i | tmask
            tmp = state[i]
            state[i] = state[j]
            state[j] = tmp
    return state


@njit(cache=True, nogil=True)
def flip_bits_numba(outcomes, uniforms, rate):
    shots, nbits = uniforms.shape
    for s in range(shots):
        v = outcomes[s]
        for b in range(nbits):
            if uniforms[s, b] < rate:
                v ^= 1 << b
        outcomes[s] = v
    return outcomes


# ----------------------------------------------------------------------------
# numpy path
# ----------------------------------------------------------------------------


def apply_1q_numpy(state, u, qubit):
    n = state.shape[0]
    stride = 1 << qubit
    view = state.reshape(n // (2 * stride), 2, stride)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :].copy()
    view[:, 0, :] = u[0, 0] * a0 + u[0, 1] * a1
    view[:, 1, :] = u[1, 0] * a0 + u[1, 1] * a1
    return state


def apply_cnot_numpy(state, control, target):
    idx = np.arange(state.shape[0])
    i = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
    j = i | (1 << target)
    state[i], state[j] = state[j], state[i].copy()
    return state


def flip_bits_numpy(outcomes, uniforms, rate):
    nbits = uniforms.shape[1]
    weights = np.left_shift(1, np.arange(nbits), dtype=outcomes.dtype)
    mask = ((uniforms < rate).astype(outcomes.dtype) * weights).sum(axis=1)
    outcomes ^= mask.astype(outcomes.dtype)
    return outcomes


if USE_NUMBA:
    apply_1q = apply_1q_numba
    apply_cnot = apply_cnot_numba
    flip_bits = flip_bits_numba
else:
    apply_1q = apply_1q_numpy
    apply_cnot = apply_cnot_numpy
    flip_bits = flip_bits_numpy
