# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernel for the stochastic loop engine.

Single-pass C loop replacing the chunked numpy scan; see nadsim._scan_py
for the exact contract.  Outputs are bit-identical to the fallback.
"""

import numpy as np


def scan_chunk(double[::1] p_flip, double[:, ::1] uniforms):
    cdef Py_ssize_t n_traj = uniforms.shape[0]
    cdef Py_ssize_t n_steps = uniforms.shape[1]
    if p_flip.shape[0] != n_steps:
        raise ValueError("p_flip length must match uniforms.shape[1]")

    occupancy_arr = np.zeros(n_steps + 1, dtype=np.int64)
    terminal_arr = np.zeros(n_traj, dtype=np.uint8)
    cdef long long[::1] occupancy = occupancy_arr
    cdef unsigned char[::1] terminal = terminal_arr

    cdef Py_ssize_t i, j
    cdef long long total = 0
    for i in range(n_traj):
        for j in range(n_steps):
            if uniforms[i, j] < p_flip[j]:
                total += 1

    flip_traj_arr = np.empty(total, dtype=np.int64)
    flip_step_arr = np.empty(total, dtype=np.int64)
    cdef long long[::1] flip_traj = flip_traj_arr
    cdef long long[::1] flip_step = flip_step_arr

    cdef long long pos = 0
    cdef int state
    for i in range(n_traj):
        state = 0
        for j in range(n_steps):
            if uniforms[i, j] < p_flip[j]:
                flip_traj[pos] = i
                flip_step[pos] = j
                pos += 1
                state ^= 1
            occupancy[j + 1] += state
        terminal[i] = <unsigned char> state

    return occupancy_arr, terminal_arr, flip_traj_arr, flip_step_arr
