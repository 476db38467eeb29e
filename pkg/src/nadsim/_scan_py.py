"""Pure-numpy fallback for the stochastic loop scan kernel.

Contract shared with the compiled variant (nadsim._scan):

    scan_chunk(p_flip, uniforms) -> (occupancy, terminal, flip_traj, flip_step)

* p_flip    -- (S,) per-step flip probabilities,
* uniforms  -- (C, S) one uniform variate per trajectory and step,
* occupancy -- (S+1,) int64 count of trajectories sitting in the excited
               dressed state at each grid point (index 0 is the start,
               always ground, so occupancy[0] == 0),
* terminal  -- (C,) uint8 state at the last grid point (0 ground, 1 excited),
* flip_traj/flip_step -- int64 event coordinates sorted by (trajectory, step).

A trajectory flips its dressed-state identity at step j exactly when
uniforms[c, j] < p_flip[j]; the flip takes effect at grid point j+1.  Both
implementations consume the identical uniform stream in the same order,
so their outputs are bit-identical.
"""

import numpy as np


def scan_chunk(p_flip, uniforms):
    p = np.asarray(p_flip, dtype=np.float64)
    u = np.asarray(uniforms, dtype=np.float64)
    if u.ndim != 2 or p.shape != (u.shape[1],):
        raise ValueError("p_flip length must match uniforms.shape[1]")
    flips = u < p[None, :]
    parity = np.bitwise_and(np.cumsum(flips, axis=1, dtype=np.int64), 1)
    occupancy = np.zeros(u.shape[1] + 1, dtype=np.int64)
    occupancy[1:] = parity.sum(axis=0, dtype=np.int64)
    terminal = parity[:, -1].astype(np.uint8)
    flip_traj, flip_step = np.nonzero(flips)
    return occupancy, terminal, flip_traj.astype(np.int64), flip_step.astype(np.int64)
