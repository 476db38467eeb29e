"""Backend equivalence: the compiled scan must match the numpy fallback
bit for bit, and both must match a direct per-trajectory reference."""

import numpy as np
import pytest

from nadsim import _scan_py, kernels


def reference_scan(p_flip, uniforms):
    """Straightforward per-trajectory walk, the slow oracle."""
    n_traj, n_steps = uniforms.shape
    occupancy = np.zeros(n_steps + 1, dtype=np.int64)
    terminal = np.zeros(n_traj, dtype=np.uint8)
    traj_idx, step_idx = [], []
    for i in range(n_traj):
        state = 0
        for j in range(n_steps):
            if uniforms[i, j] < p_flip[j]:
                traj_idx.append(i)
                step_idx.append(j)
                state ^= 1
            occupancy[j + 1] += state
        terminal[i] = state
    return (occupancy, terminal,
            np.array(traj_idx, dtype=np.int64), np.array(step_idx, dtype=np.int64))


def cases():
    rng = np.random.default_rng(99)
    yield rng.random(40) * 0.3, rng.random((25, 40))            # moderate rates
    yield np.zeros(15), rng.random((10, 15))                    # never flips
    yield np.ones(15), rng.random((10, 15))                     # always flips
    yield rng.random(5) * 0.9, rng.random((1, 5))               # single trajectory
    p = np.zeros(30)
    p[::7] = 0.8                                                # sparse bursts
    yield p, rng.random((12, 30))


@pytest.mark.parametrize("name", sorted(kernels.available_backends()))
def test_backend_matches_reference(name):
    fn = kernels.available_backends()[name]
    for p_flip, uniforms in cases():
        got = fn(np.ascontiguousarray(p_flip), np.ascontiguousarray(uniforms))
        want = reference_scan(p_flip, uniforms)
        for g, w in zip(got, want):
            assert np.array_equal(g, w)


def test_backends_agree_bit_for_bit():
    backends = kernels.available_backends()
    if len(backends) < 2:
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(5)
    p_flip = rng.random(800) * 0.05
    uniforms = rng.random((300, 800))
    results = [fn(p_flip, np.ascontiguousarray(uniforms)) for fn in backends.values()]
    for a, b in zip(*results):
        assert np.array_equal(a, b)


def test_event_list_sorted_by_trajectory_then_step():
    rng = np.random.default_rng(17)
    p_flip = rng.random(50) * 0.4
    uniforms = rng.random((20, 50))
    _, _, traj, step = kernels.scan_chunk(p_flip, np.ascontiguousarray(uniforms))
    order = np.lexsort((step, traj))
    assert np.array_equal(order, np.arange(traj.size))


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        _scan_py.scan_chunk(np.zeros(3), np.zeros((2, 4)))
    for name, fn in kernels.available_backends().items():
        with pytest.raises(ValueError):
            fn(np.zeros(3), np.zeros((2, 4)))
