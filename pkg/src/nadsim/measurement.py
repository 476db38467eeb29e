"""Stochastic engine for the two-step transition loop and collapse readout.

A trajectory occupies exactly one dressed state at any instant.  The
coherent real<->virtual exchange inside a dressed state is carried by the
mixing amplitudes and treated as instantaneous on the grid; the incoherent
dressed-to-dressed hop is the stochastic element, firing over a step of
length dt with probability 1 - exp(-rate*dt).  A ground->excited hop books
one absorbed photon, the reverse books one emitted photon and closes one
loop.  When the field support ends the occupied dressed state collapses to
its underlying bare state and a two-valued apparatus pointer is read out in
perfect correlation (ground -> g/A_g, excited -> e/A_e).

No transfer-rate law is prescribed by the physics treated here beyond
"driven by the nonadiabatic factors"; two models are exposed:

    constant                       rate = rate_scale while the field is on
    virtual-population-weighted    rate = rate_scale * |sin_half(t)|^2

Both vanish when the field is off (virtual components only exist while the
field is on).  Trajectories draw from per-trajectory substreams spawned
from (seed, index), so ensembles are reproducible bit for bit and safe to
chunk or parallelize in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import field as field_mod
from . import kernels, nads
from .dynamics import PopulationSeries

GROUND = "ground"
EXCITED = "excited"

RATE_CONSTANT = "constant"
RATE_WEIGHTED = "virtual-population-weighted"
RATE_MODELS = (RATE_CONSTANT, RATE_WEIGHTED)

POINTER = {GROUND: "A_g", EXCITED: "A_e"}
BARE = {GROUND: "g", EXCITED: "e"}

DEFAULT_CHUNK = 512


@dataclass
class LoopState:
    """Which dressed state is occupied, plus the running photon ledger."""

    which: str = GROUND
    entered_at: float = 0.0
    photons_absorbed: int = 0
    photons_emitted: int = 0
    loop_count: int = 0
    dwell_times: list = field(default_factory=list)
    loop_durations: list = field(default_factory=list)
    ground_entered_at: float = 0.0


@dataclass(frozen=True)
class Outcome:
    """Terminal record of one trajectory after field-off collapse."""

    terminal_bare: str
    pointer: str
    loops: int
    dwell_times: tuple
    photons_absorbed: int
    photons_emitted: int


@dataclass(eq=False)
class MCConfig:
    """Monte Carlo settings: rate law, ensemble size, seed, and grid."""

    rate_scale: float
    rate_model: str = RATE_CONSTANT
    trajectories: int = 1
    seed: int = 0
    grid: np.ndarray | None = None

    def __post_init__(self):
        if self.rate_scale < 0:
            raise ValueError("rate_scale must be >= 0")
        if self.rate_model not in RATE_MODELS:
            raise ValueError(
                f"unknown rate model {self.rate_model!r} (known: {', '.join(RATE_MODELS)})"
            )
        if self.trajectories < 1:
            raise ValueError("trajectories must be >= 1")
        if self.grid is not None:
            self.grid = np.asarray(self.grid, dtype=float)
            if self.grid.ndim != 1 or self.grid.size < 2 or np.any(np.diff(self.grid) <= 0):
                raise ValueError("grid must be 1-D, strictly increasing, >= 2 points")


@dataclass(eq=False)
class EnsembleStats:
    """Aggregate statistics of a trajectory ensemble."""

    n_trajectories: int
    seed: int
    fraction_ground: float
    fraction_excited: float
    mean_loop_count: float
    mean_photons_absorbed: float
    mean_photons_emitted: float
    pointer_correlation: float
    dwell_ground: np.ndarray
    dwell_excited: np.ndarray
    loop_durations: np.ndarray
    occupancy_excited: np.ndarray
    grid: np.ndarray
    collapse_time: float

    @property
    def mean_loop_duration(self):
        """Mean duration of completed loops (the emergent loop-time statistic)."""
        if self.loop_durations.size == 0:
            return math.nan
        return float(self.loop_durations.mean())


def nonadiabatic_rate(config, system, pulse, t, state=None):
    """Instantaneous dressed-to-dressed transfer rate; zero when field is off."""
    env = field_mod.envelope(pulse, t)
    if env == 0.0:
        return 0.0
    if config.rate_model == RATE_CONSTANT:
        return config.rate_scale
    q = nads.quantities(system, pulse, t)
    return config.rate_scale * abs(q.sin_half) ** 2


def rate_series(config, system, pulse, grid, series=None):
    """Transfer rate over a grid (vectorized)."""
    grid = np.asarray(grid, dtype=float)
    env = np.asarray(field_mod.envelope(pulse, grid))
    on = env > 0.0
    if config.rate_model == RATE_CONSTANT:
        rates = np.where(on, config.rate_scale, 0.0)
    else:
        if series is None:
            series = nads.quantities_series(system, pulse, grid)
        rates = np.where(on, config.rate_scale * np.abs(series.sin_half) ** 2, 0.0)
    return rates


def step_loop(state, t, dt, rate, rng):
    """Advance one step: flip the occupied dressed state with the exponential law.

    Never mutates the input; returns it unchanged when no flip fires,
    otherwise a new LoopState.  A flip during [t, t+dt] is booked at t+dt.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    p_flip = -math.expm1(-rate * dt)
    if rng.random() >= p_flip:
        return state
    t_flip = t + dt
    new = replace(
        state,
        dwell_times=list(state.dwell_times),
        loop_durations=list(state.loop_durations),
    )
    new.dwell_times.append((state.which, t_flip - state.entered_at))
    new.entered_at = t_flip
    if state.which == GROUND:
        new.which = EXCITED
        new.photons_absorbed += 1
    else:
        new.which = GROUND
        new.photons_emitted += 1
        new.loop_count += 1
        new.loop_durations.append(t_flip - state.ground_entered_at)
        new.ground_entered_at = t_flip
    return new


def collapse_on_field_off(state, t_off):
    """Collapse at field-off: virtual parts vanish, the occupied dressed
    state traps into its bare state, and the pointer reads out with it."""
    dwell = list(state.dwell_times)
    if t_off > state.entered_at:
        dwell.append((state.which, t_off - state.entered_at))
    return Outcome(
        terminal_bare=BARE[state.which],
        pointer=POINTER[state.which],
        loops=state.loop_count,
        dwell_times=tuple(dwell),
        photons_absorbed=state.photons_absorbed,
        photons_emitted=state.photons_emitted,
    )


def _flip_probabilities(config, system, pulse, series=None):
    grid = config.grid
    if grid is None:
        raise ValueError("MCConfig.grid is required for trajectory runs")
    rates = rate_series(config, system, pulse, grid, series=series)
    dt = np.diff(grid)
    return -np.expm1(-rates[:-1] * dt)


def _collapse_time(config, pulse):
    return float(min(pulse.t_off, config.grid[-1]))


def _outcome_from_flip_steps(grid, flip_steps, t_collapse):
    """Shared bookkeeping: turn flip step indices into an Outcome."""
    times = grid[np.asarray(flip_steps, dtype=np.int64) + 1]
    # A hop that fired while the field was on is booked at the step end,
    # which may overshoot t_off by a fraction of a step; clamp for the ledger.
    times = np.minimum(times, t_collapse)
    m = times.size
    boundaries = np.concatenate(([grid[0]], times, [t_collapse]))
    dwell = []
    for i in range(m + 1):
        duration = boundaries[i + 1] - boundaries[i]
        which = GROUND if i % 2 == 0 else EXCITED
        if duration > 0 or i < m:
            dwell.append((which, float(duration)))
    emissions = m // 2
    absorbed = m - emissions
    ground_entries = np.concatenate(([grid[0]], times[1::2]))
    loop_durations = np.diff(ground_entries)
    state = GROUND if m % 2 == 0 else EXCITED
    return (
        Outcome(
            terminal_bare=BARE[state],
            pointer=POINTER[state],
            loops=emissions,
            dwell_times=tuple(dwell),
            photons_absorbed=absorbed,
            photons_emitted=emissions,
        ),
        loop_durations,
    )


def run_trajectory(config, system, pulse, rng, series=None):
    """Run one trajectory over the config grid and collapse it at field-off."""
    p_flip = _flip_probabilities(config, system, pulse, series=series)
    uniforms = rng.random(p_flip.size)
    flip_steps = np.flatnonzero(uniforms < p_flip)
    outcome, _ = _outcome_from_flip_steps(config.grid, flip_steps, _collapse_time(config, pulse))
    return outcome


def ensemble(config, system, pulse, series=None, chunk_size=DEFAULT_CHUNK):
    """Run the full ensemble and aggregate its statistics.

    Per-trajectory generators come from SeedSequence(seed).spawn, so the
    result is independent of chunking and bit-identical for a given seed.
    """
    grid = config.grid
    p_flip = _flip_probabilities(config, system, pulse, series=series)
    t_collapse = _collapse_time(config, pulse)
    n = config.trajectories
    children = np.random.SeedSequence(config.seed).spawn(n)

    occupancy = np.zeros(grid.size, dtype=np.int64)
    n_excited_terminal = 0
    total_absorbed = 0
    total_emitted = 0
    pointer_matches = 0
    dwell_ground = []
    dwell_excited = []
    loop_durations = []

    for start in range(0, n, chunk_size):
        batch = children[start : start + chunk_size]
        uniforms = np.empty((len(batch), p_flip.size))
        for row, child in enumerate(batch):
            uniforms[row] = np.random.default_rng(child).random(p_flip.size)
        occ, terminal, flip_traj, flip_step = kernels.scan_chunk(p_flip, uniforms)
        occupancy += occ
        n_excited_terminal += int(terminal.sum())
        bounds = np.searchsorted(flip_traj, np.arange(len(batch) + 1))
        for row in range(len(batch)):
            steps = flip_step[bounds[row] : bounds[row + 1]]
            outcome, loops = _outcome_from_flip_steps(grid, steps, t_collapse)
            total_absorbed += outcome.photons_absorbed
            total_emitted += outcome.photons_emitted
            pointer_matches += int(
                outcome.pointer == POINTER[GROUND if outcome.terminal_bare == "g" else EXCITED]
            )
            for which, duration in outcome.dwell_times:
                (dwell_ground if which == GROUND else dwell_excited).append(duration)
            loop_durations.extend(loops.tolist())

    return EnsembleStats(
        n_trajectories=n,
        seed=config.seed,
        fraction_ground=1.0 - n_excited_terminal / n,
        fraction_excited=n_excited_terminal / n,
        mean_loop_count=total_emitted / n,
        mean_photons_absorbed=total_absorbed / n,
        mean_photons_emitted=total_emitted / n,
        pointer_correlation=pointer_matches / n,
        dwell_ground=np.asarray(dwell_ground),
        dwell_excited=np.asarray(dwell_excited),
        loop_durations=np.asarray(loop_durations),
        occupancy_excited=occupancy / n,
        grid=grid,
        collapse_time=t_collapse,
    )


def dwell_histogram(stats, bins=50):
    """Histogram dwell durations; returns (edges, ground, excited, loops)."""
    span = stats.collapse_time - stats.grid[0]
    edges = np.linspace(0.0, span, bins + 1)
    ground, _ = np.histogram(stats.dwell_ground, bins=edges)
    excited, _ = np.histogram(stats.dwell_excited, bins=edges)
    loops, _ = np.histogram(stats.loop_durations, bins=edges)
    return edges, ground, excited, loops


def expected_excited_occupation(config, system, pulse, series=None):
    """Exact expectation of the hop process over the grid.

    For the symmetric two-state process with time-dependent rate G(t),
    P_excited(t) = (1 - exp(-2 int G dt')) / 2.
    """
    grid = config.grid
    rates = rate_series(config, system, pulse, grid, series=series)
    integral = cumulative_trapezoid(rates, grid, initial=0.0)
    return 0.5 * (1.0 - np.exp(-2.0 * integral))


def expected_population_series(config, system, pulse, series=None):
    """Deterministic PopulationSeries built from the expected occupations.

    Populations combine the dressed-state occupation probabilities with the
    mixing weights: a trajectory in the ground dressed state contributes
    |cos_half|^2 real + |sin_half|^2 virtual population, mirrored for the
    excited one.
    """
    grid = config.grid
    if series is None:
        series = nads.quantities_series(system, pulse, grid)
    p_exc = expected_excited_occupation(config, system, pulse, series=series)
    p_gnd = 1.0 - p_exc
    cos2 = np.abs(series.cos_half) ** 2
    sin2 = np.abs(series.sin_half) ** 2
    env = np.asarray(field_mod.envelope(pulse, grid))
    intensity = env**2
    return PopulationSeries(
        times=grid,
        p_bare_g=p_gnd * cos2 + p_exc * sin2,
        p_bare_e=p_gnd * sin2 + p_exc * cos2,
        p_G_real=p_gnd * cos2,
        p_G_virtual=p_gnd * sin2,
        p_E_real=p_exc * cos2,
        p_E_virtual=p_exc * sin2,
        intensity=intensity,
        integrated_intensity=cumulative_trapezoid(intensity, grid, initial=0.0),
    )


def entangled_coefficients(system, pulse, t, which):
    """System-apparatus coefficients of the occupied dressed state.

    Returns (ground_real, ground_virtual, excited_real, excited_virtual)
    with only the occupied pair nonzero; the excited virtual term carries
    the minus sign of the entangled-state structure.
    """
    cos_half, sin_half = nads.mixing(system, pulse, t)
    if which == GROUND:
        return (cos_half, sin_half, 0.0 + 0.0j, 0.0 + 0.0j)
    if which == EXCITED:
        return (0.0 + 0.0j, 0.0 + 0.0j, cos_half, -sin_half)
    raise ValueError(f"unknown dressed state {which!r}")
