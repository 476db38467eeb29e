"""Generalized adiabaticity checks for a pulsed two-level system.

The central object is the nonadiabatic function

    g(t) = dphi/dt - i Omega^-1 dOmega/dt

and the ordered hierarchy of conditions, for n = 0, 1, 2, ... and
k = 0 .. n+1:

    |d^n g / dt^n|  <<  |Delta - i gamma/2|^(n+1-k) |Omega|^k

"Much less" is operationalized as ratio < threshold (default 0.1).  The
n = 0, k = 0 member reduces to the ordinary adiabatic condition on the
envelope; n = 0, k = 1 is the Born-Fock form |g|/|Omega|.  An exactly
resonant system (Delta = 0) is reported violated no matter how slow the
pulse.  gamma defaults to gamma_g + gamma_e, matching its role in the
nonadiabatic detuning; pass ``gamma=...`` to use another convention.

The separate frequency-form check compares the detuning against Doppler
and laser spectral widths: Delta >> max(doppler, laser), with ">>" as a
configurable margin (default 10x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import field as field_mod
from .errors import EvaluationError
from .nads import detuning
from .numerics import grid_gradient

DEFAULT_THRESHOLD = 0.1
DEFAULT_MARGIN = 10.0


@dataclass(frozen=True)
class ConditionEntry:
    """Worst ratio of one (n, k) condition over a grid."""

    n: int
    k: int
    worst_ratio: float
    worst_time: float
    satisfied: bool


@dataclass(frozen=True)
class FrequencyFormCheck:
    delta: float
    doppler_width: float
    laser_width: float
    margin: float
    satisfied: bool


@dataclass
class AdiabaticityReport:
    entries: list
    threshold: float
    resonant: bool
    frequency_form: FrequencyFormCheck | None = None

    @property
    def satisfied(self):
        """Overall verdict; resonance (Delta = 0) violates unconditionally."""
        return (not self.resonant) and all(e.satisfied for e in self.entries)

    def entry(self, n, k):
        for e in self.entries:
            if e.n == n and e.k == k:
                return e
        raise KeyError((n, k))

    def to_text(self):
        lines = [f"{'n':>3} {'k':>3} {'worst_ratio':>14} {'worst_time':>14} {'satisfied':>9}"]
        for e in self.entries:
            lines.append(
                f"{e.n:>3} {e.k:>3} {e.worst_ratio:>14.6g} {e.worst_time:>14.6g} "
                f"{'yes' if e.satisfied else 'NO':>9}"
            )
        if self.resonant:
            lines.append("resonant system (Delta = 0): adiabatic condition violated")
        if self.frequency_form is not None:
            f = self.frequency_form
            lines.append(
                "frequency form: |Delta| = %.6g vs widths (doppler %.6g, laser %.6g), "
                "margin %.3g -> %s"
                % (f.delta, f.doppler_width, f.laser_width, f.margin,
                   "satisfied" if f.satisfied else "VIOLATED")
            )
        lines.append(f"overall: {'satisfied' if self.satisfied else 'VIOLATED'}")
        return "\n".join(lines)

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("n,k,worst_ratio,worst_time,satisfied\n")
            for e in self.entries:
                fh.write(f"{e.n},{e.k},{e.worst_ratio!r},{e.worst_time!r},{int(e.satisfied)}\n")


def nonadiabatic_function(system, pulse, t):
    """g(t) = dphi/dt - i Omega^-1 dOmega/dt; EvaluationError on divergence."""
    logd = field_mod.log_derivative(pulse, t)
    if math.isinf(logd):
        raise EvaluationError("log-derivative divergent (envelope below floor)", t=t)
    return field_mod.phase_derivative(pulse, t, 1) - 1j * logd


def _gamma_scale(system, gamma):
    return system.gamma_total if gamma is None else gamma


def _detuning_scale(system, pulse, gamma):
    return abs(detuning(system, pulse) - 0.5j * _gamma_scale(system, gamma))


def condition_ratio(system, pulse, t, n, k, h=None, gamma=None):
    """LHS/RHS of the (n, k) condition at one instant.

    d^n g/dt^n is taken by nested central differences with step ``h``
    (default duration/1000).  Returns inf when the right-hand side vanishes
    while the left does not, or when g diverges anywhere on the stencil.
    """
    if n < 0 or k < 0 or k > n + 1:
        raise ValueError("need n >= 0 and 0 <= k <= n+1")
    h = pulse.duration / 1000.0 if h is None else h
    try:
        if n == 0:
            lhs = abs(nonadiabatic_function(system, pulse, t))
        else:
            acc = 0.0
            for j in range(n + 1):
                acc += (-1) ** j * math.comb(n, j) * nonadiabatic_function(
                    system, pulse, t + (0.5 * n - j) * h
                )
            lhs = abs(acc / h**n)
    except EvaluationError:
        return math.inf
    rhs = _detuning_scale(system, pulse, gamma) ** (n + 1 - k) * abs(
        field_mod.envelope(pulse, t)
    ) ** k
    if rhs == 0.0:
        return 0.0 if lhs == 0.0 else math.inf
    return lhs / rhs


def ordinary_condition(system, pulse, t, gamma=None):
    """Envelope-only ratio |Omega^-1 dOmega/dt| / |Delta - i gamma/2|.

    Equals condition_ratio(..., 0, 0) whenever the chirp vanishes.
    """
    logd = field_mod.log_derivative(pulse, t)
    if math.isinf(logd):
        return math.inf
    return abs(logd) / _detuning_scale(system, pulse, gamma)


def born_fock_condition(system, pulse, t, gamma=None):
    """The n = 0, k = 1 member |g(t)| / |Omega(t)|."""
    return condition_ratio(system, pulse, t, 0, 1, gamma=gamma)


def frequency_form_check(delta, doppler_width, laser_width, margin=DEFAULT_MARGIN):
    """Frequency-form adiabaticity: detuning margin over both spectral widths.

    ``delta`` is the detuning magnitude; all arguments >= 0.
    """
    if delta < 0 or doppler_width < 0 or laser_width < 0:
        raise ValueError("frequency-form arguments must be >= 0")
    return delta > margin * max(doppler_width, laser_width)


def check(
    system,
    pulse,
    grid,
    n_max=3,
    threshold=DEFAULT_THRESHOLD,
    gamma=None,
    doppler_width=None,
    laser_width=None,
    margin=DEFAULT_MARGIN,
):
    """Scan every (n, k) condition over a grid and assemble a report.

    Derivatives of g use repeated central differences on the grid itself
    (one-sided at the ends).  Instants where g diverges count as automatic
    violations of every entry.  The report covers exactly the pairs
    0 <= n <= n_max, 0 <= k <= n+1.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-D array with at least 2 points")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")

    dphi = np.asarray(field_mod.phase_derivative(pulse, grid, 1))
    logd, divergent = field_mod.log_derivative_series(pulse, grid)
    g = dphi - 1j * logd
    g = np.where(divergent, np.nan + 1j * np.nan, g)

    env_abs = np.abs(np.asarray(field_mod.envelope(pulse, grid)))
    scale = _detuning_scale(system, pulse, gamma)

    entries = []
    dng = g
    for n in range(n_max + 1):
        if n > 0:
            dng = grid_gradient(dng, grid)
        lhs = np.abs(dng)
        lhs = np.where(np.isnan(lhs), math.inf, lhs)
        for k in range(n + 2):
            with np.errstate(divide="ignore", invalid="ignore"):
                rhs = scale ** (n + 1 - k) * env_abs**k
                ratio = np.where(
                    rhs > 0.0, lhs / np.where(rhs > 0.0, rhs, 1.0),
                    np.where(lhs > 0.0, math.inf, 0.0),
                )
            idx = int(np.argmax(ratio))
            worst = float(ratio[idx])
            entries.append(
                ConditionEntry(
                    n=n,
                    k=k,
                    worst_ratio=worst,
                    worst_time=float(grid[idx]),
                    satisfied=bool(worst < threshold),
                )
            )

    freq = None
    if doppler_width is not None or laser_width is not None:
        dw = doppler_width or 0.0
        lw = laser_width or 0.0
        delta_abs = abs(detuning(system, pulse))
        freq = FrequencyFormCheck(
            delta=delta_abs,
            doppler_width=dw,
            laser_width=lw,
            margin=margin,
            satisfied=frequency_form_check(delta_abs, dw, lw, margin=margin),
        )

    return AdiabaticityReport(
        entries=entries,
        threshold=threshold,
        resonant=(detuning(system, pulse) == 0.0),
        frequency_form=freq,
    )
