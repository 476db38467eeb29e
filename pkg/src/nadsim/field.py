"""Carrier-envelope models of the driving electromagnetic field.

The field is written as E(t) = (1/2) E0(t) [exp(i Phi(t)) + c.c.] with total
phase Phi(t) = omega*t + phi(t).  The dipole moment and peak amplitude are
folded into the Rabi envelope Omega(t) = mu*E0(t)/hbar, so every envelope
here is expressed directly in angular-frequency (Rabi) units.

Built-in envelope shapes (all identically zero outside [t_on, t_off]):

    constant-wave        Omega0 on the support window
    gaussian             Omega0 * exp(-t^2/tau^2), 1/e half-width tau
    sech                 Omega0 * sech(t/tau)
    flat-top-with-ramps  sin^2 ramps up to an Omega0 plateau of length
                         `duration`, the ramps filling the rest of the window

The phase is phi(t) = phi0 + b*t^2/2 (constant offset plus linear chirp) or,
when a sample table is attached, an interpolated profile with
finite-difference derivatives.  Envelope derivatives of any order are
analytic for all built-in shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite as _hermite
from numpy.polynomial import polynomial as _poly

from .errors import EvaluationError
from .numerics import DIVERGENT

CONSTANT_WAVE = "constant-wave"
GAUSSIAN = "gaussian"
SECH = "sech"
FLAT_TOP = "flat-top-with-ramps"
SHAPES = (CONSTANT_WAVE, GAUSSIAN, SECH, FLAT_TOP)

# Relative floor under which Omega^-1 d/dt Omega is declared divergent.
RELATIVE_ENVELOPE_FLOOR = 1e-12


@dataclass(frozen=True)
class PulseSpec:
    """Parametric description of one driving pulse.

    Parameters
    ----------
    shape : str
        One of ``constant-wave``, ``gaussian``, ``sech``,
        ``flat-top-with-ramps``.
    peak_rabi : float
        Peak Rabi frequency Omega0 = mu*E0_peak/hbar (angular units, >= 0).
    duration : float
        1/e half-width tau of the envelope (gaussian/sech), plateau length
        (flat-top); nominal scale for constant-wave.
    carrier : float
        Carrier angular frequency omega.
    phase_offset : float
        Constant phase phi0 in radians.
    chirp_rate : float
        Linear chirp coefficient b in phi(t) = phi0 + b*t^2/2.
    t_on, t_off : float
        Support window; the envelope is identically zero outside.  Defaults
        to an unbounded window.
    phase_table : tuple or None
        Optional ((t0, t1, ...), (phi0, phi1, ...)) sampled phase profile;
        overrides the offset/chirp model.  Derivatives are taken by finite
        differences on the table grid.
    """

    shape: str
    peak_rabi: float
    duration: float
    carrier: float
    phase_offset: float = 0.0
    chirp_rate: float = 0.0
    t_on: float = -math.inf
    t_off: float = math.inf
    phase_table: tuple | None = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown pulse shape {self.shape!r} (known: {', '.join(SHAPES)})")
        if self.peak_rabi < 0:
            raise ValueError("peak_rabi must be >= 0")
        if not self.duration > 0:
            raise ValueError("duration must be > 0")
        if not self.t_on < self.t_off:
            raise ValueError("t_on must be < t_off")
        if self.shape == FLAT_TOP:
            if not (math.isfinite(self.t_on) and math.isfinite(self.t_off)):
                raise ValueError("flat-top-with-ramps requires a finite support window")
            if not self.t_off - self.t_on > self.duration:
                raise ValueError("flat-top-with-ramps window must exceed the plateau duration")
        if self.phase_table is not None:
            times, values = self.phase_table
            if len(times) != len(values) or len(times) < 2:
                raise ValueError("phase_table needs matching times/values with >= 2 samples")
            if np.any(np.diff(np.asarray(times, dtype=float)) <= 0):
                raise ValueError("phase_table times must be strictly increasing")

    @property
    def envelope_floor(self):
        return RELATIVE_ENVELOPE_FLOOR * self.peak_rabi

    @property
    def ramp_length(self):
        """Ramp duration of the flat-top shape."""
        return 0.5 * (self.t_off - self.t_on - self.duration)


@dataclass(frozen=True)
class FieldSample:
    """Field quantities at one instant; total_phase = carrier*t + phase exactly."""

    t: float
    envelope: float
    phase: float
    total_phase: float
    field_value: float


def _window_mask(spec, t):
    return (t >= spec.t_on) & (t <= spec.t_off)


def _hermite_eval(x, n):
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return _hermite.hermval(x, coeffs)


# d^n/du^n sech(u) = sech(u) * P_n(tanh u) with
# P_{n+1}(T) = (1 - T^2) P_n'(T) - T P_n(T), P_0 = 1.
_SECH_POLYS = [np.array([1.0])]


def _sech_derivative_poly(n):
    while len(_SECH_POLYS) <= n:
        p = _SECH_POLYS[-1]
        dp = _poly.polyder(p)
        term = _poly.polysub(dp, _poly.polymul([0.0, 0.0, 1.0], dp))  # (1 - T^2) P'
        term = _poly.polysub(term, _poly.polymul([0.0, 1.0], p))      # - T P
        _SECH_POLYS.append(term)
    return _SECH_POLYS[n]


def envelope(spec, t):
    """Rabi-frequency envelope Omega(t); zero outside the support window."""
    t_arr = np.asarray(t, dtype=float)
    tau = spec.duration
    if spec.shape == CONSTANT_WAVE:
        value = np.full_like(t_arr, spec.peak_rabi)
    elif spec.shape == GAUSSIAN:
        value = spec.peak_rabi * np.exp(-((t_arr / tau) ** 2))
    elif spec.shape == SECH:
        value = spec.peak_rabi / np.cosh(t_arr / tau)
    else:  # flat-top-with-ramps
        r = spec.ramp_length
        x_up = t_arr - spec.t_on
        x_dn = spec.t_off - t_arr
        value = np.full_like(t_arr, spec.peak_rabi)
        up = x_up < r
        dn = x_dn < r
        value = np.where(up, spec.peak_rabi * np.sin(0.5 * np.pi * x_up / r) ** 2, value)
        value = np.where(dn, spec.peak_rabi * np.sin(0.5 * np.pi * x_dn / r) ** 2, value)
    value = np.where(_window_mask(spec, t_arr), value, 0.0)
    return float(value) if np.isscalar(t) or t_arr.ndim == 0 else value


def envelope_derivative(spec, t, n):
    """n-th time derivative of the envelope (analytic, n >= 1)."""
    if n < 1:
        raise ValueError("derivative order must be >= 1")
    t_arr = np.asarray(t, dtype=float)
    tau = spec.duration
    if spec.shape == CONSTANT_WAVE:
        value = np.zeros_like(t_arr)
    elif spec.shape == GAUSSIAN:
        u = t_arr / tau
        value = spec.peak_rabi * (-1.0 / tau) ** n * _hermite_eval(u, n) * np.exp(-(u**2))
    elif spec.shape == SECH:
        u = t_arr / tau
        poly = _sech_derivative_poly(n)
        value = spec.peak_rabi * tau ** (-n) * _poly.polyval(np.tanh(u), poly) / np.cosh(u)
    else:  # flat-top-with-ramps
        r = spec.ramp_length
        amp = 0.5 * spec.peak_rabi * (np.pi / r) ** n
        x_up = t_arr - spec.t_on
        x_dn = spec.t_off - t_arr
        up = -amp * np.cos(np.pi * x_up / r + 0.5 * n * np.pi)
        dn = (-1.0) ** (n + 1) * amp * np.cos(np.pi * x_dn / r + 0.5 * n * np.pi)
        value = np.zeros_like(t_arr)
        value = np.where(x_up < r, up, value)
        value = np.where(x_dn < r, dn, value)
    value = np.where(_window_mask(spec, t_arr), value, 0.0)
    return float(value) if np.isscalar(t) or t_arr.ndim == 0 else value


def _table_phase_values(spec, t_arr, n):
    times = np.asarray(spec.phase_table[0], dtype=float)
    values = np.asarray(spec.phase_table[1], dtype=float)
    if n > 0:
        step = float(np.max(np.diff(times)))
        window = min(spec.t_off, times[-1]) - max(spec.t_on, times[0])
        if n * step > window:
            raise EvaluationError(
                f"finite-difference order {n} exceeds the sampled phase window"
            )
        for _ in range(n):
            values = np.gradient(values, times)
    return np.interp(t_arr, times, values)


def phase(spec, t):
    """Field phase phi(t) (radians), excluding the carrier term."""
    t_arr = np.asarray(t, dtype=float)
    if spec.phase_table is not None:
        value = _table_phase_values(spec, t_arr, 0)
    else:
        value = spec.phase_offset + 0.5 * spec.chirp_rate * t_arr**2
    return float(value) if np.isscalar(t) or t_arr.ndim == 0 else value


def phase_derivative(spec, t, n):
    """n-th time derivative of phi(t); exact for the offset + chirp model."""
    if n < 1:
        raise ValueError("derivative order must be >= 1")
    t_arr = np.asarray(t, dtype=float)
    if spec.phase_table is not None:
        value = _table_phase_values(spec, t_arr, n)
    elif n == 1:
        value = spec.chirp_rate * t_arr
    elif n == 2:
        value = np.full_like(t_arr, spec.chirp_rate)
    else:
        value = np.zeros_like(t_arr)
    return float(value) if np.isscalar(t) or t_arr.ndim == 0 else value


def total_phase(spec, t):
    """Total field phase Phi(t) = omega*t + phi(t)."""
    t_arr = np.asarray(t, dtype=float)
    value = spec.carrier * t_arr + phase(spec, t_arr)
    return float(value) if np.isscalar(t) or t_arr.ndim == 0 else value


def field_value(spec, t):
    """Real field in Rabi units: Omega(t) * cos(Phi(t))."""
    t_arr = np.asarray(t, dtype=float)
    value = envelope(spec, t_arr) * np.cos(total_phase(spec, t_arr))
    return float(value) if np.isscalar(t) or t_arr.ndim == 0 else value


def sample(spec, t):
    return FieldSample(
        t=float(t),
        envelope=envelope(spec, t),
        phase=phase(spec, t),
        total_phase=total_phase(spec, t),
        field_value=field_value(spec, t),
    )


def log_derivative(spec, t, floor=None):
    """Logarithmic envelope derivative Omega^-1 dOmega/dt.

    Returns DIVERGENT (inf) when the envelope sits below its floor while the
    derivative is nonzero -- the singular field-off tail.  An exactly zero
    envelope with zero slope means the field is off; no field contributes no
    field nonadiabaticity and the term is 0 there.
    """
    if floor is None:
        floor = spec.envelope_floor
    env = envelope(spec, t)
    denv = envelope_derivative(spec, t, 1)
    if abs(env) >= floor and env != 0.0:
        return denv / env
    if denv == 0.0 and env != 0.0:
        return 0.0
    if env == 0.0 and denv == 0.0:
        return 0.0
    return DIVERGENT


def log_derivative_series(spec, t, floor=None):
    """Vectorized log-derivative over a grid.

    Returns (values, divergent) where `divergent` marks instants at which
    the scalar form would return the DIVERGENT marker; `values` is 0 there.
    """
    if floor is None:
        floor = spec.envelope_floor
    t_arr = np.asarray(t, dtype=float)
    env = np.asarray(envelope(spec, t_arr))
    denv = np.asarray(envelope_derivative(spec, t_arr, 1))
    ok = (np.abs(env) >= floor) & (env != 0.0)
    flat = (denv == 0.0) & ~ok
    divergent = ~ok & ~flat & ~((env == 0.0) & (denv == 0.0))
    # Sub-floor nonzero envelopes with zero slope keep a 0 term; exact
    # field-off points are 0 by the docstring rule above.
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(ok, denv / np.where(env == 0.0, 1.0, env), 0.0)
    values = np.where(divergent, 0.0, values)
    return values, divergent
