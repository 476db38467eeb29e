"""Nonadiabatic dressed states of a driven, damped two-level system.

Starting from the detuning Delta = omega_e - omega_g - omega, the complex
building blocks evaluated here are

    delta_na  = Delta - i(gamma_g + gamma_e)/2 - (dphi/dt - i Omega^-1 dOmega/dt)
    rabi_na   = sgn(Delta) [Omega^2 + delta_na^2 - 2i d(delta_na)/dt]^(1/2)
    Lambda_1  = (delta_na + rabi_na)/2        Lambda_2 = (delta_na - rabi_na)/2
    Lambda'_j = Lambda_j - i d(rabi_na)/dt / (2 rabi_na)
    cos_half  = sqrt(Lambda'_1 / rabi_na)
    sin_half  = sgn(Delta) sqrt(-Lambda'_2 / rabi_na)
    omega_G   = omega_g + Lambda_2
    omega_E   = omega_e - Lambda_2 - i(gamma_g + gamma_e)/2
                        - (dphi/dt - i Omega^-1 dOmega/dt)

The ground dressed state mixes a real component on |g| with a virtual
component on |e| (weights cos_half/sin_half) carrying the accumulated phase
integrals of omega_G; the excited state mirrors this with a minus sign on
its virtual part.  Dropping every derivative and damping term recovers the
adiabatic dressed states; dropping the field as well recovers the bare
states.

Complex square roots take the principal branch at the first grid point
(with the sgn(Delta) convention, sgn(0) := +1) and stay branch-continuous
along the grid thereafter.  Time derivatives of composite quantities use
central finite differences on the evaluation grid, one-sided at the ends;
accumulated phases use trapezoidal quadrature from the first grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import field as field_mod
from .errors import DegeneratePointError, EvaluationError
from .numerics import branch_continuous_sqrt, grid_gradient, matched_sqrt

# Relative floor on |rabi_na| below which the dressed pair is degenerate.
DEGENERACY_FLOOR = 1e-10


@dataclass(frozen=True)
class SystemSpec:
    """Bare two-level system: level frequencies and damping rates."""

    omega_g: float
    omega_e: float
    gamma_g: float = 0.0
    gamma_e: float = 0.0

    def __post_init__(self):
        if not self.omega_e > self.omega_g:
            raise ValueError("omega_e must exceed omega_g")
        if self.gamma_g < 0 or self.gamma_e < 0:
            raise ValueError("damping rates must be >= 0")

    @property
    def gamma_total(self):
        return self.gamma_g + self.gamma_e

    @property
    def transition(self):
        return self.omega_e - self.omega_g


@dataclass(frozen=True)
class NadsQuantities:
    """All complex dressed-state scalars at one time point."""

    t: float
    delta: float
    delta_na: complex
    rabi_na: complex
    lambda1: complex
    lambda2: complex
    lambda1_na: complex
    lambda2_na: complex
    omega_G: complex
    omega_E: complex
    cos_half: complex
    sin_half: complex


@dataclass(frozen=True)
class DressedComponents:
    """Dressed-state components at one time point.

    g_real/g_virtual (e_real/e_virtual) are the bare-basis amplitudes of the
    ground (excited) components themselves, i.e. exp(-i * phase_X); the
    mixing weights cos_half/sin_half are carried separately so the full
    state vectors can be assembled either way.
    """

    t: float
    g_real: complex
    g_virtual: complex
    e_real: complex
    e_virtual: complex
    phase_G: complex
    phase_Gv: complex
    phase_E: complex
    phase_Ev: complex
    cos_half: complex
    sin_half: complex

    def ground_vector(self):
        """Bare-basis amplitudes (c_g, c_e) of the ground dressed state."""
        return (self.cos_half * self.g_real, self.sin_half * self.g_virtual)

    def excited_vector(self):
        """Bare-basis amplitudes (c_g, c_e) of the excited dressed state."""
        return (-self.sin_half * self.e_virtual, self.cos_half * self.e_real)


class NadsSeries:
    """Dressed-state quantities evaluated over a strictly increasing grid."""

    def __init__(self, system, pulse, grid, arrays):
        self.system = system
        self.pulse = pulse
        self.grid = grid
        for name, value in arrays.items():
            setattr(self, name, value)

    def __len__(self):
        return self.grid.size

    def at(self, i):
        return NadsQuantities(
            t=float(self.grid[i]),
            delta=float(self.delta),
            delta_na=complex(self.delta_na[i]),
            rabi_na=complex(self.rabi_na[i]),
            lambda1=complex(self.lambda1[i]),
            lambda2=complex(self.lambda2[i]),
            lambda1_na=complex(self.lambda1_na[i]),
            lambda2_na=complex(self.lambda2_na[i]),
            omega_G=complex(self.omega_G[i]),
            omega_E=complex(self.omega_E[i]),
            cos_half=complex(self.cos_half[i]),
            sin_half=complex(self.sin_half[i]),
        )


class DressedSeries:
    """Component amplitudes and phases of both dressed states over a grid."""

    def __init__(self, grid, phase_G, phase_Gv, phase_E, phase_Ev, cos_half, sin_half):
        self.grid = grid
        self.phase_G = phase_G
        self.phase_Gv = phase_Gv
        self.phase_E = phase_E
        self.phase_Ev = phase_Ev
        self.cos_half = cos_half
        self.sin_half = sin_half
        self.g_real = np.exp(-1j * phase_G)
        self.g_virtual = np.exp(-1j * phase_Gv)
        self.e_real = np.exp(-1j * phase_E)
        self.e_virtual = np.exp(-1j * phase_Ev)

    def __len__(self):
        return self.grid.size

    def at(self, i):
        return DressedComponents(
            t=float(self.grid[i]),
            g_real=complex(self.g_real[i]),
            g_virtual=complex(self.g_virtual[i]),
            e_real=complex(self.e_real[i]),
            e_virtual=complex(self.e_virtual[i]),
            phase_G=complex(self.phase_G[i]),
            phase_Gv=complex(self.phase_Gv[i]),
            phase_E=complex(self.phase_E[i]),
            phase_Ev=complex(self.phase_Ev[i]),
            cos_half=complex(self.cos_half[i]),
            sin_half=complex(self.sin_half[i]),
        )

    def ground_vectors(self):
        return (self.cos_half * self.g_real, self.sin_half * self.g_virtual)

    def excited_vectors(self):
        return (-self.sin_half * self.e_virtual, self.cos_half * self.e_real)


def detuning(system, pulse):
    """Carrier detuning Delta = omega_e - omega_g - omega."""
    return system.omega_e - system.omega_g - pulse.carrier


def _sign_convention(delta):
    # sgn(0) := +1; exact resonance is flagged by the adiabaticity module.
    return -1.0 if delta < 0 else 1.0


def nonadiabatic_detuning(system, pulse, t):
    """delta_na at one instant; raises EvaluationError on a divergent tail."""
    logd = field_mod.log_derivative(pulse, t)
    if math.isinf(logd):
        raise EvaluationError("log-derivative divergent (envelope below floor)", t=t)
    dphi = field_mod.phase_derivative(pulse, t, 1)
    return detuning(system, pulse) - 0.5j * system.gamma_total - (dphi - 1j * logd)


def _delta_na_series(system, pulse, grid, strict=True):
    logd, divergent = field_mod.log_derivative_series(pulse, grid)
    if strict and divergent.any():
        bad = float(grid[int(np.argmax(divergent))])
        raise EvaluationError("log-derivative divergent (envelope below floor)", t=bad)
    dphi = np.asarray(field_mod.phase_derivative(pulse, grid, 1))
    values = detuning(system, pulse) - 0.5j * system.gamma_total - (dphi - 1j * logd)
    return values, dphi, logd, divergent


def quantities_series(system, pulse, grid, ads=False, symmetric_excited=False):
    """Evaluate every dressed-state quantity over a grid.

    With ``ads=True`` all nonadiabatic inputs (phase/envelope derivatives,
    grid derivatives of composite quantities, damping) are set to zero,
    yielding the adiabatic dressed states.  ``symmetric_excited`` replaces
    the printed excited-state frequency by its G-mirrored form
    omega_e - Lambda_2 (an alternate convention, not the default).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-D array with at least 2 points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")

    delta = detuning(system, pulse)
    env = np.asarray(field_mod.envelope(pulse, grid))

    if ads:
        delta_na = np.full(grid.shape, complex(delta))
        d_delta_na = np.zeros(grid.shape, dtype=complex)
        nonad = np.zeros(grid.shape, dtype=complex)
    else:
        delta_na, dphi, logd, _ = _delta_na_series(system, pulse, grid)
        d_delta_na = grid_gradient(delta_na, grid)
        nonad = (dphi - 1j * logd) + 0.5j * system.gamma_total

    radicand = env**2 + delta_na**2 - 2j * d_delta_na
    rabi_na = branch_continuous_sqrt(radicand, first_sign=_sign_convention(delta))

    scale = max(abs(delta), pulse.peak_rabi, 1e-30)
    degenerate = np.abs(rabi_na) < DEGENERACY_FLOOR * scale
    if degenerate.any():
        bad = float(grid[int(np.argmax(degenerate))])
        raise DegeneratePointError("dressed-state pair degenerate", t=bad)

    d_rabi = np.zeros(grid.shape, dtype=complex) if ads else grid_gradient(rabi_na, grid)
    lambda1 = 0.5 * (delta_na + rabi_na)
    lambda2 = 0.5 * (delta_na - rabi_na)
    correction = -1j * d_rabi / (2.0 * rabi_na)
    lambda1_na = lambda1 + correction
    lambda2_na = lambda2 + correction

    cos_half = branch_continuous_sqrt(lambda1_na / rabi_na, first_sign=1.0)
    sin_half = branch_continuous_sqrt(-lambda2_na / rabi_na, first_sign=_sign_convention(delta))

    omega_G = system.omega_g + lambda2
    if symmetric_excited:
        omega_E = system.omega_e - lambda2
    else:
        omega_E = system.omega_e - lambda2 - nonad

    return NadsSeries(
        system,
        pulse,
        grid,
        {
            "envelope": env,
            "delta": delta,
            "delta_na": delta_na,
            "rabi_na": rabi_na,
            "lambda1": lambda1,
            "lambda2": lambda2,
            "lambda1_na": lambda1_na,
            "lambda2_na": lambda2_na,
            "omega_G": omega_G,
            "omega_E": omega_E,
            "cos_half": cos_half,
            "sin_half": sin_half,
        },
    )


def _default_step(pulse):
    return pulse.duration / 1000.0


def quantities(system, pulse, t, h=None, symmetric_excited=False):
    """Dressed-state quantities at one instant.

    Grid derivatives are taken on a local five-point stencil with step
    ``h`` (default duration/1000).
    """
    h = _default_step(pulse) if h is None else h
    micro = t + h * np.arange(-2.0, 3.0)
    series = quantities_series(system, pulse, micro, symmetric_excited=symmetric_excited)
    return series.at(2)


def nonadiabatic_rabi(system, pulse, t, previous=None, h=None):
    """Generalized complex Rabi frequency at one instant.

    The branch minimizing |rabi_na(t) - previous| is chosen when a previous
    grid value is supplied; otherwise the sgn(Delta) convention applies.
    """
    h = _default_step(pulse) if h is None else h
    delta = detuning(system, pulse)
    d_na = nonadiabatic_detuning(system, pulse, t)
    dd = (
        nonadiabatic_detuning(system, pulse, t + h)
        - nonadiabatic_detuning(system, pulse, t - h)
    ) / (2.0 * h)
    env = field_mod.envelope(pulse, t)
    radicand = env**2 + d_na**2 - 2j * dd
    return matched_sqrt(radicand, previous=previous, sign=_sign_convention(delta))


def lambdas(system, pulse, t, h=None):
    """(Lambda_1, Lambda_2, Lambda'_1, Lambda'_2) at one instant."""
    q = quantities(system, pulse, t, h=h)
    return q.lambda1, q.lambda2, q.lambda1_na, q.lambda2_na


def mixing(system, pulse, t, h=None):
    """(cos_half, sin_half) mixing amplitudes at one instant."""
    q = quantities(system, pulse, t, h=h)
    return q.cos_half, q.sin_half


def dressed_frequencies(system, pulse, t, h=None, symmetric_excited=False):
    """(omega_G, omega_E) complex dressed frequencies at one instant."""
    q = quantities(system, pulse, t, h=h, symmetric_excited=symmetric_excited)
    return q.omega_G, q.omega_E


def reduce_to_ads(system, pulse, t):
    """Adiabatic-limit quantities: derivatives and damping all zeroed.

    Idempotent by construction; closed form, no grid derivatives involved.
    """
    delta = detuning(system, pulse)
    env = field_mod.envelope(pulse, t)
    sign = _sign_convention(delta)
    delta_na = complex(delta)
    rabi_na = sign * complex(np.sqrt(complex(env**2 + delta_na**2)))
    lambda1 = 0.5 * (delta_na + rabi_na)
    lambda2 = 0.5 * (delta_na - rabi_na)
    cos_half = complex(np.sqrt(lambda1 / rabi_na))
    sin_half = sign * complex(np.sqrt(-lambda2 / rabi_na))
    return NadsQuantities(
        t=float(t),
        delta=delta,
        delta_na=delta_na,
        rabi_na=rabi_na,
        lambda1=lambda1,
        lambda2=lambda2,
        lambda1_na=lambda1,
        lambda2_na=lambda2,
        omega_G=system.omega_g + lambda2,
        omega_E=system.omega_e - lambda2,
        cos_half=cos_half,
        sin_half=sin_half,
    )


def construct_nads(system, pulse, grid, series=None, symmetric_excited=False):
    """Build both dressed states over a grid.

    Dressed-frequency integrals run from the first grid point (a global
    phase per dressed state); the carrier term omega*t + phi(t) of the
    virtual components is kept absolute, since the drive fixes that phase:

        phase_G  = int omega_G dt'                      (ground real, on |g|)
        phase_Gv = phase_G + omega*t + phi(t)           (ground virtual, on |e|)
        phase_E  = int omega_E dt' + phi(t)             (excited real, on |e|)
        phase_Ev = int omega_E dt' - omega*t            (excited virtual, on |g|)

    Raises DegeneratePointError (with the offending time) if the dressed
    pair degenerates anywhere on the grid.
    """
    grid = np.asarray(grid, dtype=float)
    if series is None:
        series = quantities_series(system, pulse, grid, symmetric_excited=symmetric_excited)
    phi = np.asarray(field_mod.phase(pulse, grid))
    int_G = cumulative_trapezoid(series.omega_G, grid, initial=0.0)
    int_E = cumulative_trapezoid(series.omega_E, grid, initial=0.0)
    omega_t = pulse.carrier * grid
    return DressedSeries(
        grid=grid,
        phase_G=int_G,
        phase_Gv=int_G + omega_t + phi,
        phase_E=int_E + phi,
        phase_Ev=int_E - omega_t,
        cos_half=series.cos_half,
        sin_half=series.sin_half,
    )


def construct_ground_nads(system, pulse, grid, series=None):
    """Ground dressed state over a grid (full component series; the ground
    vector is ``ground_vectors()``/``ground_vector()``)."""
    return construct_nads(system, pulse, grid, series=series)


def construct_excited_nads(system, pulse, grid, series=None):
    """Excited dressed state over a grid; see construct_ground_nads."""
    return construct_nads(system, pulse, grid, series=series)
