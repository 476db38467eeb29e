"""Frequency-unit conversion.

All internal arithmetic uses a single angular-frequency unit with hbar = 1.
When a scenario declares a physical unit, every frequency-dimensioned value
(level frequencies, Rabi amplitudes, carrier, damping rates, spectral
widths, transfer rates) is converted on input:

    internal = value * frequency_factor(unit)

The internal unit is rad/ns with times in ns, so

    1 cm^-1 -> 2*pi*29.9792458 rad/ns
    1 GHz   -> 2*pi           rad/ns
    1 THz   -> 2*pi*1000      rad/ns

Chirp rates convert with the same factor (declared unit per ns).  With
``unit = internal`` values pass through unchanged and the time unit is
whatever the user makes it.
"""

import math

SPEED_OF_LIGHT_CM_PER_NS = 29.9792458

FREQUENCY_FACTORS = {
    "internal": 1.0,
    "cm^-1": 2.0 * math.pi * SPEED_OF_LIGHT_CM_PER_NS,
    "GHz": 2.0 * math.pi,
    "THz": 2.0 * math.pi * 1000.0,
}


def frequency_factor(unit):
    """Multiplier taking a value in `unit` to internal angular frequency."""
    try:
        return FREQUENCY_FACTORS[unit]
    except KeyError:
        known = ", ".join(sorted(FREQUENCY_FACTORS))
        raise ValueError(f"unknown frequency unit {unit!r} (known: {known})") from None


def to_internal(value, unit):
    return value * frequency_factor(unit)
