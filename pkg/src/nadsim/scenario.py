"""Scenario files: sectioned key = value configuration for whole runs.

A scenario collects the system, the pulse, the evaluation grid, the
adiabaticity settings, and (optionally) the Monte Carlo stage:

    [scenario]
    unit = cm^-1            # internal | cm^-1 | GHz | THz

    [system]
    omega_g = 0.0           # frequency-valued keys convert per [scenario] unit
    omega_e = 12582.0
    gamma_g = 0.0
    gamma_e = 0.0

    [pulse]
    shape = gaussian        # constant-wave | gaussian | sech | flat-top-with-ramps
    peak_rabi = 0.1
    duration = 2.0          # times are ns for physical units
    carrier = 12581.2
    phase_offset = 0.0
    chirp_rate = 0.0
    t_on = -8.0
    t_off = 8.0

    [grid]
    t_start = -8.0
    t_end = 8.0
    steps = 2001

    [adiabaticity]
    n_max = 2
    threshold = 0.1
    margin = 10.0
    doppler_width = 0.04
    laser_width = 0.005

    [mc]                    # empty or absent section: no Monte Carlo stage
    rate_scale = 0.0001
    rate_model = virtual-population-weighted
    trajectories = 10000
    seed = 42

Comments run from '#' or ';' to end of line.  Unknown sections or keys are
rejected, with the offending line number.  All frequency-valued keys
(omega_*, gamma_*, peak_rabi, carrier, chirp_rate, *_width, rate_scale)
are converted to internal units while parsing; rendering normalizes to
internal units, so parse(render(s)) == s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ScenarioError
from .field import SHAPES, PulseSpec
from .measurement import RATE_MODELS, MCConfig
from .nads import SystemSpec
from .units import frequency_factor

_REQUIRED = object()

# section -> key -> (type tag, default); 'frequency' keys convert by unit.
_SCHEMA = {
    "scenario": {"unit": ("unit", "internal")},
    "system": {
        "omega_g": ("frequency", _REQUIRED),
        "omega_e": ("frequency", _REQUIRED),
        "gamma_g": ("frequency", 0.0),
        "gamma_e": ("frequency", 0.0),
    },
    "pulse": {
        "shape": ("shape", _REQUIRED),
        "peak_rabi": ("frequency", _REQUIRED),
        "duration": ("time", _REQUIRED),
        "carrier": ("frequency", _REQUIRED),
        "phase_offset": ("float", 0.0),
        "chirp_rate": ("frequency", 0.0),
        "t_on": ("time", -math.inf),
        "t_off": ("time", math.inf),
    },
    "grid": {
        "t_start": ("time", _REQUIRED),
        "t_end": ("time", _REQUIRED),
        "steps": ("int", _REQUIRED),
    },
    "adiabaticity": {
        "n_max": ("int", 3),
        "threshold": ("float", 0.1),
        "margin": ("float", 10.0),
        "doppler_width": ("frequency", 0.0),
        "laser_width": ("frequency", 0.0),
    },
    "mc": {
        "rate_scale": ("frequency", _REQUIRED),
        "rate_model": ("rate_model", "constant"),
        "trajectories": ("int", 1000),
        "seed": ("int", 0),
    },
}


@dataclass(frozen=True)
class GridSpec:
    t_start: float
    t_end: float
    steps: int

    def times(self):
        return np.linspace(self.t_start, self.t_end, self.steps)


@dataclass(frozen=True)
class AdiabaticitySettings:
    n_max: int = 3
    threshold: float = 0.1
    margin: float = 10.0


@dataclass(frozen=True)
class McSettings:
    rate_scale: float
    rate_model: str = "constant"
    trajectories: int = 1000
    seed: int = 0


@dataclass(frozen=True)
class Scenario:
    system: SystemSpec
    pulse: PulseSpec
    grid: GridSpec
    adiabaticity: AdiabaticitySettings = AdiabaticitySettings()
    doppler_width: float = 0.0
    laser_width: float = 0.0
    mc: McSettings | None = None
    unit: str = field(default="internal", compare=False)

    def times(self):
        return self.grid.times()

    def mc_config(self, trajectories=None, seed=None):
        """Build the runnable MCConfig on this scenario's grid."""
        if self.mc is None:
            raise ScenarioError("scenario has no [mc] section")
        return MCConfig(
            rate_scale=self.mc.rate_scale,
            rate_model=self.mc.rate_model,
            trajectories=self.mc.trajectories if trajectories is None else trajectories,
            seed=self.mc.seed if seed is None else seed,
            grid=self.times(),
        )


def _parse_value(kind, text, key, line_no, factor):
    if kind == "unit":
        return text
    if kind == "shape":
        if text not in SHAPES:
            raise ScenarioError(
                f"unknown pulse shape {text!r} (known: {', '.join(SHAPES)})",
                key=key,
                line=line_no,
            )
        return text
    if kind == "rate_model":
        if text not in RATE_MODELS:
            raise ScenarioError(
                f"unknown rate model {text!r} (known: {', '.join(RATE_MODELS)})",
                key=key,
                line=line_no,
            )
        return text
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ScenarioError(f"expected an integer, got {text!r}", key=key, line=line_no)
    try:
        value = float(text)
    except ValueError:
        raise ScenarioError(f"expected a number, got {text!r}", key=key, line=line_no)
    if kind == "frequency":
        return value * factor
    return value


def _scan_lines(text):
    """Yield (line_no, section, key, value) after comment stripping."""
    section = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SCHEMA:
                raise ScenarioError(
                    f"unknown section [{section}] (known: {', '.join(_SCHEMA)})",
                    line=line_no,
                )
            yield line_no, section, None, None
            continue
        if "=" not in line:
            raise ScenarioError(f"expected 'key = value', got {line!r}", line=line_no)
        if section is None:
            raise ScenarioError("key outside any [section]", line=line_no)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA[section]:
            raise ScenarioError(
                f"unknown key in [{section}] (known: {', '.join(_SCHEMA[section])})",
                key=f"{section}.{key}",
                line=line_no,
            )
        yield line_no, section, key, value


def parse_scenario(text):
    """Parse and fully validate a scenario; raises ScenarioError on defects."""
    seen = {}
    sections_present = set()
    for line_no, section, key, value in _scan_lines(text):
        sections_present.add(section)
        if key is None:
            continue
        full = f"{section}.{key}"
        if full in seen:
            raise ScenarioError("duplicate key", key=full, line=line_no)
        seen[full] = (value, line_no)

    unit = seen.get("scenario.unit", ("internal", None))[0]
    try:
        factor = frequency_factor(unit)
    except ValueError as exc:
        raise ScenarioError(str(exc), key="scenario.unit",
                            line=seen.get("scenario.unit", (None, None))[1])

    def section_values(section):
        out = {}
        for key, (kind, default) in _SCHEMA[section].items():
            full = f"{section}.{key}"
            if full in seen:
                text_value, line_no = seen[full]
                out[key] = _parse_value(kind, text_value, full, line_no, factor)
            elif default is _REQUIRED:
                raise ScenarioError("missing required key", key=full)
            else:
                out[key] = default
        return out

    for required_section in ("system", "pulse", "grid"):
        if required_section not in sections_present:
            raise ScenarioError(f"missing required section [{required_section}]")

    sys_values = section_values("system")
    try:
        system = SystemSpec(**sys_values)
    except ValueError as exc:
        raise ScenarioError(str(exc), key="system")

    pulse_values = section_values("pulse")
    try:
        pulse = PulseSpec(**pulse_values)
    except ValueError as exc:
        raise ScenarioError(str(exc), key="pulse")

    grid_values = section_values("grid")
    if grid_values["steps"] < 2:
        raise ScenarioError(
            "grid needs at least 2 points",
            key="grid.steps",
            line=seen.get("grid.steps", (None, None))[1],
        )
    if not grid_values["t_start"] < grid_values["t_end"]:
        raise ScenarioError("t_start must be < t_end", key="grid.t_start")
    grid = GridSpec(**grid_values)

    adiab_values = section_values("adiabaticity")
    doppler = adiab_values.pop("doppler_width")
    laser = adiab_values.pop("laser_width")
    adiab = AdiabaticitySettings(**adiab_values)

    mc = None
    if any(full.startswith("mc.") for full in seen):
        mc_values = section_values("mc")
        try:
            mc = McSettings(**mc_values)
            MCConfig(rate_scale=mc.rate_scale, rate_model=mc.rate_model,
                     trajectories=mc.trajectories, seed=mc.seed)
        except ValueError as exc:
            raise ScenarioError(str(exc), key="mc")

    return Scenario(
        system=system,
        pulse=pulse,
        grid=grid,
        adiabaticity=adiab,
        doppler_width=doppler,
        laser_width=laser,
        mc=mc,
        unit=unit,
    )


def render_scenario(scenario):
    """Serialize a scenario in internal units; parse(render(s)) == s."""
    lines = ["[scenario]", "unit = internal", "", "[system]"]
    s = scenario.system
    lines += [
        f"omega_g = {s.omega_g!r}",
        f"omega_e = {s.omega_e!r}",
        f"gamma_g = {s.gamma_g!r}",
        f"gamma_e = {s.gamma_e!r}",
        "",
        "[pulse]",
    ]
    p = scenario.pulse
    lines += [
        f"shape = {p.shape}",
        f"peak_rabi = {p.peak_rabi!r}",
        f"duration = {p.duration!r}",
        f"carrier = {p.carrier!r}",
        f"phase_offset = {p.phase_offset!r}",
        f"chirp_rate = {p.chirp_rate!r}",
        f"t_on = {p.t_on!r}",
        f"t_off = {p.t_off!r}",
        "",
        "[grid]",
        f"t_start = {scenario.grid.t_start!r}",
        f"t_end = {scenario.grid.t_end!r}",
        f"steps = {scenario.grid.steps}",
        "",
        "[adiabaticity]",
        f"n_max = {scenario.adiabaticity.n_max}",
        f"threshold = {scenario.adiabaticity.threshold!r}",
        f"margin = {scenario.adiabaticity.margin!r}",
        f"doppler_width = {scenario.doppler_width!r}",
        f"laser_width = {scenario.laser_width!r}",
    ]
    if scenario.mc is not None:
        lines += [
            "",
            "[mc]",
            f"rate_scale = {scenario.mc.rate_scale!r}",
            f"rate_model = {scenario.mc.rate_model}",
            f"trajectories = {scenario.mc.trajectories}",
            f"seed = {scenario.mc.seed}",
        ]
    return "\n".join(lines) + "\n"


# Pulsed pump-probe scenario in the style of the classic two-step
# absorption experiments: the carrier sits 0.8 cm^-1 below the transition,
# far outside both the Doppler width of the excited level and the laser
# linewidth, so the frequency-form adiabatic condition holds with a wide
# margin and only the virtual level is driven coherently.  Incoherent
# transfer to the real excited level is supplied by collisions (atomic
# density ~3e13 cm^-3, temperature above 400 K); no collision-rate formula
# is available at this level of modeling, so rate_scale below is a
# calibration chosen to reproduce the observed >10x ratio between the
# coherent (virtual) and incoherent (real) population peaks.
GRISCHKOWSKY = """\
[scenario]
unit = cm^-1

[system]
omega_g = 0.0
omega_e = 12582.0       # alkali D-line scale
gamma_g = 0.0
gamma_e = 0.0

[pulse]
shape = gaussian
peak_rabi = 0.1
duration = 2.0          # ns, 1/e half-width; transform limit ~ laser width
carrier = 12581.2       # 0.8 cm^-1 below the transition
t_on = -8.0
t_off = 8.0

[grid]
t_start = -8.0
t_end = 8.0
steps = 2001

[adiabaticity]
n_max = 2
threshold = 0.1
doppler_width = 0.04    # cm^-1, excited-level Doppler width
laser_width = 0.005     # cm^-1, laser spectral width

[mc]
rate_scale = 0.0001     # cm^-1; calibrated transfer-rate scale, not derived
rate_model = virtual-population-weighted
trajectories = 10000
seed = 42
"""

BUILTIN_SCENARIOS = {"grischkowsky": GRISCHKOWSKY}


def load_scenario(name_or_path):
    """Load a scenario from a built-in name or a file path."""
    if name_or_path in BUILTIN_SCENARIOS:
        return parse_scenario(BUILTIN_SCENARIOS[name_or_path])
    try:
        with open(name_or_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(
            f"cannot read scenario {name_or_path!r} "
            f"(not a file, and not one of: {', '.join(BUILTIN_SCENARIOS)}): {exc}"
        )
    return parse_scenario(text)
