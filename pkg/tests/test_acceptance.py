"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Expected values marked "frozen" were computed with the independent
oracles named in the corresponding test (closed forms, eigenvalue checks,
the adaptive integrator) and pinned here.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

import nadsim as ns
from nadsim import adiabaticity as ad
from nadsim import cli
from nadsim import measurement as mc

SQRT2 = math.sqrt(2.0)
WAVENUMBER = 2.0 * math.pi * 29.9792458


@contextmanager
def criterion(number, title):
    started = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"criterion {number} [{title}]: FAIL")
        raise
    print(f"criterion {number} [{title}]: PASS ({time.perf_counter() - started:.2f}s)")


def chirped_damped_gaussian():
    system = ns.SystemSpec(omega_g=0.0, omega_e=3.0, gamma_g=0.05, gamma_e=0.15)
    pulse = ns.PulseSpec(
        shape=ns.GAUSSIAN, peak_rabi=1.2, duration=20.0, carrier=2.0,
        chirp_rate=0.002, phase_offset=0.3, t_on=-80.0, t_off=80.0,
    )
    return system, pulse


def test_criterion_1_algebraic_identities():
    with criterion(1, "algebraic identities on a 1e4-point chirped damped grid"):
        system, pulse = chirped_damped_gaussian()
        grid = np.linspace(-80.0, 80.0, 10000)
        started = time.perf_counter()
        series = ns.quantities_series(system, pulse, grid)
        mix = np.abs(series.cos_half**2 + series.sin_half**2 - 1.0).max()
        lam_sum = np.abs(series.lambda1 + series.lambda2 - series.delta_na).max()
        lam_diff = np.abs(series.lambda1 - series.lambda2 - series.rabi_na).max()
        elapsed = time.perf_counter() - started
        assert mix < 1e-12
        assert lam_sum < 1e-12
        assert lam_diff < 1e-12
        assert elapsed < 1.0


def test_criterion_2_limit_chain():
    with criterion(2, "zero field -> bare states; nonadiabatic terms zeroed -> ADS"):
        # zero field: dressed states reduce to bare states pointwise
        system = ns.SystemSpec(omega_g=0.4, omega_e=10.0)
        off = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=0.0, duration=1.0, carrier=9.0)
        grid = np.linspace(0.0, 20.0, 501)
        dressed = ns.construct_nads(system, off, grid)
        c_g, c_e = dressed.ground_vectors()
        assert (np.abs(c_e) ** 2).max() < 1e-12                      # virtual populations
        assert np.abs(c_g - np.exp(-1j * 0.4 * grid)).max() < 1e-10  # bare ground phase
        e_g, e_e = dressed.excited_vectors()
        assert (np.abs(e_g) ** 2).max() < 1e-12

        # nonadiabatic terms zeroed: series equals the closed-form ADS
        system, pulse = chirped_damped_gaussian()
        grid = np.linspace(-60.0, 60.0, 501)
        series = ns.quantities_series(system, pulse, grid, ads=True)
        for i in range(0, 501, 25):
            want = ns.reduce_to_ads(system, pulse, float(grid[i]))
            assert complex(series.rabi_na[i]) == pytest.approx(want.rabi_na, rel=1e-12)
            assert complex(series.cos_half[i]) == pytest.approx(want.cos_half, rel=1e-12)
            assert complex(series.sin_half[i]) == pytest.approx(want.sin_half, rel=1e-12)
            assert complex(series.omega_G[i]) == pytest.approx(want.omega_G, rel=1e-12)


def test_criterion_3_static_closed_form():
    with criterion(3, "static closed form delta=1, rabi=1, gamma=0"):
        system = ns.SystemSpec(omega_g=0.0, omega_e=10.0)
        pulse = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=1.0, duration=1.0, carrier=9.0)
        q = ns.quantities(system, pulse, 0.0)
        assert abs(q.rabi_na - SQRT2) < 1e-12
        assert abs(q.lambda2 - (1.0 - SQRT2) / 2.0) < 1e-12
        assert abs(abs(q.cos_half) ** 2 - 0.8535533905932737) < 1e-12
        assert abs(abs(q.sin_half) ** 2 - 0.14644660940672624) < 1e-12


def test_criterion_4_oracle_fidelity():
    with criterion(4, "integrator tracks the constructed ground dressed state"):
        started = time.perf_counter()
        system = ns.SystemSpec(omega_g=0.0, omega_e=120.0)
        pulse = ns.PulseSpec(shape=ns.GAUSSIAN, peak_rabi=1.0, duration=80.0,
                             carrier=100.0, t_on=-40.0, t_off=40.0)

        # adiabaticity gate on the pulse-support grid: every n <= 1 member
        support = np.linspace(-40.0, 40.0, 1601)
        report = ad.check(system, pulse, support, n_max=1, threshold=0.02)
        assert report.satisfied
        assert max(e.worst_ratio for e in report.entries) < 0.02

        # fidelity on a grid extending past field-off
        grid = np.linspace(-50.0, 50.0, 2001)
        traj = ns.integrate(system, pulse, grid, mode="rotating-frame")
        series = ns.quantities_series(system, pulse, grid)
        dressed = ns.construct_nads(system, pulse, grid, series=series)
        fidelity = ns.fidelity_to_ground(traj, dressed)
        assert fidelity.min() > 0.999
        assert abs(traj.c_g[-1]) ** 2 > 0.999
        assert time.perf_counter() - started < 10.0


def test_criterion_5_resonance_violation():
    with criterion(5, "resonant system reported violated regardless of slowness"):
        system = ns.SystemSpec(omega_g=0.0, omega_e=10.0)
        pulse = ns.PulseSpec(shape=ns.GAUSSIAN, peak_rabi=0.01, duration=1e6,
                             carrier=10.0, t_on=-2e6, t_off=2e6)
        report = ad.check(system, pulse, np.linspace(-1e6, 1e6, 501), n_max=1)
        assert report.resonant
        assert not report.satisfied
        # the CLI check reports the same verdict
        import tempfile, os
        scenario = (
            "[system]\nomega_g = 0.0\nomega_e = 10.0\n\n"
            "[pulse]\nshape = gaussian\npeak_rabi = 0.01\nduration = 1e6\n"
            "carrier = 10.0\nt_on = -2e6\nt_off = 2e6\n\n"
            "[grid]\nt_start = -1e6\nt_end = 1e6\nsteps = 501\n"
        )
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "resonant.cfg")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(scenario)
            assert cli.main(["check", "--scenario", path, "--out", tmp]) == 0


def test_criterion_6_frequency_form_and_correlation_signatures():
    with criterion(6, "frequency-form margin and coherent/incoherent signatures"):
        assert ad.frequency_form_check(0.8, 0.04, 0.005) is True

        scenario = ns.load_scenario("grischkowsky")
        grid = scenario.times()
        report = ad.check(
            scenario.system, scenario.pulse, grid,
            n_max=scenario.adiabaticity.n_max,
            threshold=scenario.adiabaticity.threshold,
            doppler_width=scenario.doppler_width,
            laser_width=scenario.laser_width,
        )
        assert report.frequency_form.satisfied
        assert report.entry(0, 0).satisfied

        # rate_scale in the built-in scenario is a calibration (no transfer
        # law is prescribed); the signatures below are what it reproduces
        config = scenario.mc_config()
        series = ns.quantities_series(scenario.system, scenario.pulse, grid)
        pops = mc.expected_population_series(config, scenario.system, scenario.pulse,
                                             series=series)
        diag = ns.coherence_diagnostics(pops)
        assert diag.r_coherent > 0.99
        assert diag.r_incoherent > 0.99
        assert diag.peak_ratio > 10.0


def test_criterion_7_monte_carlo_collapse():
    with criterion(7, "collapse ensemble: pointer correlation, telegraph law, determinism"):
        started = time.perf_counter()
        system = ns.SystemSpec(omega_g=0.0, omega_e=10.0)
        pulse = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=1.0, duration=10.0,
                             carrier=9.0, t_on=0.0, t_off=10.0)
        grid = np.linspace(0.0, 10.0, 2001)
        config = mc.MCConfig(rate_scale=0.1, rate_model="constant",
                             trajectories=10000, seed=42, grid=grid)
        stats = mc.ensemble(config, system, pulse)

        # every outcome is a single bare state, perfectly pointer-correlated
        assert stats.fraction_ground + stats.fraction_excited == pytest.approx(1.0)
        assert stats.pointer_correlation == 1.0

        p_closed = 0.5 * (1.0 - math.exp(-2.0 * 0.1 * 10.0))
        sigma = math.sqrt(p_closed * (1.0 - p_closed) / config.trajectories)
        assert abs(stats.fraction_excited - p_closed) < 3.0 * sigma

        rerun = mc.ensemble(config, system, pulse)
        assert rerun.fraction_excited == stats.fraction_excited
        assert np.array_equal(rerun.occupancy_excited, stats.occupancy_excited)
        assert np.array_equal(rerun.dwell_ground, stats.dwell_ground)
        assert np.array_equal(rerun.dwell_excited, stats.dwell_excited)
        assert np.array_equal(rerun.loop_durations, stats.loop_durations)
        assert time.perf_counter() - started < 30.0


def test_criterion_8_special_case_nesting_and_rescaling():
    with criterion(8, "member nesting identities and the time-rescaling law"):
        # (0,0) equals the ordinary envelope condition on a chirp-free pulse
        system = ns.SystemSpec(omega_g=0.0, omega_e=10.0, gamma_g=0.02, gamma_e=0.08)
        pulse = ns.PulseSpec(shape=ns.GAUSSIAN, peak_rabi=1.0, duration=50.0, carrier=9.0)
        for t in np.linspace(-120.0, 120.0, 49):
            a = ad.condition_ratio(system, pulse, float(t), 0, 0)
            b = ad.ordinary_condition(system, pulse, float(t))
            assert abs(a - b) < 1e-12

        # (0,1) equals the Born-Fock form on constant-envelope chirped fields
        chirped = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=0.5, duration=10.0,
                               carrier=9.0, chirp_rate=0.05)
        for t in np.linspace(0.1, 8.0, 25):
            a = ad.condition_ratio(system, chirped, float(t), 0, 1)
            assert abs(a - abs(0.05 * t) / 0.5) < 1e-12

        # worst_ratio of the dilated self-similar family scales as s^-(n+1)
        base_system = ns.SystemSpec(omega_g=0.0, omega_e=10.0)

        def worst(s):
            tau = 80.0 * s
            p = ns.PulseSpec(shape=ns.SECH, peak_rabi=1.0, duration=tau, carrier=8.0)
            report = ad.check(base_system, p, np.linspace(-3 * tau, 3 * tau, 2001), n_max=3)
            return {(e.n, e.k): e.worst_ratio for e in report.entries}

        base = worst(1)
        for s in (2, 10):
            scaled = worst(s)
            for (n, k), value in base.items():
                assert scaled[(n, k)] == pytest.approx(value * s ** (-(n + 1)), rel=0.05)
