import math

import numpy as np
import pytest

import nadsim as ns
from nadsim import nads
from nadsim.errors import DegeneratePointError

SQRT2 = math.sqrt(2.0)


def static_pair(delta=1.0, omega=1.0, gamma_g=0.0, gamma_e=0.0, chirp=0.0):
    """Constant-wave drive with the requested static detuning."""
    system = ns.SystemSpec(omega_g=0.0, omega_e=10.0, gamma_g=gamma_g, gamma_e=gamma_e)
    pulse = ns.PulseSpec(
        shape=ns.CONSTANT_WAVE, peak_rabi=omega, duration=1.0,
        carrier=10.0 - delta, chirp_rate=chirp,
    )
    return system, pulse


def chirped_damped_gaussian():
    system = ns.SystemSpec(omega_g=0.0, omega_e=3.0, gamma_g=0.05, gamma_e=0.15)
    pulse = ns.PulseSpec(
        shape=ns.GAUSSIAN, peak_rabi=1.2, duration=20.0, carrier=2.0,
        chirp_rate=0.002, phase_offset=0.3, t_on=-80.0, t_off=80.0,
    )
    return system, pulse


class TestDetuning:
    def test_resonance(self):
        system = ns.SystemSpec(omega_g=0.0, omega_e=10.0)
        pulse = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=1.0, duration=1.0, carrier=10.0)
        assert ns.detuning(system, pulse) == 0.0

    def test_direct_subtraction(self):
        system = ns.SystemSpec(omega_g=0.0, omega_e=10.0)
        pulse = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=1.0, duration=1.0, carrier=9.0)
        assert ns.detuning(system, pulse) == 1.0

    def test_wavenumber_scenario_conversion(self):
        scenario = ns.load_scenario("grischkowsky")
        expected = 0.8 * 2.0 * math.pi * 29.9792458
        assert ns.detuning(scenario.system, scenario.pulse) == pytest.approx(expected, rel=1e-12)


class TestNonadiabaticDetuning:
    def test_static_undamped(self):
        system, pulse = static_pair()
        assert ns.nonadiabatic_detuning(system, pulse, 0.3) == 1.0 + 0.0j

    def test_damping_shift(self):
        system, pulse = static_pair(gamma_g=0.1, gamma_e=0.1)
        assert ns.nonadiabatic_detuning(system, pulse, 0.3) == 1.0 - 0.1j

    def test_chirp_shift(self):
        system, pulse = static_pair(chirp=0.05)
        assert ns.nonadiabatic_detuning(system, pulse, 1.0) == pytest.approx(0.95 + 0.0j)


class TestNonadiabaticRabi:
    def test_static_generalized_rabi(self):
        system, pulse = static_pair()
        assert ns.nonadiabatic_rabi(system, pulse, 0.0) == pytest.approx(SQRT2, rel=1e-12)

    def test_zero_field_reduces_to_detuning(self):
        system, pulse = static_pair(omega=0.0)
        assert ns.nonadiabatic_rabi(system, pulse, 0.0) == pytest.approx(1.0, rel=1e-12)

    def test_damped_complex_root(self):
        # sqrt(1 + (1 - 0.1i)^2) = sqrt(1.99 - 0.2i); frozen from the
        # principal root and verified by squaring below.
        system, pulse = static_pair(gamma_g=0.1, gamma_e=0.1)
        value = ns.nonadiabatic_rabi(system, pulse, 0.0)
        expected = 1.4124491141000004 - 0.07079901074080044j
        assert value == pytest.approx(expected, rel=1e-10)
        assert value**2 == pytest.approx(1.99 - 0.2j, rel=1e-10)

    def test_branch_matching_previous(self):
        system, pulse = static_pair()
        plus = ns.nonadiabatic_rabi(system, pulse, 0.0)
        minus = ns.nonadiabatic_rabi(system, pulse, 0.0, previous=-plus)
        assert minus == -plus


class TestLambdas:
    def test_static_values(self):
        system, pulse = static_pair()
        l1, l2, l1_na, l2_na = ns.lambdas(system, pulse, 0.0)
        assert l1 == pytest.approx((1 + SQRT2) / 2, rel=1e-12)
        assert l2 == pytest.approx((1 - SQRT2) / 2, rel=1e-12)
        assert l1_na == pytest.approx(l1, rel=1e-12)
        assert l2_na == pytest.approx(l2, rel=1e-12)

    def test_zero_field_limit(self):
        system, pulse = static_pair(omega=0.0)
        l1, l2, _, _ = ns.lambdas(system, pulse, 0.0)
        assert l1 == pytest.approx(1.0, rel=1e-12)
        assert l2 == pytest.approx(0.0, abs=1e-12)

    def test_sum_and_difference_identities(self):
        system, pulse = chirped_damped_gaussian()
        series = ns.quantities_series(system, pulse, np.linspace(-60, 60, 501))
        assert np.abs(series.lambda1 + series.lambda2 - series.delta_na).max() < 1e-12
        assert np.abs(series.lambda1 - series.lambda2 - series.rabi_na).max() < 1e-12


class TestMixing:
    def test_static_moduli(self):
        system, pulse = static_pair()
        cos_half, sin_half = ns.mixing(system, pulse, 0.0)
        assert abs(cos_half) ** 2 == pytest.approx(0.8535533905932737, rel=1e-12)
        assert abs(sin_half) ** 2 == pytest.approx(0.14644660940672624, rel=1e-12)

    def test_zero_field_is_bare(self):
        system, pulse = static_pair(omega=0.0)
        cos_half, sin_half = ns.mixing(system, pulse, 0.0)
        assert cos_half == pytest.approx(1.0, rel=1e-12)
        assert sin_half == pytest.approx(0.0, abs=1e-12)

    def test_identity_everywhere(self):
        system, pulse = chirped_damped_gaussian()
        series = ns.quantities_series(system, pulse, np.linspace(-70, 70, 2001))
        assert np.abs(series.cos_half**2 + series.sin_half**2 - 1.0).max() < 1e-12

    def test_negative_detuning_sign_convention(self):
        system, pulse = static_pair(delta=-1.0)
        cos_half, sin_half = ns.mixing(system, pulse, 0.0)
        # the sgn(Delta) factor keeps cos_half the dominant amplitude
        assert abs(cos_half) ** 2 == pytest.approx(0.8535533905932737, rel=1e-12)
        assert sin_half.real < 0.0


class TestDressedFrequencies:
    def test_static_light_shift(self):
        system, pulse = static_pair()
        omega_G, _ = ns.dressed_frequencies(system, pulse, 0.0)
        assert omega_G == pytest.approx((1 - SQRT2) / 2, rel=1e-12)

    def test_bare_limit(self):
        system, pulse = static_pair(omega=0.0)
        omega_G, omega_E = ns.dressed_frequencies(system, pulse, 0.0)
        assert omega_G == pytest.approx(system.omega_g, abs=1e-12)
        assert omega_E == pytest.approx(system.omega_e, abs=1e-12)

    def test_damped_formula_as_printed(self):
        system, pulse = static_pair(gamma_g=0.0, gamma_e=0.2)
        q = ns.quantities(system, pulse, 0.0)
        assert q.omega_E == pytest.approx(system.omega_e - q.lambda2 - 0.1j, rel=1e-12)

    def test_imaginary_part_against_eigenvalue(self):
        # for gamma_g = 0 the ground frequency shift must equal an
        # eigenvalue of the static non-Hermitian 2x2 in the detuning frame
        system, pulse = static_pair(gamma_g=0.0, gamma_e=0.2)
        q = ns.quantities(system, pulse, 0.0)
        h = np.array([[0.0, -0.5], [-0.5, 1.0 - 0.1j]])
        eigs = np.linalg.eigvals(h)
        ground = eigs[np.argmin(eigs.real)]
        assert q.lambda2 == pytest.approx(complex(ground), rel=1e-12)

    def test_symmetric_excited_switch(self):
        system, pulse = static_pair(gamma_g=0.0, gamma_e=0.2)
        q = ns.quantities(system, pulse, 0.0, symmetric_excited=True)
        assert q.omega_E == pytest.approx(system.omega_e - q.lambda2, rel=1e-12)

    def test_repulsion_equal_opposite(self):
        system, pulse = static_pair()
        q = ns.quantities(system, pulse, 0.0)
        shift_g = (q.omega_G - system.omega_g).real
        shift_e = (q.omega_E - system.omega_e).real
        assert shift_g < 0.0
        assert shift_e > 0.0
        assert shift_g == pytest.approx(-shift_e, rel=1e-12)


class TestConstruction:
    def test_zero_field_is_bare_ground(self):
        system = ns.SystemSpec(omega_g=0.7, omega_e=10.0)
        pulse = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=0.0, duration=1.0, carrier=9.0)
        grid = np.linspace(0.0, 20.0, 201)
        dressed = ns.construct_ground_nads(system, pulse, grid)
        c_g, c_e = dressed.ground_vectors()
        assert np.abs(c_g - np.exp(-1j * system.omega_g * grid)).max() < 1e-10
        # virtual population (squared modulus) below 1e-12
        assert (np.abs(c_e) ** 2).max() < 1e-12

    def test_static_moduli_constant(self):
        system, pulse = static_pair()
        grid = np.linspace(0.0, 10.0, 401)
        dressed = ns.construct_nads(system, pulse, grid)
        c_g, c_e = dressed.ground_vectors()
        assert np.abs(np.abs(c_g) ** 2 - 0.8535533905932737).max() < 1e-10
        assert np.abs(np.abs(c_e) ** 2 - 0.14644660940672624).max() < 1e-10

    def test_damped_excited_components_decay(self):
        system, pulse = static_pair(gamma_e=0.2)
        grid = np.linspace(0.0, 20.0, 501)
        dressed = ns.construct_excited_nads(system, pulse, grid)
        for name in ("e_real", "e_virtual"):
            moduli = np.abs(getattr(dressed, name))
            assert np.all(np.diff(moduli) < 0.0)

    def test_components_carry_opposite_bare_character(self):
        # ground: real on |g>, virtual on |e>; excited mirrored
        system, pulse = static_pair()
        grid = np.linspace(0.0, 5.0, 101)
        dressed = ns.construct_nads(system, pulse, grid)
        at = dressed.at(50)
        g_vec = at.ground_vector()
        e_vec = at.excited_vector()
        assert abs(g_vec[0]) > abs(g_vec[1])
        assert abs(e_vec[1]) > abs(e_vec[0])

    def test_degenerate_point_reported_with_time(self):
        system = ns.SystemSpec(omega_g=0.0, omega_e=10.0, gamma_g=1.0, gamma_e=1.0)
        pulse = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=1.0, duration=1.0, carrier=10.0)
        with pytest.raises(DegeneratePointError) as err:
            ns.construct_nads(system, pulse, np.linspace(0.0, 1.0, 11))
        assert err.value.t == 0.0


class TestAdsReduction:
    def test_static_undamped_equals_full(self):
        system, pulse = static_pair()
        full = ns.quantities(system, pulse, 0.4)
        ads = ns.reduce_to_ads(system, pulse, 0.4)
        for name in ("delta_na", "rabi_na", "lambda1", "lambda2", "cos_half", "sin_half"):
            assert getattr(ads, name) == pytest.approx(getattr(full, name), rel=1e-10)

    def test_damping_removed(self):
        system, pulse = static_pair(gamma_g=0.1, gamma_e=0.1)
        ads = ns.reduce_to_ads(system, pulse, 0.0)
        assert ads.delta_na == 1.0 + 0.0j

    def test_derivative_corrections_removed(self):
        system = ns.SystemSpec(omega_g=0.0, omega_e=3.0)
        pulse = ns.PulseSpec(shape=ns.GAUSSIAN, peak_rabi=1.0, duration=10.0, carrier=2.0)
        ads = ns.reduce_to_ads(system, pulse, 10.0)
        assert ads.lambda1_na == ads.lambda1
        assert ads.lambda2_na == ads.lambda2

    def test_idempotent(self):
        system, pulse = chirped_damped_gaussian()
        once = ns.reduce_to_ads(system, pulse, 5.0)
        twice = ns.reduce_to_ads(system, pulse, 5.0)
        assert once == twice

    def test_series_ads_mode_matches_scalar(self):
        system, pulse = chirped_damped_gaussian()
        grid = np.linspace(-20.0, 20.0, 81)
        series = ns.quantities_series(system, pulse, grid, ads=True)
        for i in (0, 17, 80):
            scalar = ns.reduce_to_ads(system, pulse, float(grid[i]))
            got = series.at(i)
            assert got.rabi_na == pytest.approx(scalar.rabi_na, rel=1e-12)
            assert got.cos_half == pytest.approx(scalar.cos_half, rel=1e-12)
            assert got.sin_half == pytest.approx(scalar.sin_half, rel=1e-12)


class TestBranchContinuity:
    def test_no_jumps_beyond_squared_variation(self):
        system, pulse = chirped_damped_gaussian()
        grid = np.linspace(-70.0, 70.0, 4001)
        series = ns.quantities_series(system, pulse, grid)
        rabi = series.rabi_na
        step = np.abs(np.diff(rabi))
        squared_step = np.abs(np.diff(rabi**2))
        bound = squared_step / np.abs(rabi[:-1])
        assert np.all(step <= bound + 1e-12)

    def test_scalar_matches_series(self):
        system, pulse = chirped_damped_gaussian()
        grid = np.linspace(-20.0, 20.0, 2001)
        series = ns.quantities_series(system, pulse, grid)
        h = float(grid[1] - grid[0])
        for i in (400, 1000, 1600):
            scalar = ns.quantities(system, pulse, float(grid[i]), h=h)
            assert scalar.rabi_na == pytest.approx(complex(series.rabi_na[i]), rel=1e-6)
            assert scalar.cos_half == pytest.approx(complex(series.cos_half[i]), rel=1e-6)


class TestZeroFieldLimitPattern:
    def test_quantities_pattern(self):
        system, pulse = static_pair(omega=0.0)
        q = ns.quantities(system, pulse, 0.0)
        assert q.delta_na == pytest.approx(1.0 + 0j, rel=1e-12)
        assert q.rabi_na == pytest.approx(1.0 + 0j, rel=1e-12)
        assert q.lambda1 == pytest.approx(1.0 + 0j, rel=1e-12)
        assert q.lambda2 == pytest.approx(0.0 + 0j, abs=1e-12)
        assert (q.cos_half, q.sin_half) == (pytest.approx(1.0), pytest.approx(0.0, abs=1e-12))
