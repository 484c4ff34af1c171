import math

import numpy as np
import pytest

from trapbose.asymptotics import (
    e_fold_width,
    free_energy_estimate,
    model_density_matrix,
    momentum_profile,
    momentum_width_ratio,
    position_profile,
    radial_fourier,
    s_wave_modes,
    tf_edge_exponent,
)
from trapbose.errors import InvalidInputError
from trapbose.gp import gp_minimize
from trapbose.idealgas import canonical_partition, hermite_axis_density, solve_mu0, thermal_momentum_values
from trapbose.idealgas.spectrum import OscillatorSpectrum
from trapbose.params import TrapParams


def test_noninteracting_reduces_to_ideal_gas():
    p = TrapParams.from_t_over_tc(1.0, 500, 0.5)
    est = free_energy_estimate(p, 0.0)
    assert est.e_gp == 0.0 and est.f_total == est.f0
    assert est.ensemble == "canonical"
    gc = solve_mu0(p)
    spec = OscillatorSpectrum(1.0, gc.n_max)
    can = canonical_partition(spec.energies, p.beta, 500, spec.degeneracies)
    assert est.f0 == can.free_energy and est.n0 == can.n0_canonical


def test_ensemble_gap_within_sandwich():
    for t in (0.3, 0.6, 1.2):
        p = TrapParams.from_t_over_tc(1.0, 300, t)
        fc = free_energy_estimate(p, 0.0, "canonical").f0
        fg = free_energy_estimate(p, 0.0, "grand_canonical").f0
        assert fg <= fc + 1e-9 * abs(fc)
        assert fc - fg <= p.temperature * (math.log1p(300) + 1)


def test_unknown_ensemble():
    with pytest.raises(InvalidInputError):
        free_energy_estimate(TrapParams(1.0, 1.0, 10), 1.0, "microcanonical")


def test_above_tc_gp_correction_negligible():
    p = TrapParams.from_t_over_tc(1.0, 1000, 1.5)
    est = free_energy_estimate(p, 1.0)
    assert est.n0 / 1000 < 1e-2
    unit = gp_minimize(1.0, 1.0, 1.0).energy
    assert est.e_gp / 1000 < 1e-2 * unit


def test_free_energy_nondecreasing_in_beta():
    f = [free_energy_estimate(TrapParams.from_t_over_tc(1.0, 400, t), 1.0).f_total for t in (1.2, 0.9, 0.7, 0.5, 0.3)]
    assert all(x <= y for x, y in zip(f, f[1:]))


def test_model_density_matrix():
    p = TrapParams.from_t_over_tc(1.0, 1000, 0.5)
    dm = model_density_matrix(p, 5.0)
    assert dm.trace == pytest.approx(1000, rel=1e-6)
    assert np.all(dm.level_occupations >= 0)
    assert dm.top_eigenvalue == pytest.approx(dm.n0, rel=1e-3)
    assert dm.top_eigenvalue >= dm.n0
    assert dm.second_eigenvalue <= dm.max_excited_occupation * (1 + 1e-12)
    assert dm.max_excited_occupation <= 1 / p.beta_omega
    free = model_density_matrix(p, 0.0)
    assert free.gp_result is None
    assert free.top_eigenvalue == pytest.approx(free.n0, rel=1e-14)
    assert np.allclose(free.s_wave_spectrum[:-1], np.sort(free.mode_occupations[2::2]), rtol=1e-12)


def test_s_wave_modes_orthonormal():
    r = np.linspace(0.0, 20.0, 8001)
    m = s_wave_modes(1.3, r, 5)
    from scipy.integrate import simpson
    gram = 4 * math.pi * simpson(m[:, None, :] * m[None, :, :] * r ** 2, x=r, axis=2)
    assert np.allclose(gram, np.eye(6), atol=1e-10)


def test_position_profile_normalization():
    p = TrapParams.from_t_over_tc(1.0, 1000, 0.5)
    r = np.linspace(0.0, 15.0 / math.sqrt(p.beta_omega), 6001)
    prof = position_profile(p, 2.0, r)
    assert prof.integral() == pytest.approx(1000, rel=1e-5)
    ideal = position_profile(p, 0.0, r)
    gc = solve_mu0(p)
    assert prof.integral("condensate") == pytest.approx(gc.n0_gc, rel=1e-5)
    assert np.allclose(ideal.condensate, gc.n0_gc * (1 / (2 * math.pi)) ** 1.5 * np.exp(-0.5 * r ** 2), rtol=1e-12)
    # repulsion spreads the condensate
    assert prof.condensate[0] < ideal.condensate[0]


def test_momentum_profile_normalization():
    p = TrapParams.from_t_over_tc(2.0, 1000, 0.5)
    q = np.linspace(0.0, 12.0 / math.sqrt(p.beta), 6001)
    prof = momentum_profile(p, 2.0, q)
    assert prof.integral() == pytest.approx(1000, rel=1e-5)
    free = momentum_profile(p, 0.0, q)
    n0 = solve_mu0(p).n0_gc
    # a = 0 condensate: gaussian exp(-2 p^2 / omega), i.e. width proportional to omega^{1/2}
    assert np.allclose(free.condensate, n0 * (2 / (math.pi * 2.0)) ** 1.5 * np.exp(-q * q), rtol=1e-12)


def test_thermal_momentum_rescaling_matches_hermite_sum():
    beta, omega, mu = 1.5, 0.8, -0.05
    n_max = 80
    occ = 1 / np.expm1(beta * (omega * np.arange(n_max + 1) - mu))
    occ[0] = 0.0
    q = np.linspace(0.0, 2.0, 9)
    direct = hermite_axis_density(occ, 1 / math.sqrt(2 / omega), q)
    assert np.allclose(thermal_momentum_values(beta, omega, mu, q), direct, rtol=1e-9)


def test_radial_fourier_gaussian():
    r = np.linspace(0.0, 30.0, 6001)
    f = np.exp(-r * r / 2)
    p = np.linspace(0.0, 4.0, 9)
    assert np.allclose(radial_fourier(r, f, p), np.exp(-p * p / 2), atol=1e-10)


def test_e_fold_width():
    x = np.linspace(0.0, 5.0, 5001)
    assert e_fold_width(x, np.exp(-(x / 1.7) ** 2)) == pytest.approx(1.7, rel=1e-5)
    with pytest.raises(InvalidInputError):
        e_fold_width(x, np.ones_like(x))


def test_width_ratio_independent_of_omega():
    ratios = [momentum_width_ratio(TrapParams.from_t_over_tc(w, 1000, 0.5), 0.0)
              / math.sqrt(TrapParams.from_t_over_tc(w, 1000, 0.5).beta_omega) for w in (0.5, 1.0, 2.0)]
    assert max(ratios) - min(ratios) < 1e-6


def test_width_ratio_boltzmann_limit():
    # far above T_c the thermal cloud is Maxwellian and the ratio is sqrt(beta omega / 2)
    p = TrapParams.from_t_over_tc(1.0, 1000, 30.0)
    assert momentum_width_ratio(p, 0.0) / math.sqrt(p.beta_omega) == pytest.approx(1 / math.sqrt(2), rel=2e-2)


def test_tf_edge_exponent_strong_coupling():
    # radius ~ (N a)^{1/5} once the kinetic term is negligible
    slope, radii = tf_edge_exponent(lambda a: TrapParams(1.0, 100.0, 1000), [1000.0, 10000.0, 100000.0])
    assert slope == pytest.approx(0.2, abs=0.01)
    assert radii[0] < radii[1] < radii[2]


def test_ensemble_condensate_consistency():
    worst = 0.0
    for n in (100, 1000):
        for t in (0.3, 0.5, 0.7):
            p = TrapParams.from_t_over_tc(1.0, n, t)
            nc = free_energy_estimate(p, 0.0, "canonical").n0
            ng = free_energy_estimate(p, 0.0, "grand_canonical").n0
            bw = p.beta_omega
            scale = bw ** -1.5 * math.sqrt(math.log(n)) + math.log(n) / bw
            worst = max(worst, abs(nc - ng) / scale)
    assert worst <= 10
