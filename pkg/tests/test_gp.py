import math

import numpy as np
import pytest

from trapbose.errors import DomainError, InvalidInputError, IterationLimitError, PreconditionError
from trapbose.gp import (
    COERCIVITY_PREFACTOR,
    RadialGrid,
    default_grid,
    gaussian_profile,
    gp_chemical_potential,
    gp_coercivity_check,
    gp_energy,
    gp_energy_gradient,
    gp_minimize,
    gp_mu_finite_difference,
    tf_chemical_potential,
    tf_edge_radius,
    tf_energy_per_particle,
    tf_radius,
)


def test_grid_validation():
    with pytest.raises(InvalidInputError):
        RadialGrid(10.0, 255)
    with pytest.raises(InvalidInputError):
        RadialGrid(0.0, 1000)
    g = RadialGrid(10.0, 999)
    assert g.spacing == pytest.approx(0.01)
    assert g.r[0] == pytest.approx(0.01) and g.r[-1] == pytest.approx(9.99)


def test_default_grid_covers_tf_radius():
    g = default_grid(1e4, 1.0, 1.0)
    assert g.r_max >= 8 * tf_radius(1e4, 1.0, 1.0)
    assert default_grid(10, 0.0, 4.0).r_max == pytest.approx(4.0)


def test_energy_examples():
    omega, n = 1.5, 30.0
    grid = RadialGrid(40.0, 8000)
    phi = gaussian_profile(n, omega, grid.r)
    assert abs(gp_energy(phi, 0.0, omega, grid)) < 1e-5 * n * omega
    assert gp_energy(np.zeros_like(grid.r), 0.3, omega, grid) == 0.0
    a = 0.02
    quartic = n ** 2 * (omega / (4 * math.pi)) ** 1.5
    e = gp_energy(phi, a, omega, grid)
    assert e == pytest.approx(4 * math.pi * a * quartic, rel=1e-4, abs=1e-5 * n * omega)


def test_noninteracting_minimizer():
    res = gp_minimize(50.0, 0.0, 2.0)
    assert abs(res.energy) < 1e-5 * 50 * 2
    assert abs(res.mu_gp) < 1e-5 * 2
    ref = gaussian_profile(50.0, 2.0, res.r)
    assert np.max(np.abs(res.phi - ref)) < 1e-4 * ref.max()


def test_result_invariants():
    res = gp_minimize(100.0, 0.05, 1.0)
    assert res.converged and res.residual < 1e-8
    assert np.all(res.phi >= 0)
    assert res.norm == pytest.approx(100.0, rel=1e-8)
    assert res.energy == pytest.approx(res.kinetic + res.potential + res.interaction, rel=1e-14)
    assert res.mu_gp == pytest.approx((res.energy + res.interaction) / 100.0, rel=1e-14)
    assert abs(res.virial_residual) < 1e-3
    energies = [e for e, _ in res.history]
    assert all(b <= a + 1e-10 * abs(a) for a, b in zip(energies, energies[1:]))


def test_negative_a_rejected():
    with pytest.raises(DomainError):
        gp_minimize(10.0, -0.1, 1.0)


def test_iteration_limit_carries_best_iterate():
    with pytest.raises(IterationLimitError) as info:
        gp_minimize(1000.0, 1.0, 1.0, max_iter=3, newton_switch=0.0)
    best = info.value.best
    assert best is not None and not best.converged and best.iterations == 3
    with pytest.raises(PreconditionError):
        gp_chemical_potential(best)


@pytest.mark.parametrize("n,a,omega", [(100.0, 0.01, 2.0), (37.0, 0.3, 0.7), (500.0, 2.0, 1.3)])
def test_scaling_identity(n, a, omega):
    e = gp_minimize(n, a, omega, tol=1e-10).energy
    e1 = gp_minimize(1.0, n * math.sqrt(omega) * a, 1.0, tol=1e-10).energy
    assert e == pytest.approx(omega * n * e1, rel=1e-6)
    mu = gp_minimize(n, a, omega, tol=1e-10).mu_gp
    mu1 = gp_minimize(1.0, n * math.sqrt(omega) * a, 1.0, tol=1e-10).mu_gp
    assert mu == pytest.approx(omega * mu1, rel=1e-6)


def test_thomas_fermi_regime():
    n, a, omega = 1e4, 1.0, 1.0
    res = gp_minimize(n, a, omega)
    assert res.energy / n == pytest.approx(tf_energy_per_particle(n, a, omega), rel=0.02)
    assert res.mu_gp + 1.5 * omega == pytest.approx(tf_chemical_potential(n, a, omega), rel=0.02)
    assert tf_edge_radius(res) == pytest.approx(tf_radius(n, a, omega), rel=0.02)


def test_chemical_potential_finite_difference():
    n, a, omega = 100.0, 0.1, 1.0  # g = 10
    grid = default_grid(n * 1.001, a, omega)
    mu = gp_chemical_potential(gp_minimize(n, a, omega, grid, tol=1e-10))
    assert mu == pytest.approx(gp_mu_finite_difference(n, a, omega, grid=grid), rel=1e-4)
    assert gp_chemical_potential(gp_minimize(10.0, 0.0, 1.0)) == pytest.approx(0.0, abs=1e-6)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    grid = RadialGrid(12.0, 512)
    res = gp_minimize(200.0, 0.05, 1.0, grid)
    phi = res.phi * (1 + 0.1 * rng.standard_normal(grid.r.size))
    grad = gp_energy_gradient(phi, 0.05, 1.0, grid)
    scale = np.linalg.norm(grad)
    for _ in range(20):
        d = rng.standard_normal(grid.r.size)
        d /= np.linalg.norm(d)
        eps = 1e-4 * np.linalg.norm(phi) / math.sqrt(phi.size)
        fd = (gp_energy(phi + eps * d, 0.05, 1.0, grid) - gp_energy(phi - eps * d, 0.05, 1.0, grid)) / (2 * eps)
        assert abs(fd - grad @ d) <= 1e-6 * scale


def test_coercivity_ladder():
    rep = gp_coercivity_check(100.0, 0.01, 1.0, [50.0, 75.0, 150.0, 200.0])
    assert rep.ok, rep.violations
    at_n0 = [c for c in rep.checks if c.inequality == "gp_strict_convexity" and c.inputs["M"] == 100.0]
    assert at_n0[0].lhs == pytest.approx(0.0, abs=1e-9) and at_n0[0].rhs == pytest.approx(0.0, abs=1e-9)
    for c in rep.checks:
        if c.inequality == "gp_coercivity" and c.inputs["M"] != 100.0:
            assert c.lhs > 0 and c.margin > 0


def test_midpoint_convexity_ten_point_ladder():
    rep = gp_coercivity_check(100.0, 0.02, 1.0, np.linspace(40.0, 220.0, 10))
    assert rep.ok, rep.violations
    assert sum(c.inequality == "gp_energy_convexity" for c in rep.checks) == 8


def test_coercivity_degenerate_noninteracting():
    rep = gp_coercivity_check(50.0, 0.0, 1.0, [25.0, 100.0])
    for c in rep.checks:
        if c.inequality != "gp_energy_convexity":
            assert abs(c.lhs) < 1e-6 and abs(c.rhs) < 1e-6


def test_coercivity_prefactor_value():
    assert COERCIVITY_PREFACTOR == pytest.approx((3 / 7) ** 2.5 / (14 * math.pi), rel=1e-15)
