import math

import numpy as np
import pytest

from trapbose.errors import InvalidInputError, TailFitError
from trapbose.scattering import (
    RadialPotential,
    eta_integral,
    jastrow,
    scattering_functional,
    solve_zero_energy,
    variational_scattering_length,
    xi_integral,
)


def square_barrier_length(height, radius):
    k = math.sqrt(height / 2)
    return radius * (1 - math.tanh(k * radius) / (k * radius))


def closed_form_potentials():
    return [
        RadialPotential.hard_sphere(1.0),
        RadialPotential.square(10.0, 1.0),
        RadialPotential.square(0.3, 2.0),
        RadialPotential.square(4.0, 1.5, core=0.5),
        RadialPotential.gaussian(2.0),
        RadialPotential.gaussian(1e-3),
    ]


def test_hard_sphere_analytic():
    sol = solve_zero_energy(RadialPotential.hard_sphere(1.0))
    assert sol.a == pytest.approx(1.0, abs=1e-12)
    r = np.array([1.0, 1.5, 3.0, 100.0])
    assert np.allclose(sol.f0(r), 1 - 1 / r)


def test_zero_potential():
    sol = solve_zero_energy(RadialPotential(), r_max=10.0)
    assert sol.a == 0.0
    assert np.allclose(sol.f0(np.linspace(0, 20, 7)), 1.0)
    assert variational_scattering_length(RadialPotential()).a_bound == 0.0


@pytest.mark.parametrize("height,radius", [(10.0, 1.0), (0.3, 2.0), (100.0, 0.5)])
def test_square_barrier_closed_form(height, radius):
    sol = solve_zero_energy(RadialPotential.square(height, radius))
    assert sol.a == pytest.approx(square_barrier_length(height, radius), rel=1e-8)


def test_square_barrier_with_core():
    # inside: u = sinh(k (r - c)) / k; matched to a line at R
    c, h, R = 0.5, 4.0, 1.5
    k = math.sqrt(h / 2)
    u, du = math.sinh(k * (R - c)) / k, math.cosh(k * (R - c))
    exact = R - u / du
    sol = solve_zero_energy(RadialPotential.square(h, R, core=c))
    assert sol.a == pytest.approx(exact, rel=1e-8)


def test_born_limit():
    for v0 in (1e-3, 5e-4):
        a = solve_zero_energy(RadialPotential.gaussian(v0)).a
        born = v0 * math.sqrt(math.pi) / 8
        assert abs(a - born) <= v0 ** 2
    # the correction is second order: halving v0 quarters it
    d1 = math.sqrt(math.pi) / 8 * 1e-3 - solve_zero_energy(RadialPotential.gaussian(1e-3)).a
    d2 = math.sqrt(math.pi) / 8 * 5e-4 - solve_zero_energy(RadialPotential.gaussian(5e-4)).a
    assert d1 / d2 == pytest.approx(4.0, rel=0.02)


@pytest.mark.parametrize("pot", closed_form_potentials(), ids=lambda p: f"{p.kind}-{p.amplitude}")
def test_ode_vs_variational(pot):
    sol = solve_zero_energy(pot)
    var = variational_scattering_length(pot)
    h = sol.grid[1] - sol.grid[0]
    assert abs(sol.a - var.a_bound) <= 1e-3 * max(sol.a, h)
    assert var.a_bound >= sol.a - 1e-9 * max(1.0, sol.a)


@pytest.mark.parametrize("pot", [p for p in closed_form_potentials() if p.hard_core_radius == 0])
def test_eight_pi_a_strictly_below_integral(pot):
    a = solve_zero_energy(pot).a
    assert 8 * math.pi * a < pot.integral()
    assert variational_scattering_length(pot).a_bound <= pot.integral() / (8 * math.pi)


def test_hard_sphere_trial_function_gives_4pi():
    pot = RadialPotential.hard_sphere(1.0)
    grid = np.linspace(1.0, 10.0, 20001)
    val = scattering_functional(pot, grid, 1 - 1 / grid)
    assert val == pytest.approx(4 * math.pi, rel=1e-6)


def test_monotone_in_potential():
    heights = [0.5, 1.0, 2.0, 5.0]
    a_vals = [solve_zero_energy(RadialPotential.square(h, 1.0)).a for h in heights]
    assert all(x < y for x, y in zip(a_vals, a_vals[1:]))
    radii = [0.5, 1.0, 1.5]
    a_vals = [solve_zero_energy(RadialPotential.square(2.0, r)).a for r in radii]
    assert all(x < y for x, y in zip(a_vals, a_vals[1:]))


@pytest.mark.parametrize("pot", closed_form_potentials()[:5], ids=lambda p: f"{p.kind}-{p.amplitude}")
def test_solution_invariants(pot):
    sol = solve_zero_energy(pot)
    r = sol.grid
    assert np.all(np.diff(sol.u) >= -1e-12)
    assert np.all(sol.f0(r) >= np.clip(1 - sol.a / np.maximum(r, 1e-300), 0, None) - 1e-9)
    if pot.hard_core_radius > 0:
        assert sol.u[0] == 0.0


def test_tail_fit_failure():
    # the declared support is too short, so the potential still acts in the fit window
    pot = RadialPotential(kind="gaussian", amplitude=1.0, width=1.0, integrable_beyond=1.0)
    with pytest.raises(TailFitError):
        solve_zero_energy(pot, r_max=4.0)


def test_negative_tabulated_sample_rejected():
    with pytest.raises(InvalidInputError):
        RadialPotential.tabulated([0.0, 1.0], [1.0, -0.5])


def test_tabulated_matches_closed_form():
    r = np.linspace(0.0, 12.0, 24001)
    pot = RadialPotential.gaussian(2.0, width=1.5)
    a_tab = solve_zero_energy(RadialPotential.tabulated(r, pot(r))).a
    assert a_tab == pytest.approx(solve_zero_energy(pot).a, rel=1e-5)


def test_jastrow_hard_sphere():
    cut = jastrow(solve_zero_energy(RadialPotential.hard_sphere(1.0)), 2.0)
    r = np.linspace(1.0, 1.999, 50)
    assert np.allclose(cut(r), (1 - 1 / r) / 0.5)
    assert np.all(cut(np.array([2.0, 3.0, 50.0])) == 1.0)
    assert np.all(cut(np.array([0.2, 0.9])) == 0.0)


def test_jastrow_invariants_gaussian():
    sol = solve_zero_energy(RadialPotential.gaussian(5.0))
    cut = jastrow(sol)
    assert cut.b == pytest.approx(2 * sol.a)
    r = np.linspace(0, 3 * cut.b, 500)
    f = cut(r)
    assert np.all((f >= 0) & (f <= 1 + 1e-12))
    assert np.all(np.diff(f) >= -1e-12)


def test_jastrow_inside_core_rejected():
    with pytest.raises(InvalidInputError):
        jastrow(solve_zero_energy(RadialPotential.hard_sphere(1.0)), 0.5)


def test_eta_hard_sphere_exact():
    cut = jastrow(solve_zero_energy(RadialPotential.hard_sphere(1.0)), 2.0)
    res = eta_integral(cut)
    # core ball plus int_1^2 (1 - 4 (1 - 1/r)^2) 4 pi r^2 dr = 16 pi / 3 in total
    assert res.value == pytest.approx(16 * math.pi / 3, rel=1e-10)
    assert res.value <= res.reference * (1 + 1e-10)


def test_eta_limit_b_to_a():
    cut = jastrow(solve_zero_energy(RadialPotential.hard_sphere(1.0)), 1.0 + 1e-6)
    assert eta_integral(cut).value == pytest.approx(4 * math.pi / 3, rel=1e-5)


@pytest.mark.parametrize("b", [1.5, 3.0, 6.0])
def test_eta_bound_gaussian(b):
    cut = jastrow(solve_zero_energy(RadialPotential.gaussian(5.0)), b)
    res = eta_integral(cut)
    assert res.value <= res.reference


def test_xi_hard_sphere():
    pot = RadialPotential.hard_sphere(1.0)
    res = xi_integral(jastrow(solve_zero_energy(pot), 2.0), pot)
    assert res.value == pytest.approx(8 * math.pi, rel=1e-9)
    assert res.closed_form == pytest.approx(8 * math.pi, rel=1e-12)


@pytest.mark.parametrize("pot,b", [
    (RadialPotential.square(10.0, 1.0), 1.2),
    (RadialPotential.square(4.0, 1.5, core=0.5), 2.5),
    (RadialPotential.square(0.3, 2.0), 2.0),
])
def test_xi_compact_tail_closed_form(pot, b):
    res = xi_integral(jastrow(solve_zero_energy(pot), b), pot)
    assert res.value == pytest.approx(res.closed_form, rel=1e-7)


def test_xi_gaussian_identity_and_limit():
    pot = RadialPotential.gaussian(5.0)
    sol = solve_zero_energy(pot)
    for b in (1.5, 3.0):
        res = xi_integral(jastrow(sol, b), pot)
        assert res.value == pytest.approx(res.boundary_identity, rel=1e-8)
        assert res.value <= res.closed_form
    far = xi_integral(jastrow(sol, 12.0), pot)
    assert far.value == pytest.approx(4 * math.pi * sol.a / (1 - sol.a / 12.0), rel=1e-7)
    assert far.value == pytest.approx(4 * math.pi * sol.a, rel=0.06)


def test_xi_singular_closed_form():
    pot = RadialPotential.hard_sphere(1.0)
    sol = solve_zero_energy(pot)
    with pytest.raises(InvalidInputError):
        xi_integral(jastrow(sol, 1.0), pot)
