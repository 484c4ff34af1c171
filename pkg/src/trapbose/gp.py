"""Radial Gross-Pitaevskii ground states in the isotropic harmonic trap.

The functional is E(phi) = int |grad phi|^2 + (omega^2 r^2/4 - 3 omega/2)|phi|^2
+ 4 pi a |phi|^4, minimized at fixed int |phi|^2 = N. On the grid
r_i = i h (i = 1..n) with u = r phi and u_0 = u_{n+1} = 0 the discrete energy is

    4 pi [sum (u_{i+1} - u_i)^2 / h + h sum V_i u_i^2] + 16 pi^2 a h sum u_i^4 / r_i^2

with norm 4 pi h sum u_i^2.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainError, InvalidInputError, IterationLimitError, PreconditionError
from .report import Report, leq

COERCIVITY_PREFACTOR = (3.0 / 7.0) ** 2.5 / (14.0 * math.pi)


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    n_points: int = 4096

    def __post_init__(self):
        if self.r_max <= 0:
            raise InvalidInputError("r_max must be positive")
        if self.n_points < 256:
            raise InvalidInputError("n_points must be at least 256")

    @property
    def spacing(self):
        return self.r_max / (self.n_points + 1)

    @property
    def r(self):
        return self.spacing * np.arange(1, self.n_points + 1)


def tf_chemical_potential(n, a, omega):
    """mu~ = (15 N a omega^3 / 8)^{2/5}, measured from the bottom of the trap."""
    return (15.0 * n * a * omega ** 3 / 8.0) ** 0.4


def tf_energy_per_particle(n, a, omega):
    return 5.0 / 7.0 * tf_chemical_potential(n, a, omega) - 1.5 * omega


def tf_radius(n, a, omega):
    return 2.0 * math.sqrt(tf_chemical_potential(n, a, omega)) / omega


def default_grid(n, a, omega, n_points=4096):
    """Grid reaching 8 times the larger of the oscillator length and the TF radius."""
    scale = max(omega ** -0.5, tf_radius(n, a, omega) if a > 0 and n > 0 else 0.0)
    return RadialGrid(8.0 * scale, n_points)


def _potential(r, omega):
    return 0.25 * omega ** 2 * r ** 2 - 1.5 * omega


def energy_components(u, a, omega, grid):
    """(kinetic, potential, interaction, harmonic part of the potential) for u = r phi."""
    h, r = grid.spacing, grid.r
    du = np.diff(np.concatenate([[0.0], u, [0.0]]))
    kinetic = 4 * math.pi * float(np.sum(du * du)) / h
    u2 = u * u
    harmonic = 4 * math.pi * h * float(np.sum(0.25 * omega ** 2 * r ** 2 * u2))
    potential = harmonic - 1.5 * omega * 4 * math.pi * h * float(np.sum(u2))
    interaction = 16 * math.pi ** 2 * a * h * float(np.sum(u2 * u2 / r ** 2))
    return kinetic, potential, interaction, harmonic


def gp_energy(phi, a, omega, grid):
    """Discrete GP energy of the radial profile phi sampled on ``grid.r``."""
    u = grid.r * np.asarray(phi, dtype=float)
    k, p, i, _ = energy_components(u, a, omega, grid)
    return k + p + i


def gp_energy_gradient(phi, a, omega, grid):
    """Gradient of :func:`gp_energy` with respect to the sampled phi values."""
    r, h = grid.r, grid.spacing
    u = r * np.asarray(phi, dtype=float)
    up = np.concatenate([[0.0], u, [0.0]])
    lap = (2 * u - up[:-2] - up[2:]) / h
    du = 8 * math.pi * lap + 8 * math.pi * h * _potential(r, omega) * u + 64 * math.pi ** 2 * a * h * u ** 3 / r ** 2
    return du * r


def _apply_operator(u, a, omega, grid):
    """L u = -u'' + V u + 8 pi a u^3 / r^2 (the GP operator acting on u = r phi)."""
    h, r = grid.spacing, grid.r
    up = np.concatenate([[0.0], u, [0.0]])
    return (2 * u - up[:-2] - up[2:]) / h ** 2 + (_potential(r, omega) + 8 * math.pi * a * u * u / r ** 2) * u


@dataclass
class GPResult:
    r: np.ndarray
    phi: np.ndarray
    n_particles: float
    a: float
    omega: float
    grid: RadialGrid
    energy: float
    kinetic: float
    potential: float
    interaction: float
    potential_harmonic: float
    mu_gp: float
    residual: float
    iterations: int
    converged: bool = True
    history: list = field(default_factory=list, repr=False)

    @property
    def u(self):
        return self.r * self.phi

    @property
    def density(self):
        return self.phi ** 2

    @property
    def norm(self):
        return 4 * math.pi * self.grid.spacing * float(np.sum(self.u ** 2))

    @property
    def virial_residual(self):
        """(2K - 2V_harm + 3I) relative to the kinetic plus harmonic scale."""
        num = 2 * self.kinetic - 2 * self.potential_harmonic + 3 * self.interaction
        return abs(num) / (2 * self.kinetic + 2 * self.potential_harmonic + 3 * self.interaction)

    def mean_square_radius(self):
        h = self.grid.spacing
        return 4 * math.pi * h * float(np.sum(self.r ** 2 * self.u ** 2)) / self.n_particles


def gaussian_profile(n, omega, r):
    """sqrt(N) (omega / 2 pi)^{3/4} exp(-omega r^2 / 4), the a = 0 minimizer."""
    return math.sqrt(n) * (omega / (2 * math.pi)) ** 0.75 * np.exp(-0.25 * omega * r ** 2)


def _initial_u(n, a, omega, grid):
    r, h = grid.r, grid.spacing
    g = n * math.sqrt(omega) * a
    if g <= 100:
        u = r * gaussian_profile(1.0, omega, r)
    else:
        mu = tf_chemical_potential(n, a, omega)
        rho = np.clip(mu - 0.25 * omega ** 2 * r ** 2, 0.0, None)
        kern = np.ones(5) / 5.0
        rho = np.convolve(rho, kern, mode="same") + 1e-300
        u = r * np.sqrt(rho)
    return u * math.sqrt(n / (4 * math.pi * h * np.sum(u * u)))


def _result(u, n, a, omega, grid, residual, iterations, converged, history=()):
    k, p, i, harm = energy_components(u, a, omega, grid)
    e = k + p + i
    mu = (e + i) / n if n > 0 else 0.0
    return GPResult(grid.r, u / grid.r, n, a, omega, grid, e, k, p, i, harm, mu, residual,
                    iterations, converged, list(history))


def gp_minimize(n_particles, a, omega, grid=None, tol=1e-8, max_iter=50000, u0=None, newton_switch=1e-2):
    """Ground state by a semi-implicit normalized gradient flow.

    Each step solves (1 + tau L[u_n]) u = u_n with the cubic term frozen, then
    renormalizes. A step that raises the energy is rejected and tau halved;
    accepted steps enlarge tau. Once the residual is below ``newton_switch`` a
    Newton solve of the constrained stationarity equations is attempted; it is
    kept only if it does not raise the energy. Stops when
    sup |L u - mu u| / (omega sup |u|) < tol.
    """
    n, a, omega = float(n_particles), float(a), float(omega)
    if a < 0:
        raise DomainError("scattering length must be nonnegative")
    if n < 0 or omega <= 0:
        raise InvalidInputError("need N >= 0 and omega > 0")
    if grid is None:
        grid = default_grid(n, a, omega)
    r, h = grid.r, grid.spacing
    if n == 0:
        return _result(np.zeros_like(r), 0.0, a, omega, grid, 0.0, 0, True)
    u = _initial_u(n, a, omega, grid) if u0 is None else np.array(u0, dtype=float)
    u *= math.sqrt(n / (4 * math.pi * h * np.sum(u * u)))
    vext = _potential(r, omega)
    off = -1.0 / h ** 2
    tau = 1.0 / omega
    tau_max = 1e6 / omega

    def energy(v):
        k, p, i, _ = energy_components(v, a, omega, grid)
        return k + p + i

    def residual(v):
        lu = _apply_operator(v, a, omega, grid)
        mu = float(np.dot(v, lu) / np.dot(v, v))
        return float(np.max(np.abs(lu - mu * v)) / (omega * np.max(np.abs(v))))

    e_cur = energy(u)
    res = residual(u)
    history = []
    it = 0
    newton_tried = False
    while res >= tol:
        if not newton_tried and res < newton_switch and it >= 10:
            newton_tried = True
            v = _newton_polish(u, n, a, omega, grid, tol)
            if v is not None:
                e_new = energy(v)
                if e_new <= e_cur + 1e-10 * max(1.0, abs(e_cur)):
                    u, e_cur = v, e_new
                    res = residual(u)
                    history.append((e_cur, res))
                    continue
        if it >= max_iter:
            raise IterationLimitError(
                f"GP flow did not reach tolerance {tol:g} (residual {res:.3e})",
                best=_result(u, n, a, omega, grid, res, it, False, history),
            )
        it += 1
        diag = 1.0 + tau * (2.0 / h ** 2 + vext + 8 * math.pi * a * u * u / r ** 2)
        ab = np.zeros((3, u.size))
        ab[0, 1:] = tau * off
        ab[1] = diag
        ab[2, :-1] = tau * off
        v = solve_banded((1, 1), ab, u)
        v *= math.sqrt(n / (4 * math.pi * h * np.sum(v * v)))
        e_new = energy(v)
        if e_new > e_cur + 1e-14 * abs(e_cur) + 1e-300 and tau > 1e-12 / omega:
            tau *= 0.5
            continue
        u, e_cur = v, e_new
        tau = min(tau * 1.5, tau_max)
        res = residual(u)
        history.append((e_cur, res))
    return _result(u, n, a, omega, grid, res, it, True, history)


def _newton_polish(u, n, a, omega, grid, tol, max_steps=30):
    """Newton iteration for L[u] u = mu u, 4 pi h |u|^2 = N. Returns None on failure."""
    h, r = grid.spacing, grid.r
    vext = _potential(r, omega)
    c = 8 * math.pi * h
    u = u.copy()
    mu = float(np.dot(u, _apply_operator(u, a, omega, grid)) / np.dot(u, u))
    for _ in range(max_steps):
        f1 = _apply_operator(u, a, omega, grid) - mu * u
        f2 = 4 * math.pi * h * float(np.dot(u, u)) - n
        if np.max(np.abs(f1)) < 0.1 * tol * omega * np.max(np.abs(u)) and abs(f2) < 1e-14 * n:
            return u
        ab = np.zeros((3, u.size))
        ab[0, 1:] = -1.0 / h ** 2
        ab[1] = 2.0 / h ** 2 + vext + 24 * math.pi * a * u * u / r ** 2 - mu
        ab[2, :-1] = -1.0 / h ** 2
        try:
            y1 = solve_banded((1, 1), ab, -f1)
            y2 = solve_banded((1, 1), ab, u)
        except np.linalg.LinAlgError:
            return None
        dmu = (-f2 - c * float(np.dot(u, y1))) / (c * float(np.dot(u, y2)))
        du = y1 + dmu * y2
        if not np.all(np.isfinite(du)):
            return None
        u = u + du
        mu = mu + dmu
    f1 = _apply_operator(u, a, omega, grid) - mu * u
    if np.max(np.abs(f1)) < tol * omega * np.max(np.abs(u)) and np.all(u > -1e-12 * np.max(u)):
        return u
    return None


def gp_chemical_potential(result):
    """mu = E/N + interaction/N for a converged result."""
    if not result.converged:
        raise PreconditionError("chemical potential requested for an unconverged GP result")
    if result.n_particles == 0:
        return 0.0
    return (result.energy + result.interaction) / result.n_particles


def gp_mu_finite_difference(n, a, omega, rel_step=1e-3, grid=None, tol=1e-10):
    """Centered difference dE/dN on a common grid."""
    if grid is None:
        grid = default_grid(n * (1 + rel_step), a, omega)
    dn = rel_step * n
    ep = gp_minimize(n + dn, a, omega, grid, tol).energy
    em = gp_minimize(n - dn, a, omega, grid, tol).energy
    return (ep - em) / (2 * dn)


def tf_edge_radius(result):
    """Edge radius sqrt(7/3 <r^2>), exact for an inverted-parabola profile."""
    return math.sqrt(7.0 / 3.0 * result.mean_square_radius())


def gp_coercivity_check(n0, a, omega, m_values, grid=None, tol=1e-8):
    """Convexity and coercivity of M -> E^GP(M) around N0, on a common grid.

    For each M checks
        E(M) - E(N0) - mu(N0)(M - N0) >= 4 pi a int (rho_M - rho_N0)^2
            >= 4 pi a c omega^3 |M - N0|^{7/2} / (E(M) + E(N0) + 3/2 (M + N0) omega)^{3/2}
    with c = (3/7)^{5/2} / (14 pi), and midpoint convexity along the sorted ladder.
    """
    ms = sorted(set(float(m) for m in m_values) | {float(n0)})
    if grid is None:
        grid = default_grid(max(ms), a, omega)
    h = grid.spacing
    results = {m: gp_minimize(m, a, omega, grid, tol) for m in ms}
    base = results[float(n0)]
    mu0 = gp_chemical_potential(base)
    rep = Report()
    rep.results = results
    for m in ms:
        res = results[m]
        lhs = res.energy - base.energy - mu0 * (m - n0)
        drho = (res.u ** 2 - base.u ** 2) / grid.r ** 2
        mid = 4 * math.pi * a * 4 * math.pi * h * float(np.sum(drho ** 2 * grid.r ** 2))
        den = res.energy + base.energy + 1.5 * (m + n0) * omega
        low = 4 * math.pi * a * COERCIVITY_PREFACTOR * omega ** 3 * abs(m - n0) ** 3.5 / den ** 1.5 if den > 0 else 0.0
        rep.add(leq("gp_strict_convexity", mid, lhs, 1e-7, M=m, N0=n0))
        rep.add(leq("gp_coercivity", low, mid, 1e-7, M=m, N0=n0))
    es = [results[m].energy for m in ms]
    for i in range(1, len(ms) - 1):
        # convexity on a nonuniform ladder: slopes nondecreasing
        s1 = (es[i] - es[i - 1]) / (ms[i] - ms[i - 1])
        s2 = (es[i + 1] - es[i]) / (ms[i + 1] - ms[i])
        rep.add(leq("gp_energy_convexity", s1, s2, 1e-7, M=ms[i]))
    return rep
