"""Grand canonical ideal Bose gas on a finite list of levels."""

from dataclasses import dataclass
import math

import mpmath
import numpy as np
from scipy.optimize import brentq

from ..errors import BracketError, DomainError, InvalidInputError
from ..params import ZETA3, TrapParams
from .spectrum import OscillatorSpectrum, adaptive_n_max


def _as_levels(energies, degeneracies=None):
    e = np.atleast_1d(np.asarray(energies, dtype=float))
    g = np.ones_like(e) if degeneracies is None else np.atleast_1d(np.asarray(degeneracies, dtype=float))
    if e.shape != g.shape:
        raise InvalidInputError("energies and degeneracies must have the same length")
    if np.any(e < 0) or np.any(g <= 0):
        raise InvalidInputError("energies must be nonnegative and degeneracies positive")
    return e, g


def bose_occupation(x):
    """1 / (e^x - 1) for x > 0."""
    return 1.0 / np.expm1(x)


@dataclass
class GrandCanonicalState:
    """Grand canonical Gibbs state. ``occupations`` are per single mode of each level."""

    energies: np.ndarray
    degeneracies: np.ndarray
    beta: float
    mu: float
    occupations: np.ndarray
    n_max: int = None

    @property
    def level_occupations(self):
        return self.degeneracies * self.occupations

    @property
    def n_bar(self):
        return float(np.sum(self.level_occupations))

    @property
    def n0_gc(self):
        i = int(np.argmin(self.energies))
        return float(self.level_occupations[i])

    @property
    def nth_gc(self):
        return self.n_bar - self.n0_gc

    @property
    def log_partition(self):
        x = self.beta * (self.energies - self.mu)
        return float(-np.sum(self.degeneracies * np.log(-np.expm1(-x))))

    @property
    def free_energy_gc(self):
        """T sum g ln(1 - e^{beta(mu - E)}) + mu N_bar."""
        return -self.log_partition / self.beta + self.mu * self.n_bar

    @property
    def variance(self):
        n = self.occupations
        return float(np.sum(self.degeneracies * n * (1 + n)))

    @property
    def fourth_cumulant(self):
        n = self.occupations
        return float(np.sum(self.degeneracies * n * (1 + n) * (1 + 6 * n + 6 * n * n)))

    @property
    def fourth_central_moment(self):
        return self.fourth_cumulant + 3 * self.variance ** 2

    def log_lambda(self, n, log_z_canonical):
        """ln of the weight Z(N) e^{beta mu N} / Z_gc for particle number N."""
        return log_z_canonical + self.beta * self.mu * n - self.log_partition


def grand_canonical(energies, degeneracies, beta, mu):
    e, g = _as_levels(energies, degeneracies)
    if beta <= 0:
        raise InvalidInputError("beta must be positive")
    if mu >= e.min():
        raise DomainError("chemical potential must lie below the lowest level")
    occ = bose_occupation(beta * (e - mu))
    return GrandCanonicalState(e, g, float(beta), float(mu), occ)


def solve_mu(energies, degeneracies, beta, n_target):
    """Chemical potential with sum_j g_j / (e^{beta(E_j - mu)} - 1) = n_target.

    The root is sought in s = ln(beta (E_min - mu)), where the occupation sum is
    strictly decreasing; brentq replaces plain bisection.
    """
    e, g = _as_levels(energies, degeneracies)
    if n_target <= 0:
        raise InvalidInputError("target particle number must be positive")
    if beta <= 0:
        raise InvalidInputError("beta must be positive")
    e0 = e.min()
    g0 = g[e == e0].sum()
    shift = beta * (e - e0)

    def excess(s):
        x = np.exp(s)
        return float(np.sum(g * bose_occupation(shift + x))) - n_target

    # the lowest level alone needs x >= ln(1 + g0/N)
    lo = math.log(math.log1p(g0 / n_target)) - 1e-6
    for _ in range(50):
        if excess(lo) >= 0:
            break
        lo -= 1.0
    else:
        raise BracketError("lower end of the chemical-potential bracket already underfills")
    hi = lo + 1.0
    for _ in range(200):
        if excess(hi) < 0:
            break
        lo, hi = hi, hi + 2.0
    else:
        raise BracketError("could not bracket the chemical potential")
    s = brentq(excess, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return e0 - math.exp(s) / beta


def solve_mu0(params: TrapParams, n_max=None):
    """Grand canonical state of the harmonic trap with mean particle number N."""
    bw = params.beta_omega
    if n_max is None:
        n_max = adaptive_n_max(bw, params.n_particles)
    spec = OscillatorSpectrum(params.omega, n_max)
    e, g = spec.energies, spec.degeneracies
    tail = g[-1] * bose_occupation(bw * n_max)
    if tail >= 1e-12 * params.n_particles:
        from ..errors import CutoffError

        raise CutoffError(f"level cutoff {n_max} too small: tail occupation {tail:.3e}")
    mu = solve_mu(e, g, params.beta, params.n_particles)
    state = grand_canonical(e, g, params.beta, mu)
    state.n_max = n_max
    return state


def gc_free_energy(energies, degeneracies, beta, mu):
    return grand_canonical(energies, degeneracies, beta, mu).free_energy_gc


def polylog3(z):
    """Li_3(z) for 0 <= z <= 1."""
    return float(mpmath.polylog(3, z))


def eta_above_tc(t_over_tc):
    """Solution eta of t^3 Li_3(e^{-eta}) = zeta(3), so that -mu ~ eta T above T_c.

    Li_3(e^{-eta}) lies between e^{-eta} and zeta(3) e^{-eta}, which brackets
    eta in [3 ln t - ln zeta(3), 3 ln t].
    """
    t = float(t_over_tc)
    if t < 1:
        raise DomainError("eta is defined only for T >= T_c")
    if t == 1:
        return 0.0
    target = ZETA3 / t ** 3
    lo = max(0.0, 3 * math.log(t) - math.log(ZETA3))
    hi = 3 * math.log(t)

    def f(eta):
        return polylog3(math.exp(-eta)) - target

    if f(lo) <= 0:
        return lo
    return brentq(f, lo, hi, xtol=1e-14, rtol=1e-14)
