"""Harmonic trap spectrum and critical temperature."""

from dataclasses import dataclass
import math

import numpy as np

from ..errors import CutoffError, InvalidInputError
from ..params import ZETA3


def degeneracy(n):
    """Degeneracy (n+1)(n+2)/2 of the level with energy omega*n."""
    n = np.asarray(n)
    return (n + 1) * (n + 2) // 2


@dataclass(frozen=True)
class OscillatorSpectrum:
    omega: float
    n_max: int

    def __post_init__(self):
        if self.omega <= 0:
            raise InvalidInputError("omega must be positive")
        if self.n_max < 0:
            raise InvalidInputError("n_max must be nonnegative")

    @property
    def quantum_numbers(self):
        return np.arange(self.n_max + 1)

    @property
    def energies(self):
        return self.omega * self.quantum_numbers.astype(float)

    @property
    def degeneracies(self):
        return degeneracy(self.quantum_numbers).astype(float)

    @property
    def n_states(self):
        n = self.n_max
        return (n + 1) * (n + 2) * (n + 3) // 6

    def modes(self):
        """Mode energies with degeneracies expanded."""
        return np.repeat(self.energies, degeneracy(self.quantum_numbers))


def critical_temperature(omega, n_particles):
    """T_c = omega (N / zeta(3))^{1/3}; N may be fractional."""
    if omega <= 0 or n_particles <= 0:
        raise InvalidInputError("omega and N must be positive")
    return omega * (n_particles / ZETA3) ** (1.0 / 3.0)


def adaptive_n_max(beta_omega, n_particles, rel_tol=1e-12, limit=200000):
    """Smallest n with g(n) / (exp(beta omega n) - 1) < rel_tol * N.

    The Bose factor with mu < 0 is dominated by the mu = 0 value, so this
    bounds the occupation of level n for every admissible chemical potential.
    """
    if beta_omega <= 0:
        raise InvalidInputError("beta*omega must be positive")
    target = rel_tol * n_particles
    # start near the crossover and walk; the tail is monotone past its maximum
    n = max(1, int(math.log(1.0 / target) / beta_omega))
    while n > 1 and degeneracy(n - 1) / math.expm1(beta_omega * (n - 1)) < target:
        n = max(1, n // 2)
    while degeneracy(n) / math.expm1(beta_omega * n) >= target:
        n += max(1, n // 16)
        if n > limit:
            raise CutoffError(f"level cutoff exceeds {limit}; beta*omega too small")
    while n > 1 and degeneracy(n - 1) / math.expm1(beta_omega * (n - 1)) < target:
        n -= 1
    return n
