"""Canonical ideal Bose gas via the cycle-sum recursion, in the log domain."""

from dataclasses import dataclass
import itertools
import math

import numpy as np
from scipy.special import logsumexp

from ..errors import InvalidInputError, NumericRangeError
from .grand import _as_levels


def log_cycle_sums(energies, degeneracies, beta, n):
    """ln z(m beta) = ln sum_j g_j e^{-m beta E_j} for m = 1..n (index 0 unused)."""
    e, g = _as_levels(energies, degeneracies)
    m = np.arange(1, n + 1)[:, None]
    out = np.full(n + 1, -np.inf)
    if n:
        out[1:] = logsumexp(-m * beta * e[None, :], b=g[None, :], axis=1)
    return out


def log_partition(energies, degeneracies, beta, n):
    """ln Z(k) for k = 0..n from Z(k) = (1/k) sum_m z(m beta) Z(k - m)."""
    if n < 0 or int(n) != n:
        raise InvalidInputError("particle number must be a nonnegative integer")
    n = int(n)
    lz = log_cycle_sums(energies, degeneracies, beta, n)
    logz = np.empty(n + 1)
    logz[0] = 0.0
    for k in range(1, n + 1):
        logz[k] = logsumexp(lz[1 : k + 1] + logz[k - 1 :: -1]) - math.log(k)
    if not np.all(np.isfinite(logz)):
        raise NumericRangeError("canonical partition function left the representable range")
    return logz


@dataclass
class CanonicalState:
    """Canonical Gibbs state. ``occupations`` are per single mode of each level."""

    energies: np.ndarray
    degeneracies: np.ndarray
    beta: float
    n_particles: int
    log_z: np.ndarray
    occupations: np.ndarray

    @property
    def partition_values(self):
        return np.exp(self.log_z)

    @property
    def level_occupations(self):
        return self.degeneracies * self.occupations

    @property
    def free_energy(self):
        return -self.log_z[self.n_particles] / self.beta

    def free_energies(self):
        return -self.log_z / self.beta

    @property
    def n0_canonical(self):
        i = int(np.argmin(self.energies))
        return float(self.level_occupations[i])


def _log_tail_probabilities(e_j, beta, log_z, n):
    """ln P(n_j >= m) = -m beta E_j + ln Z(n - m) - ln Z(n), m = 1..n."""
    m = np.arange(1, n + 1)
    return -m * beta * e_j + log_z[n - m] - log_z[n]


def canonical_partition(energies, beta, n, degeneracies=None):
    """Partition values, per-mode occupations and free energy of the N-particle state."""
    e, g = _as_levels(energies, degeneracies)
    if beta < 0:
        raise InvalidInputError("beta must be nonnegative")
    n = int(n)
    log_z = log_partition(e, g, beta, n)
    if n == 0:
        occ = np.zeros_like(e)
    else:
        m = np.arange(1, n + 1)
        terms = -np.outer(e, m) * beta + (log_z[n - m] - log_z[n])[None, :]
        occ = np.exp(logsumexp(terms, axis=1))
    return CanonicalState(e, g, float(beta), n, log_z, occ)


def _leave_one_out_log_partition(e, g, beta, j, n):
    g2 = g.copy()
    g2[j] -= 1
    keep = g2 > 0
    if not np.any(keep):
        out = np.full(n + 1, -np.inf)
        out[0] = 0.0
        return out
    return log_partition(e[keep], g2[keep], beta, n)


def occupation_distribution(energies, beta, n, j, degeneracies=None):
    """P(n_j = m) for m = 0..n, for one mode of level j.

    Uses P(n_j = m) = e^{-m beta E_j} Z_without_j(n - m) / Z(n), where the
    partition function without the mode is recomputed directly to avoid
    cancellation.
    """
    e, g = _as_levels(energies, degeneracies)
    n = int(n)
    log_z = log_partition(e, g, beta, n)
    log_zj = _leave_one_out_log_partition(e, g, beta, j, n)
    m = np.arange(n + 1)
    return np.exp(-m * beta * e[j] + log_zj[n - m] - log_z[n])


def canonical_moments(energies, beta, n, f, j, degeneracies=None):
    """Canonical expectation of f(n_j) for one mode of level j."""
    p = occupation_distribution(energies, beta, n, j, degeneracies)
    vals = np.array([f(m) for m in range(int(n) + 1)], dtype=float)
    return float(np.sum(p * vals))


def factorial_second_moment(energies, beta, n, j, degeneracies=None):
    """<n_j (n_j - 1)> = 2 sum_{m>=2} (m - 1) P(n_j >= m)."""
    e, g = _as_levels(energies, degeneracies)
    n = int(n)
    if n < 2:
        return 0.0
    log_z = log_partition(e, g, beta, n)
    lp = _log_tail_probabilities(e[j], beta, log_z, n)
    m = np.arange(1, n + 1)
    return float(2 * np.sum((m[1:] - 1) * np.exp(lp[1:])))


def pair_moment(energies, beta, n, i, j, degeneracies=None, log_z=None):
    """<a_i^* a_j^* a_j a_i> for single modes of levels i and j.

    Distinct modes give <n_i n_j> = sum_{m,l>=1} x_i^m x_j^l Z(N-m-l) / Z(N);
    the same mode gives <n_i (n_i - 1)>. When i == j as level indices and the
    level is degenerate, two different modes of that level are meant only if
    the caller asks through ``pair_moment_distinct``.
    """
    e, g = _as_levels(energies, degeneracies)
    n = int(n)
    if i == j:
        return factorial_second_moment(e, beta, n, i, g)
    return _pair_distinct(e, g, beta, n, i, j, log_z)


def pair_moment_distinct(energies, beta, n, i, j, degeneracies=None, log_z=None):
    """<n_p n_q> for two different modes p in level i and q in level j."""
    e, g = _as_levels(energies, degeneracies)
    if i == j and g[i] < 2:
        raise InvalidInputError("level has a single mode")
    return _pair_distinct(e, g, beta, int(n), i, j, log_z)


def _pair_distinct(e, g, beta, n, i, j, log_z):
    if n < 2:
        return 0.0
    if log_z is None:
        log_z = log_partition(e, g, beta, n)
    m = np.arange(1, n)
    terms = []
    for mm in m:
        l = np.arange(1, n - mm + 1)
        terms.append(-beta * (mm * e[i] + l * e[j]) + log_z[n - mm - l])
    return float(np.exp(logsumexp(np.concatenate(terms)) - log_z[n]))


def enumerate_configurations(mode_energies, beta, n):
    """Brute-force oracle over all occupation vectors with |n| = N.

    Returns (Z(N), mean occupations, second moments <n_j^2>, pair matrix <n_i n_j>).
    """
    e = np.asarray(mode_energies, dtype=float)
    k = e.size
    weights, configs = [], []
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        prev, occ = -1, []
        for b in bars:
            occ.append(b - prev - 1)
            prev = b
        occ.append(n + k - 2 - prev)
        configs.append(occ)
        weights.append(math.exp(-beta * float(np.dot(e, occ))))
    w = np.array(weights)
    c = np.array(configs, dtype=float).reshape(len(configs), k)
    z = w.sum()
    mean = w @ c / z
    second = w @ (c * c) / z
    pair = (c * w[:, None]).T @ c / z
    return z, mean, second, pair
