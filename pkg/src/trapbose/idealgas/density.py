"""Thermal density of the trapped ideal gas from the harmonic heat kernel."""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import simpson

from ..errors import DomainError, TruncationError


@dataclass
class DensityProfile:
    """Radial profile rho(r) with its quadrature integral and expected particle count."""

    radii: np.ndarray
    values: np.ndarray
    expected: float = None

    @property
    def integral(self):
        return float(4 * math.pi * simpson(self.values * self.radii ** 2, x=self.radii))


def _kernel_terms(params_beta, omega, mu, k_max, tol):
    """Series weights e^{beta mu k} and q_k = e^{-k beta omega} up to convergence."""
    if mu >= 0:
        raise DomainError("chemical potential must be negative")
    bw = params_beta * omega
    k = np.arange(1, k_max + 1)
    q = np.exp(-k * bw)
    w = np.exp(params_beta * mu * k)
    # with A = (1-q^2)^{-3/2}, every summand is bounded uniformly in r by
    # w (A - 1 + q); (A - 1 + q)/q grows with q, so past term k the bounds
    # shrink at least by the ratio e^{beta(mu - omega)} per step
    peak = w * (np.expm1(-1.5 * np.log1p(-q * q)) + q)
    total = np.cumsum(w * np.expm1(-1.5 * np.log1p(-q * q)))
    ratio = math.exp(params_beta * (mu - omega))
    tail = peak * ratio / (1 - ratio)
    done = np.nonzero(tail <= tol * total)[0]
    if done.size == 0:
        raise TruncationError(
            f"heat-kernel series not converged after {k_max} terms", bound=float(tail[-1])
        )
    n = int(done[0]) + 1
    return w[:n], q[:n], float(tail[n - 1])


def thermal_density_values(beta, omega, mu, radii, k_max=1_000_000, tol=1e-14):
    """rho_th(r) = sum_k e^{beta mu k} [K_{k beta}(r, r) - |phi_0(r)|^2].

    With q = e^{-k beta omega} each summand is
    (omega/2pi)^{3/2} e^{-omega r^2/2} [(1-q^2)^{-3/2} exp(omega r^2 q/(1+q)) - 1],
    evaluated with expm1 so that the subtraction of the condensate term is stable.
    """
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    w, q, _ = _kernel_terms(beta, omega, mu, k_max, tol)
    pref = (omega / (2 * math.pi)) ** 1.5
    out = np.zeros_like(r)
    chunk = max(1, 2_000_000 // max(1, r.size))
    base = -1.5 * np.log1p(-q * q)
    gauss = -0.5 * omega * r ** 2
    for s in range(0, q.size, chunk):
        qs, ws, bs = q[s : s + chunk], w[s : s + chunk], base[s : s + chunk]
        expo = bs[:, None] + omega * r[None, :] ** 2 * (qs / (1 + qs))[:, None]
        # e^{gauss} expm1(expo), without overflow where expo is large
        small = expo < 1.0
        term = np.where(
            small,
            np.expm1(np.where(small, expo, 0.0)) * np.exp(gauss)[None, :],
            np.exp(np.where(small, 0.0, expo) + gauss[None, :]) - np.exp(gauss)[None, :],
        )
        out += ws @ term
    return pref * out


def thermal_count(beta, omega, mu, k_max=1_000_000, tol=1e-14):
    """Closed-form integral of the thermal density, sum_k e^{beta mu k}[(1-q)^{-3} - 1]."""
    w, q, _ = _kernel_terms(beta, omega, mu, k_max, tol)
    return float(np.sum(w * np.expm1(-3 * np.log1p(-q))))


def thermal_density(params, mu, radii, n_max=None, k_max=1_000_000):
    """Thermal (excited-state) density profile at chemical potential mu.

    ``n_max`` is accepted for symmetry with the eigenfunction route and ignored;
    the kernel series is summed to convergence instead.
    """
    vals = thermal_density_values(params.beta, params.omega, mu, radii, k_max)
    return DensityProfile(
        np.atleast_1d(np.asarray(radii, dtype=float)),
        vals,
        thermal_count(params.beta, params.omega, mu, k_max),
    )


def sup_scaled_thermal_density(params, mu):
    """sup_x rho_th(x) * beta^{3/2}; the supremum sits at the trap centre."""
    return float(thermal_density_values(params.beta, params.omega, mu, [0.0])[0] * params.beta ** 1.5)


def hermite_functions(n_max, s):
    """Normalized Hermite functions h_0..h_{n_max} at points s, by the stable three-term recursion."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    h = np.zeros((n_max + 1, s.size))
    h[0] = math.pi ** -0.25 * np.exp(-0.5 * s * s)
    if n_max >= 1:
        h[1] = math.sqrt(2.0) * s * h[0]
    for n in range(2, n_max + 1):
        h[n] = math.sqrt(2.0 / n) * s * h[n - 1] - math.sqrt((n - 1) / n) * h[n - 2]
    return h


def hermite_axis_density(occupations, length, z):
    """Density along a coordinate axis from per-mode level occupations.

    ``occupations[n]`` is the occupation of one mode of the level n; the
    one-dimensional eigenfunctions have length scale ``length``. Level 0 is
    included, so pass zero there for the thermal part only.
    """
    occ = np.asarray(occupations, dtype=float)
    n_max = occ.size - 1
    h0 = hermite_functions(n_max, [0.0])[:, 0] ** 2 / length
    hz = hermite_functions(n_max, np.asarray(z) / length) ** 2 / length
    # transverse weight A(m) = sum_{n1+n2=m} h_{n1}(0)^2 h_{n2}(0)^2
    a = np.convolve(h0, h0)[: n_max + 1]
    out = np.zeros(hz.shape[1])
    for n in range(n_max + 1):
        if occ[n] == 0:
            continue
        out += occ[n] * (a[n::-1] @ hz[: n + 1])
    return out


def thermal_momentum_values(beta, omega, mu, momenta, **kw):
    """Thermal momentum density, n(p) = rho_th(2p/omega) (2/omega)^3."""
    p = np.atleast_1d(np.asarray(momenta, dtype=float))
    return thermal_density_values(beta, omega, mu, 2 * p / omega, **kw) * (2 / omega) ** 3
