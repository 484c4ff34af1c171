"""Assembly of ideal-gas and GP ingredients: free-energy model, 1-RDM model, and profiles.

These are asymptotic models without certified error bars at finite N.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.integrate import simpson
from scipy.special import eval_genlaguerre

from . import gp as gpmod
from .errors import InvalidInputError
from .idealgas import (
    OscillatorSpectrum,
    canonical_partition,
    solve_mu0,
    thermal_density_values,
    thermal_momentum_values,
)
from .params import scaled_scattering_length

log = logging.getLogger(__name__)

CANONICAL_LIMIT = 10_000


@dataclass
class FreeEnergyEstimate:
    f0: float
    n0: float
    e_gp: float
    f_total: float
    ensemble: str
    a_n: float
    per_particle_scales: dict


def _ideal(params, ensemble):
    """(free energy, condensate number, gc state, ensemble used)."""
    if ensemble not in ("auto", "canonical", "grand_canonical"):
        raise InvalidInputError(f"unknown ensemble {ensemble!r}")
    gc = solve_mu0(params)
    if ensemble == "auto":
        ensemble = "canonical" if params.n_particles <= CANONICAL_LIMIT else "grand_canonical"
        log.info("condensate number from the %s ensemble", ensemble)
    if ensemble == "canonical":
        spec = OscillatorSpectrum(params.omega, gc.n_max)
        cs = canonical_partition(spec.energies, params.beta, params.n_particles, spec.degeneracies)
        return cs.free_energy, cs.n0_canonical, gc, cs, ensemble
    return gc.free_energy_gc, gc.n0_gc, gc, None, ensemble


def condensate_energy(n0, a_n, omega, **kw):
    """E^GP(N0, a, omega); exactly zero without interaction."""
    if a_n == 0 or n0 == 0:
        return 0.0, None
    res = gpmod.gp_minimize(n0, a_n, omega, **kw)
    return res.energy, res


def free_energy_estimate(params, a_v, ensemble="auto"):
    a_n = scaled_scattering_length(a_v, params)
    f0, n0, _, _, used = _ideal(params, ensemble)
    e_gp, _ = condensate_energy(n0, a_n, params.omega)
    n, w, bw = params.n_particles, params.omega, params.beta_omega
    scales = {"f0_over_NT": f0 / (w * n / bw), "egp_over_omegaN": e_gp / (w * n)}
    return FreeEnergyEstimate(f0, n0, e_gp, f0 + e_gp, used, a_n, scales)


def s_wave_modes(omega, r, k_max):
    """Normalized radial s-wave oscillator eigenfunctions (levels n = 2k), sampled on r."""
    ell = math.sqrt(2.0 / omega)
    s2 = (r / ell) ** 2
    out = np.empty((k_max + 1, r.size))
    for k in range(k_max + 1):
        # int |psi|^2 d^3x = 1 with psi = c L_k^{1/2}(s^2) e^{-s^2/2}
        norm2 = 4 * math.pi * ell ** 3 * math.gamma(k + 1.5) / (2 * math.factorial(k))
        out[k] = eval_genlaguerre(k, 0.5, s2) * np.exp(-0.5 * s2) / math.sqrt(norm2)
    return out


@dataclass
class ModelOneParticleDM:
    level_occupations: np.ndarray
    mode_occupations: np.ndarray
    n0: float
    gp_result: object
    s_wave_spectrum: np.ndarray

    @property
    def trace(self):
        return self.n0 + float(np.sum(self.level_occupations[1:]))

    @property
    def max_excited_occupation(self):
        return float(np.max(self.mode_occupations[1:])) if self.mode_occupations.size > 1 else 0.0

    @property
    def top_eigenvalue(self):
        return float(self.s_wave_spectrum[-1])

    @property
    def second_eigenvalue(self):
        """Largest eigenvalue below the condensate one.

        Every excited level has modes outside the s-wave sector, which keep
        their ideal occupation, so the answer is the larger of the second
        s-wave eigenvalue and the largest excited occupation.
        """
        s = float(self.s_wave_spectrum[-2]) if self.s_wave_spectrum.size > 1 else 0.0
        return max(s, self.max_excited_occupation)

    def top_fraction(self, n):
        return self.top_eigenvalue / n


def model_density_matrix(params, a_v, ensemble="auto"):
    """Ideal 1-RDM with the condensate orbital replaced by the GP minimizer of weight N0.

    The replacement only touches the s-wave subspace, where the matrix is
    diag(excited occupations) + N0 c c^T with c the expansion of the
    normalized GP orbital in s-wave oscillator modes.
    """
    a_n = scaled_scattering_length(a_v, params)
    _, n0, gc, cs, _ = _ideal(params, ensemble)
    state = cs if cs is not None else gc
    occ = state.occupations.copy()
    levels = state.level_occupations.copy()
    levels[0] = n0
    k_max = (occ.size - 1) // 2
    _, res = condensate_energy(n0, a_n, params.omega)
    if res is None:
        coeff = np.zeros(k_max + 1)
        coeff[0] = 1.0
    else:
        h = res.grid.spacing
        modes = s_wave_modes(params.omega, res.r, k_max)
        orbital = res.phi / math.sqrt(n0)
        coeff = 4 * math.pi * h * (modes * res.r ** 2) @ orbital
        coeff /= np.linalg.norm(coeff)
    diag = occ[0 : 2 * k_max + 1 : 2].copy()
    diag[0] = 0.0
    mat = np.diag(diag) + n0 * np.outer(coeff, coeff)
    spectrum = np.linalg.eigvalsh(mat)
    return ModelOneParticleDM(levels, occ, n0, res, spectrum)


@dataclass
class Profile:
    x: np.ndarray
    thermal: np.ndarray
    condensate: np.ndarray

    @property
    def total(self):
        return self.thermal + self.condensate

    def integral(self, part="total"):
        vals = getattr(self, part)
        return float(4 * math.pi * simpson(vals * self.x ** 2, x=self.x))


def _condensate_on(params, a_v, gc):
    a_n = scaled_scattering_length(a_v, params)
    n0 = gc.n0_gc
    _, res = condensate_energy(n0, a_n, params.omega)
    return n0, res


def position_profile(params, a_v, radii):
    """rho = rho_th + |phi_GP|^2, using the grand canonical ideal gas for both parts."""
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    gc = solve_mu0(params)
    thermal = thermal_density_values(params.beta, params.omega, gc.mu, r)
    n0, res = _condensate_on(params, a_v, gc)
    if res is None:
        cond = gpmod.gaussian_profile(n0, params.omega, r) ** 2
    else:
        cond = np.interp(r, np.concatenate([[0.0], res.r]), np.concatenate([[res.phi[0]], res.phi]), right=0.0) ** 2
    return Profile(r, thermal, cond)


def radial_fourier(r, f, momenta):
    """(2 pi)^{-3/2} 4 pi int f(r) sin(p r)/(p r) r^2 dr by Simpson quadrature."""
    p = np.atleast_1d(np.asarray(momenta, dtype=float))
    kern = np.sinc(np.outer(p, r) / math.pi)
    return (2 * math.pi) ** -1.5 * 4 * math.pi * simpson(kern * (f * r * r)[None, :], x=r, axis=1)


def condensate_momentum_density(params, a_v, momenta, gc=None):
    p = np.atleast_1d(np.asarray(momenta, dtype=float))
    gc = gc or solve_mu0(params)
    n0, res = _condensate_on(params, a_v, gc)
    if res is None:
        w = params.omega
        return n0 * (2 / (math.pi * w)) ** 1.5 * np.exp(-2 * p * p / w)
    r = np.concatenate([[0.0], res.r, [res.grid.r_max]])
    phi = np.concatenate([[res.phi[0]], res.phi, [0.0]])
    return radial_fourier(r, phi, p) ** 2


def momentum_profile(params, a_v, momenta):
    p = np.atleast_1d(np.asarray(momenta, dtype=float))
    gc = solve_mu0(params)
    thermal = thermal_momentum_values(params.beta, params.omega, gc.mu, p)
    cond = condensate_momentum_density(params, a_v, p, gc)
    return Profile(p, thermal, cond)


def e_fold_width(x, y):
    """Half-width where a decreasing profile falls to 1/e of its central value."""
    target = y[0] / math.e
    idx = np.nonzero(y <= target)[0]
    if idx.size == 0:
        raise InvalidInputError("profile does not fall to 1/e on the sampled range")
    i = int(idx[0])
    x0, x1, y0, y1 = x[i - 1], x[i], math.log(y[i - 1]), math.log(y[i])
    return float(x0 + (math.log(target) - y0) * (x1 - x0) / (y1 - y0))


def momentum_width_ratio(params, a_v, n_points=4000):
    """Condensate over thermal 1/e momentum half-widths."""
    p_max = 8.0 * max(params.beta ** -0.5, params.omega ** 0.5)
    p = np.linspace(0.0, p_max, n_points)
    prof = momentum_profile(params, a_v, p)
    return e_fold_width(p, prof.condensate) / e_fold_width(p, prof.thermal)


def tf_edge_exponent(params_for, a_values):
    """Least-squares slope of ln(edge radius) against ln(a_v)."""
    radii = []
    for a_v in a_values:
        params = params_for(a_v)
        gc = solve_mu0(params)
        _, res = _condensate_on(params, a_v, gc)
        radii.append(gpmod.tf_edge_radius(res))
    slope = np.polyfit(np.log(a_values), np.log(radii), 1)[0]
    return float(slope), radii
