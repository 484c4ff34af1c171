"""Physical parameters, unit conventions and regime diagnostics.

Units throughout: hbar = 1, particle mass 1/2 (so hbar^2/2m = 1), k_B = 1.
The one-particle Hamiltonian is h = -Laplacian + omega^2 x^2 / 4 - 3 omega / 2,
whose ground state energy is zero.
"""

from dataclasses import dataclass
import math

from .errors import InvalidInputError

ZETA3 = 1.2020569031595942


@dataclass(frozen=True)
class TrapParams:
    omega: float
    beta: float
    n_particles: int

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise InvalidInputError(f"omega must be positive, got {self.omega}")
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise InvalidInputError(f"beta must be positive, got {self.beta}")
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise InvalidInputError(f"n_particles must be a positive integer, got {self.n_particles}")
        object.__setattr__(self, "n_particles", int(self.n_particles))

    @property
    def temperature(self):
        return 1.0 / self.beta

    @property
    def beta_omega(self):
        return self.beta * self.omega

    @classmethod
    def from_t_over_tc(cls, omega, n_particles, t_over_tc):
        """Build params at temperature ``t_over_tc`` times the ideal-gas T_c."""
        if t_over_tc <= 0:
            raise InvalidInputError("t_over_tc must be positive")
        tc = omega * (n_particles / ZETA3) ** (1 / 3)
        return cls(omega=omega, beta=1.0 / (t_over_tc * tc), n_particles=n_particles)


@dataclass(frozen=True)
class ScatteringData:
    a_v: float
    a_n: float
    gp_coupling: float


@dataclass(frozen=True)
class RegimeReport:
    ell_osc: float
    ell_th: float
    r_th: float
    d_th: float
    thermo_parameter: float
    t_over_tc: float
    scale_separation: float
    density_ratio: float
    bec_expected: bool


def scaled_scattering_length(a_v, params):
    """Scattering length a_N = a_v omega^(-1/2) / N of the GP-scaled potential."""
    if a_v < 0:
        raise InvalidInputError(f"scattering length must be nonnegative, got {a_v}")
    return a_v / math.sqrt(params.omega) / params.n_particles


def scattering_data(a_v, params):
    a_n = scaled_scattering_length(a_v, params)
    g = params.n_particles * math.sqrt(params.omega) * a_n
    return ScatteringData(a_v=a_v, a_n=a_n, gp_coupling=g)


def regime_report(params):
    w, b, n = params.omega, params.beta, params.n_particles
    r_th = 1.0 / (w * math.sqrt(b))
    thermo = n * (b * w) ** 3
    tc = w * (n / ZETA3) ** (1 / 3)
    return RegimeReport(
        ell_osc=1.0 / math.sqrt(w),
        ell_th=math.sqrt(b),
        r_th=r_th,
        d_th=n ** (-1 / 3) * r_th,
        thermo_parameter=thermo,
        t_over_tc=(1.0 / b) / tc,
        scale_separation=math.sqrt(b * w),
        density_ratio=(b * w) ** 1.5,
        bec_expected=thermo > ZETA3,
    )
