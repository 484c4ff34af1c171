"""Zero-energy scattering for repulsive radial potentials.

The radial function u(r) = r f(r) of the zero-energy scattering solution obeys
u'' = v(r) u / 2 (the Laplacian carries coefficient 1 in these units). Far
outside the potential u is linear, u ~ c (r - a), which defines the
scattering length a.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicHermiteSpline
from scipy.linalg import solveh_banded

from .errors import InvalidInputError, TailFitError

KINDS = ("none", "gaussian", "square", "tabulated")


@dataclass(frozen=True)
class RadialPotential:
    """Nonnegative radial potential: optional hard core plus a tail.

    ``kind`` selects the tail: ``"none"`` (pure hard sphere, or v = 0 when the
    core radius is zero), ``"gaussian"`` with v = amplitude * exp(-(r/width)^2),
    ``"square"`` with v = amplitude for r < width, or ``"tabulated"`` with
    samples linearly interpolated and zero past the last sample.
    """

    hard_core_radius: float = 0.0
    kind: str = "none"
    amplitude: float = 0.0
    width: float = 1.0
    r_table: tuple = ()
    v_table: tuple = ()
    integrable_beyond: float = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown potential kind {self.kind!r}")
        if self.hard_core_radius < 0:
            raise InvalidInputError("hard core radius must be nonnegative")
        if self.kind in ("gaussian", "square"):
            if self.amplitude < 0:
                raise InvalidInputError("potential amplitude must be nonnegative")
            if self.width <= 0:
                raise InvalidInputError("potential width must be positive")
        if self.kind == "tabulated":
            r = np.asarray(self.r_table, dtype=float)
            v = np.asarray(self.v_table, dtype=float)
            if r.ndim != 1 or r.shape != v.shape or r.size < 2:
                raise InvalidInputError("tabulated potential needs matching r, v arrays")
            if np.any(np.diff(r) <= 0):
                raise InvalidInputError("tabulated radii must be strictly increasing")
            if np.any(v < 0):
                raise InvalidInputError("negative potential sample")
            object.__setattr__(self, "r_table", tuple(r))
            object.__setattr__(self, "v_table", tuple(v))
        if self.integrable_beyond is None:
            object.__setattr__(self, "integrable_beyond", self.support_radius())

    @classmethod
    def hard_sphere(cls, radius):
        return cls(hard_core_radius=radius)

    @classmethod
    def gaussian(cls, amplitude, width=1.0, core=0.0):
        return cls(hard_core_radius=core, kind="gaussian", amplitude=amplitude, width=width)

    @classmethod
    def square(cls, height, radius, core=0.0):
        return cls(hard_core_radius=core, kind="square", amplitude=height, width=radius)

    @classmethod
    def tabulated(cls, r, v, core=0.0):
        return cls(hard_core_radius=core, kind="tabulated", r_table=tuple(r), v_table=tuple(v))

    @property
    def is_zero(self):
        return self.hard_core_radius == 0 and (
            self.kind == "none"
            or (self.kind in ("gaussian", "square") and self.amplitude == 0)
            or (self.kind == "tabulated" and not any(self.v_table))
        )

    @property
    def breakpoints(self):
        if self.kind == "square":
            return (self.width,)
        if self.kind == "tabulated":
            return tuple(self.r_table)
        return ()

    def support_radius(self):
        """Radius past which the tail is negligible (below ~1e-35 for gaussians)."""
        core = self.hard_core_radius
        if self.kind == "gaussian":
            return max(core, self.width * math.sqrt(80.0 + math.log(max(self.amplitude, 1.0))))
        if self.kind == "square":
            return max(core, self.width)
        if self.kind == "tabulated":
            return max(core, self.r_table[-1])
        return core

    def tail(self, r):
        """Tail values at r (the hard core is not included)."""
        r = np.asarray(r, dtype=float)
        if self.kind == "gaussian":
            return self.amplitude * np.exp(-((r / self.width) ** 2))
        if self.kind == "square":
            return np.where(r < self.width, self.amplitude, 0.0)
        if self.kind == "tabulated":
            return np.interp(r, self.r_table, self.v_table, right=0.0)
        return np.zeros_like(r)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.hard_core_radius, np.inf, self.tail(r))

    def integral(self, r_from=0.0):
        """4 pi times the radial integral of v r^2 from ``r_from`` to infinity.

        Infinite whenever the region includes part of a hard core.
        """
        if r_from < self.hard_core_radius:
            return math.inf
        if self.kind == "none":
            return 0.0
        if self.kind == "gaussian":
            w = self.width
            val, _ = integrate.quad(lambda s: s * s * math.exp(-((s / w) ** 2)), r_from, np.inf)
            return 4 * math.pi * self.amplitude * val
        if self.kind == "square":
            if r_from >= self.width:
                return 0.0
            return 4 * math.pi * self.amplitude * (self.width ** 3 - r_from ** 3) / 3
        r = np.asarray(self.r_table)
        v = np.asarray(self.v_table)
        total = 0.0
        for r0, r1, v0, v1 in zip(r[:-1], r[1:], v[:-1], v[1:]):
            if r1 <= r_from:
                continue
            lo = max(r0, r_from)
            slope = (v1 - v0) / (r1 - r0)
            # exact integral of a linear segment times s^2
            antideriv = lambda s: (v0 - slope * r0) * s ** 3 / 3 + slope * s ** 4 / 4
            total += antideriv(r1) - antideriv(lo)
        return 4 * math.pi * total


@dataclass
class ScatteringSolution:
    grid: np.ndarray
    u: np.ndarray
    du: np.ndarray
    a: float
    tail_fit_residual: float
    hard_core_radius: float = 0.0
    _spline: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.grid.size >= 2:
            self._spline = CubicHermiteSpline(self.grid, self.u, self.du)

    def f0(self, r):
        """Zero-energy scattering solution f_0(r), normalized to tend to 1."""
        r = np.asarray(r, dtype=float)
        out = np.empty_like(r)
        inside = r < self.hard_core_radius
        beyond = r > self.grid[-1]
        mid = ~inside & ~beyond
        out[inside] = 0.0
        out[beyond] = 1.0 - self.a / r[beyond]
        rm = r[mid]
        with np.errstate(invalid="ignore", divide="ignore"):
            vals = self._spline(rm) / rm
        small = rm <= 1e-300
        vals[small] = self.du[0]
        out[mid] = vals
        return out

    def df0(self, r):
        """Radial derivative of f_0."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        beyond = r > self.grid[-1]
        mid = (r >= self.hard_core_radius) & ~beyond & (r > 0)
        out[beyond] = self.a / r[beyond] ** 2
        rm = r[mid]
        out[mid] = (self._spline(rm, 1) * rm - self._spline(rm)) / rm ** 2
        return out

    f0_at = f0


def _uniform_grid(r0, r_max, n_grid, breakpoints):
    """Uniform grid on [r0, >= r_max] with the first interior breakpoint on a node."""
    h = (r_max - r0) / (n_grid - 1)
    inner = [b for b in breakpoints if r0 < b < r_max]
    if inner:
        k = max(1, math.ceil((inner[0] - r0) / h))
        h = (inner[0] - r0) / k
    n = math.ceil((r_max - r0) / h - 1e-9) + 1
    return r0 + h * np.arange(n)


def _default_r_max(pot):
    reach = max(pot.support_radius(), pot.hard_core_radius, 1e-3)
    return 10.0 * reach


def solve_zero_energy(pot, r_max=None, n_grid=20001):
    """Integrate the zero-energy scattering equation outward and fit the tail.

    Fourth-order Runge-Kutta on a uniform grid from the hard-core radius (or
    the origin) with u = 0, u' = 1. The straight-line tail u = c (r - a) is
    least-squares fitted over the final 10% of the grid and the solution is
    rescaled by 1/c so that f -> 1.
    """
    if r_max is None:
        r_max = _default_r_max(pot)
    if n_grid < 1000:
        raise InvalidInputError("n_grid must be at least 1000")
    core = pot.hard_core_radius
    if r_max <= max(core, pot.integrable_beyond):
        raise InvalidInputError("r_max must lie beyond the range of the potential")

    if pot.is_zero:
        grid = np.linspace(0.0, r_max, n_grid)
        return ScatteringSolution(grid, grid.copy(), np.ones_like(grid), 0.0, 0.0)
    if pot.kind == "none":
        # pure hard sphere: f_0 = 1 - a/r outside the core, a = core radius
        grid = np.linspace(core, r_max, n_grid)
        return ScatteringSolution(grid, grid - core, np.ones_like(grid), core, 0.0, core)

    grid = _uniform_grid(core, r_max, n_grid, pot.breakpoints)
    h = grid[1] - grid[0]
    eps = 1e-9 * h
    v_lo = 0.5 * pot.tail(grid[:-1] + eps)
    v_mid = 0.5 * pot.tail(grid[:-1] + 0.5 * h)
    v_hi = 0.5 * pot.tail(grid[1:] - eps)
    n = grid.size
    u = np.empty(n)
    du = np.empty(n)
    y0, y1 = 0.0, 1.0
    u[0], du[0] = y0, y1
    half = 0.5 * h
    for i in range(n - 1):
        a, b, c = v_lo[i], v_mid[i], v_hi[i]
        k1u, k1p = y1, a * y0
        k2u, k2p = y1 + half * k1p, b * (y0 + half * k1u)
        k3u, k3p = y1 + half * k2p, b * (y0 + half * k2u)
        k4u, k4p = y1 + h * k3p, c * (y0 + h * k3u)
        y0 += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
        y1 += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
        u[i + 1], du[i + 1] = y0, y1
    if not np.all(np.isfinite(u)):
        raise TailFitError("scattering solution overflowed; reduce r_max or the potential strength")

    start = int(0.9 * n)
    rf, uf = grid[start:], u[start:]
    slope, intercept = np.polyfit(rf, uf, 1)
    fit = slope * rf + intercept
    residual = float(np.sqrt(np.mean((uf - fit) ** 2)) / (slope * rf[-1]))
    a_len = -intercept / slope
    tail_strength = float(np.max(pot.tail(rf) * rf ** 2))
    if residual > 1e-8 or tail_strength > 1e-8:
        raise TailFitError(
            f"tail of u(r) is not linear over the fit window (residual {residual:.2e}, "
            f"v r^2 up to {tail_strength:.2e}); increase r_max"
        )
    return ScatteringSolution(grid, u / slope, du / slope, float(a_len), residual, core)


def scattering_length(pot, **kwargs):
    return solve_zero_energy(pot, **kwargs).a


# --- variational characterization -------------------------------------------

_GAUSS3_X = np.array([-math.sqrt(0.6), 0.0, math.sqrt(0.6)])
_GAUSS3_W = np.array([5 / 9, 8 / 9, 5 / 9])


def _p1_forms(pot, grid):
    """Element stiffness and potential integrals of the radial functional on P1 elements."""
    r0, r1 = grid[:-1], grid[1:]
    h = r1 - r0
    stiff = 4 * math.pi * (r1 ** 3 - r0 ** 3) / 3 / h ** 2
    # element potential integrals of (1/2) v r^2 N_a N_b, 3-point Gauss
    xs = 0.5 * (r0 + r1)[:, None] + 0.5 * h[:, None] * _GAUSS3_X[None, :]
    ws = 0.5 * h[:, None] * _GAUSS3_W[None, :]
    t = (xs - r0[:, None]) / h[:, None]
    vv = 0.5 * pot.tail(xs) * xs ** 2 * ws * 4 * math.pi
    m00 = np.sum(vv * (1 - t) ** 2, axis=1)
    m01 = np.sum(vv * (1 - t) * t, axis=1)
    m11 = np.sum(vv * t ** 2, axis=1)
    return stiff, m00, m01, m11


def _assemble(stiff, m00, m01, m11, n):
    diag = np.zeros(n)
    diag[:-1] += stiff + m00
    diag[1:] += stiff + m11
    load = np.zeros(n)
    load[:-1] += m00 + m01
    load[1:] += m01 + m11
    return diag, -stiff + m01, load


def _exterior_radius_terms(pot, r_end):
    # harmonic continuation 1 - (1 - phi_R) R / r beyond r_end, plus (1/2) v with phi^2 <= 1
    return 4 * math.pi * r_end, 0.5 * pot.integral(r_end)


def scattering_functional(pot, grid, phi):
    """Value of the radial scattering functional for a trial function.

    ``phi`` is sampled on ``grid`` and interpolated linearly; outside the grid
    the trial is continued harmonically to 1 at infinity.
    """
    grid = np.asarray(grid, dtype=float)
    phi = np.asarray(phi, dtype=float)
    stiff, m00, m01, m11 = _p1_forms(pot, grid)
    p0, p1 = phi[:-1], phi[1:]
    quad = float(np.sum(stiff * (p1 - p0) ** 2)
                 + np.sum(m00 * p0 ** 2 + 2 * m01 * p0 * p1 + m11 * p1 ** 2))
    ext, tail = _exterior_radius_terms(pot, grid[-1])
    return quad + ext * (1 - phi[-1]) ** 2 + tail


@dataclass
class VariationalResult:
    a_bound: float
    grid: np.ndarray
    phi: np.ndarray
    energy: float


def variational_scattering_length(pot, trial_grid=None, r_max=None, n_grid=20001):
    """Upper bound on a from minimizing the functional over P1 trial functions.

    The minimization is a tridiagonal linear solve, so it has no iteration cap.
    """
    if pot.is_zero:
        grid = np.linspace(0.0, 1.0, 2) if trial_grid is None else np.asarray(trial_grid)
        return VariationalResult(0.0, grid, np.ones_like(grid), 0.0)
    core = pot.hard_core_radius
    if trial_grid is None:
        if r_max is None:
            r_max = _default_r_max(pot)
        grid = _uniform_grid(core, r_max, n_grid, pot.breakpoints)
    else:
        grid = np.asarray(trial_grid, dtype=float)
        if grid[0] < core - 1e-12 or np.any(np.diff(grid) <= 0):
            raise InvalidInputError("trial grid must be increasing and start outside the hard core")
    # solve for psi = 1 - phi so the small potential load is the right-hand side
    # and nothing of order r^2/h cancels
    stiff, m00, m01, m11 = _p1_forms(pot, grid)
    diag, off, load = _assemble(stiff, m00, m01, m11, grid.size)
    ext, tail = _exterior_radius_terms(pot, grid[-1])
    diag[-1] += ext
    const = float(np.sum(m00 + 2 * m01 + m11)) + tail
    if core > 0:
        # psi = 1 at the hard core
        rhs = load[1:].copy()
        rhs[0] -= off[0]
        const += diag[0] - 2 * load[0]
        diag, off = diag[1:], off[1:]
    else:
        rhs = load
    ab = np.vstack([np.concatenate([[0.0], off]), diag])
    psi = solveh_banded(ab, rhs)
    energy = const - float(rhs @ psi)
    phi = 1 - psi
    if core > 0:
        phi = np.concatenate([[0.0], phi])
    return VariationalResult(energy / (4 * math.pi), grid, phi, energy)


# --- Jastrow cutoff -----------------------------------------------------------


@dataclass
class JastrowCutoff:
    """f_b(r) = f_0(r) / f_0(b) for r < b and 1 beyond."""

    b: float
    solution: ScatteringSolution
    f0_b: float

    @property
    def a(self):
        return self.solution.a

    @property
    def hard_core_radius(self):
        return self.solution.hard_core_radius

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.b, self.solution.f0(r) / self.f0_b, 1.0)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.b, self.solution.df0(r) / self.f0_b, 0.0)


def jastrow(sol, b=None):
    """Jastrow cutoff built from a scattering solution; b defaults to 2a."""
    if b is None:
        b = 2.0 * sol.a
    if b <= sol.hard_core_radius or b <= 0:
        raise InvalidInputError("cutoff radius b must lie outside the hard core")
    f0_b = float(sol.f0(np.array([b]))[0])
    return JastrowCutoff(b=b, solution=sol, f0_b=f0_b)


@dataclass(frozen=True)
class IntegralCheck:
    value: float
    reference: float
    margin: float


def _radial_quad(fun, lo, hi, points=None):
    if hi <= lo:
        return 0.0
    val, _ = integrate.quad(fun, lo, hi, limit=400, epsabs=1e-12, epsrel=1e-10, points=points)
    return val


def eta_integral(cut):
    """Integral over R^3 of 1 - f_b^2, against the bound (4 pi / 3) a b^2."""
    core, b = cut.hard_core_radius, cut.b
    inner = [p for p in cut.solution.grid[[0, -1]] if core < p < b]
    val = 4 * math.pi * core ** 3 / 3 + 4 * math.pi * _radial_quad(
        lambda s: (1.0 - float(cut(np.array([s]))[0]) ** 2) * s * s, core, b, inner or None
    )
    bound = 4 * math.pi * cut.a * b * b / 3
    return IntegralCheck(val, bound, bound - val)


@dataclass(frozen=True)
class XiIntegral:
    value: float
    boundary_identity: float
    closed_form: float


def xi_integral(cut, pot):
    """Integral of |grad f_b|^2 + v f_b^2 / 2 over R^3.

    Returns the quadrature value together with the boundary identity
    4 pi b^2 f_0'(b) / f_0(b) + (1/2) int_{r>b} v (exact for the scattering
    solution) and the closed form 4 pi a / (1 - a/b) + int_{r>b} v, which
    dominates it and is attained when v vanishes beyond b.
    """
    a, b, core = cut.a, cut.b, cut.hard_core_radius
    if b <= a:
        raise InvalidInputError("closed form is singular for b <= a")

    def integrand(s):
        arr = np.array([s])
        f = cut(arr)[0]
        df = cut.derivative(arr)[0]
        return (df * df + 0.5 * float(pot.tail(arr)[0]) * f * f) * s * s

    pts = [p for p in pot.breakpoints if core < p < b]
    inner = 4 * math.pi * _radial_quad(integrand, core, b, pts or None)
    outer = 0.5 * pot.integral(b)
    value = inner + outer
    f0b = cut.f0_b
    df0b = float(cut.solution.df0(np.array([b]))[0])
    identity = 4 * math.pi * b * b * df0b / f0b + outer
    closed = 4 * math.pi * a / (1 - a / b) + pot.integral(b)
    return XiIntegral(value, identity, closed)
