"""Bosonic entropy, relative entropy of one-particle operators, and their coercivity bounds."""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, InvalidInputError
from .report import Report, leq

KERNEL_FLOOR = 1e-30
C_SCALAR = 2.0 / 27.0
C1 = 1.0 / 54.0
C2 = 2.0 / 27.0


def sigma(x):
    """x ln x - (1+x) ln(1+x), with sigma(0) = 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("sigma is defined for x >= 0")
    out = xlogy(x, x) - (1 + x) * np.log1p(x)
    return out if out.ndim else float(out)


def sigma_prime(y):
    """ln(y / (1 + y)) for y > 0."""
    y = np.asarray(y, dtype=float)
    out = -np.log1p(1.0 / y)
    return out if out.ndim else float(out)


def _series_rel_entropy(y, d, terms=10):
    total = np.zeros_like(d)
    for n in range(terms):
        c = (y ** (-n - 1) - (1 + y) ** (-n - 1)) / ((n + 1) * (n + 2))
        total += (-1) ** n * c * d ** (n + 2)
    return total


def scalar_rel_entropy(x, y):
    """S(x, y) = sigma(x) - sigma(y) - sigma'(y)(x - y) >= 0, +inf for y = 0 < x."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("arguments must be nonnegative")
    out = np.zeros(x.shape)
    pos = y > 0
    xp, yp = x[pos], y[pos]
    d = xp - yp
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = xp / yp
        # x ln(x/y), split into logs where the ratio underflows
        xlog = np.where((ratio > 0) | (xp == 0), xlogy(xp, ratio), xp * (np.log(xp) - np.log(yp)))
        val = xlog - (1 + xp) * np.log1p(d / (1 + yp))
    small = np.abs(d) < 1e-3 * yp
    if np.any(small):
        val[small] = _series_rel_entropy(yp[small], d[small])
    out[pos] = np.maximum(val, 0.0)
    out[(y == 0) & (x > 0)] = np.inf
    return out if out.ndim else float(out)


def scalar_lower_bound(x, y, c=C_SCALAR):
    """c (x - y)^2 / ((x + y)(1 + y)), zero when x = y = 0."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    den = (x + y) * (1 + y)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den > 0, c * (x - y) ** 2 / den, 0.0)
    return out if out.ndim else float(out)


def coercive_f(x):
    """x / sqrt(1 + x)."""
    x = np.asarray(x, dtype=float)
    return x / np.sqrt(1 + x)


@dataclass
class SpectralOperator:
    """Nonnegative self-adjoint matrix as eigenvalues and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        self.eigenvectors = np.asarray(self.eigenvectors)
        d = self.eigenvalues.size
        if self.eigenvectors.shape != (d, d):
            raise InvalidInputError("eigenvector matrix must be d x d")
        if np.any(self.eigenvalues < 0):
            raise DomainError("eigenvalues must be nonnegative")
        gram = self.eigenvectors.conj().T @ self.eigenvectors
        if np.max(np.abs(gram - np.eye(d))) > 1e-10:
            raise InvalidInputError("eigenvectors are not orthonormal")

    @classmethod
    def from_matrix(cls, m, neg_tol=1e-12):
        m = np.asarray(m)
        if np.max(np.abs(m - m.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(m))):
            raise InvalidInputError("matrix is not self-adjoint")
        w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
        scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
        if np.any(w < -neg_tol * scale):
            raise DomainError("matrix is not nonnegative")
        return cls(np.clip(w, 0.0, None), v)

    @classmethod
    def diagonal(cls, values):
        values = np.asarray(values, dtype=float)
        return cls(values, np.eye(values.size))

    @property
    def dimension(self):
        return self.eigenvalues.size

    def apply(self, fun):
        u = self.eigenvectors
        return (u * fun(self.eigenvalues)[None, :]) @ u.conj().T

    @property
    def matrix(self):
        return self.apply(lambda x: x)

    @property
    def trace(self):
        return float(np.sum(self.eigenvalues))


def _as_operator(g):
    return g if isinstance(g, SpectralOperator) else SpectralOperator.from_matrix(g)


def overlap_weights(gamma, gamma0):
    """|<psi_i | phi_j>|^2 between the two eigenbases."""
    return np.abs(gamma.eigenvectors.conj().T @ gamma0.eigenvectors) ** 2


def rel_entropy(gamma, gamma0):
    """Bosonic relative entropy sum_{ij} |<psi_i|phi_j>|^2 S(lambda_i, nu_j).

    Eigenvalues of gamma0 below 1e-30 are treated as kernel; the result is
    +inf unless gamma has no weight there.
    """
    gamma, gamma0 = _as_operator(gamma), _as_operator(gamma0)
    if gamma.dimension != gamma0.dimension:
        raise InvalidInputError("dimension mismatch")
    w = overlap_weights(gamma, gamma0)
    lam, nu = gamma.eigenvalues, gamma0.eigenvalues
    kernel = nu <= KERNEL_FLOOR
    if np.any(kernel):
        mass = lam @ w[:, kernel]
        if np.any(mass > KERNEL_FLOOR * max(1.0, gamma.trace)):
            return math.inf
    s = scalar_rel_entropy(lam[:, None], np.where(kernel, 1.0, nu)[None, :])
    s[:, kernel] = 0.0
    return float(np.sum(w * s))


def bose_entropy(gamma):
    """s(gamma) = -tr sigma(gamma)."""
    gamma = _as_operator(gamma)
    return float(-np.sum(sigma(gamma.eigenvalues)))


def coercivity_terms(gamma, gamma0):
    """Right-hand-side ingredients of both coercivity bounds.

    Returns (operator term tr[(1+g0)^{-1}(f(g)-f(g0))^2], trace difference
    tr(g - g0), denominator tr[(g + g0)(1 + g0)]).
    """
    w = overlap_weights(gamma, gamma0)
    lam, nu = gamma.eigenvalues, gamma0.eigenvalues
    fl, fn = coercive_f(lam), coercive_f(nu)
    op_term = float(np.sum(w * (fl[:, None] - fn[None, :]) ** 2 / (1 + nu[None, :])))
    tdiff = float(lam.sum() - nu.sum())
    denom = float(np.sum(w * (lam[:, None] + nu[None, :]) * (1 + nu[None, :])))
    return op_term, tdiff, denom


def verify_lemma_coercivity(gamma, gamma0, c1=C1, c2=C2, lambdas=None, tol=1e-10):
    """Check both coercivity bounds of the relative entropy and the linear-in-lambda family."""
    gamma, gamma0 = _as_operator(gamma), _as_operator(gamma0)
    s = rel_entropy(gamma, gamma0)
    op_term, tdiff, denom = coercivity_terms(gamma, gamma0)
    rep = Report()
    rep.add(leq("relative_entropy_operator_bound", c1 * op_term, s, tol, c1=c1))
    trace_rhs = c2 * tdiff ** 2 / denom if denom > 0 else 0.0
    rep.add(leq("relative_entropy_trace_bound", trace_rhs, s, tol, c2=c2))
    if lambdas is None:
        lam_star = tdiff / denom if denom > 0 else 0.0
        lambdas = lam_star * np.linspace(-2.0, 3.0, 20)
    for lam in lambdas:
        family = (4.0 / 27.0) * lam * tdiff - (2.0 / 27.0) * lam ** 2 * denom
        rep.add(leq("relative_entropy_lambda_family", family, s, tol, lam=float(lam)))
    rep.rel_entropy = s
    rep.operator_term = op_term
    rep.trace_term = trace_rhs
    return rep


def trace_norm(m):
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def trace_norm_bound_check(gamma, gamma0, projection, lam, tol=1e-10):
    """Trace-norm estimate through a spectral cutoff gamma~ = 1(gamma <= lam) gamma and a projection P."""
    gamma, gamma0 = _as_operator(gamma), _as_operator(gamma0)
    g, g0 = gamma.matrix, gamma0.matrix
    p = np.asarray(projection)
    q = np.eye(p.shape[0]) - p
    high = gamma.apply(lambda x: np.where(x > lam, x, 0.0))
    g_low = g - high
    lhs = trace_norm(g - g0)
    dt = abs(float(np.trace(g_low - g0).real))
    dp = trace_norm((g_low - g0) @ p)
    rhs = (
        float(np.trace(high).real)
        + dp
        + 2 * math.sqrt(trace_norm(g0) + dt) * math.sqrt(trace_norm(q @ g0 @ q) + dt + dp)
    )
    rep = Report()
    rep.add(leq("trace_norm_pipeline", lhs, rhs, tol, lam=float(lam), rank=int(round(np.trace(p).real))))
    return rep


def random_unitary(rng, d):
    z = rng.normal(size=(d, d))
    qm, r = np.linalg.qr(z)
    return qm * np.sign(np.diag(r))[None, :]


def random_operator(rng, d, scale=5.0, commuting=None, zeros=0):
    """Random nonnegative operator; shares the frame of ``commuting`` when given."""
    ev = rng.exponential(scale, size=d)
    if zeros:
        ev[rng.choice(d, size=zeros, replace=False)] = 0.0
    frame = commuting.eigenvectors if commuting is not None else random_unitary(rng, d)
    return SpectralOperator(ev, frame)
