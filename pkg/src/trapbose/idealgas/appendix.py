"""Finite checks of the canonical versus grand canonical comparison for the ideal gas."""

import math

import numpy as np
from scipy.special import logsumexp

from ..entropy import scalar_rel_entropy
from ..report import Report, leq
from .canonical import log_partition
from .grand import _as_levels, grand_canonical, solve_mu

DENSITY_CONSTANT = 40.0 / 1.8
PROB_CONSTANT = 2 * math.sqrt(3) - 3


def _occupations(e, beta, log_z, n):
    if n == 0:
        return np.zeros_like(e)
    m = np.arange(1, n + 1)
    terms = -np.outer(e, m) * beta + (log_z[n - m] - log_z[n])[None, :]
    return np.exp(logsumexp(terms, axis=1))


def _factorial2(e, beta, log_z, n):
    """<n_j(n_j - 1)> for one mode of every level."""
    if n < 2:
        return np.zeros_like(e)
    m = np.arange(2, n + 1)
    terms = -np.outer(e, m) * beta + (log_z[n - m] - log_z[n])[None, :]
    return 2 * np.exp(logsumexp(terms, axis=1, b=(m - 1)[None, :]))


def _pair_distinct_matrix(e, beta, log_z, n):
    """<n_p n_q> for distinct modes p in level i and q in level j, all level pairs."""
    if n < 2:
        return np.zeros((e.size, e.size))
    s = np.arange(2, n + 1)
    # inner sum over splits m + l = s of x_i^m x_j^l
    m = np.arange(1, n)
    logx = -beta * e
    a = logx[:, None, None, None] * m[None, None, :, None] + logx[None, :, None, None] * (
        s[None, None, None, :] - m[None, None, :, None]
    )
    valid = (m[:, None] < s[None, :])[None, None]
    a = np.where(valid, a, -np.inf)
    inner = logsumexp(a, axis=2)
    return np.exp(logsumexp(inner + (log_z[n - s] - log_z[n])[None, None, :], axis=2))


def verify_appendix_a(energies, beta, n_range, degeneracies=None, pairs=True, tol=1e-9):
    """Run the ideal-gas comparison suite for every N in ``n_range``.

    Checks, per N: convexity of F; monotonicity in N of <n_j> and
    <n_j(n_j-1)>; the free-energy sandwich; the density and pair-density
    comparison with the constant 40/1.8; the fourth-moment bound; the
    relative-entropy and trace-norm estimates; and the probability bound for
    N >= N_bar. Free energies carry the temperature factor, i.e. the sandwich
    reads F(N) >= F_gc >= F(N) - T(ln(1+N) + 1).
    """
    e, g = _as_levels(energies, degeneracies)
    ns = sorted(int(n) for n in n_range)
    if not ns or ns[0] < 1:
        raise ValueError("n_range must contain positive integers")
    temp = 1.0 / beta
    top = ns[-1] + 1
    log_z = log_partition(e, g, beta, top)
    free = -log_z / beta
    i0 = int(np.argmin(e))
    rep = Report()
    for n in ns:
        inputs = {"N": n, "beta": float(beta)}
        # (i) convexity
        rep.add(leq("F_convexity", 2 * free[n], free[n + 1] + free[n - 1], tol, **inputs))
        # (ii) monotone occupations and factorial moments
        occ_n, occ_m = _occupations(e, beta, log_z, n), _occupations(e, beta, log_z, n - 1)
        f2_n, f2_m = _factorial2(e, beta, log_z, n), _factorial2(e, beta, log_z, n - 1)
        for j in range(e.size):
            rep.add(leq("occupation_monotone", occ_m[j], occ_n[j], tol, level=j, **inputs))
            rep.add(leq("factorial_moment_monotone", f2_m[j], f2_n[j], tol, level=j, **inputs))

        mu = solve_mu(e, g, beta, n)
        gc = grand_canonical(e, g, beta, mu)
        fgc = gc.free_energy_gc
        # (iii) sandwich
        rep.add(leq("free_energy_upper", fgc, free[n], tol, mu=mu, **inputs))
        rep.add(leq("free_energy_lower", free[n] - temp * (math.log1p(n) + 1), fgc, tol, mu=mu, **inputs))
        # (iv) density comparison
        ngc = gc.occupations
        for j in range(e.size):
            rep.add(leq("density_comparison", occ_n[j], DENSITY_CONSTANT * ngc[j], tol, level=j, **inputs))
        if pairs:
            pc = 4 * DENSITY_CONSTANT ** 2
            for j in range(e.size):
                rep.add(leq("pair_density_same_mode", f2_n[j], pc * ngc[j] ** 2, tol, level=j, **inputs))
            pd = _pair_distinct_matrix(e, beta, log_z, n)
            for i in range(e.size):
                for j in range(i, e.size):
                    if i == j and g[i] < 2:
                        continue
                    rep.add(leq("pair_density_distinct", pd[i, j], pc * ngc[i] * ngc[j], tol,
                                levels=[i, j], **inputs))
        # (v) fourth moment
        var, m4 = gc.variance, gc.fourth_central_moment
        rep.add(leq("fourth_moment", m4, 9 * var ** 2 + var, tol, **inputs))
        rep.add(leq("variance_vs_mean", n, var, tol, **inputs))
        # (vi) relative entropy and trace-norm closeness of the 1-RDMs
        s_rel = float(np.sum(g * scalar_rel_entropy(occ_n, ngc)))
        rep.add(leq("free_energy_entropy_identity", fgc + temp * s_rel, free[n], tol, **inputs))
        rep.add(leq("relative_entropy_log_bound", s_rel, math.log1p(n) + 1, tol, **inputs))
        exc_g = g.copy()
        exc_g[i0] -= 1
        d_tilde = float(np.sum(exc_g * np.abs(occ_n - ngc)))
        full = d_tilde + abs(occ_n[i0] - ngc[i0])
        tilde_norm = float(np.max(np.where(exc_g > 0, ngc, 0.0)))
        t2 = float(np.sum(exc_g * ngc * (1 + ngc)))
        ell = math.log1p(n) + 1
        d_bound = 13.5 * ell * (1 + tilde_norm) + math.sqrt(27 * ell * t2)
        rep.add(leq("condensate_difference", abs(occ_n[i0] - ngc[i0]), d_tilde, tol, **inputs))
        rep.add(leq("reduced_vs_full_trace_norm", d_tilde, full, tol, **inputs))
        rep.add(leq("reduced_trace_norm_bound", d_tilde, d_bound, tol, **inputs))
        rep.add(leq("trace_norm_bound", full, 2 * d_bound, tol, **inputs))
        # (vii) probability of N' >= N_bar under the weights lambda
        low = np.arange(n)
        log_lam = gc.log_lambda(low, log_z[:n])
        p_ge = 1.0 - float(np.exp(logsumexp(log_lam))) if n > 0 else 1.0
        y = m4 / var ** 2
        rep.add(leq("probability_bound", PROB_CONSTANT / y, p_ge, tol, Y=y, **inputs))
        rep.add(leq("probability_constant", 1.8 / 40, PROB_CONSTANT / y, tol, Y=y, **inputs))
    return rep
