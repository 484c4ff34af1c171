"""Default inequality suite driven by the ``verify`` command."""

import numpy as np

from . import entropy as ent
from .gp import gp_coercivity_check
from .idealgas import OscillatorSpectrum, verify_appendix_a
from .manybody import (
    ModeBasis,
    canonical_gibbs,
    contact_tensor_1d,
    entropy_inequality_check,
    gaussian_tensor_1d,
    theorem_sandwich,
)
from .report import Report, leq


def scalar_entropy_checks(rng, n_pairs, c=ent.C_SCALAR, hi=100.0):
    x = rng.uniform(0, hi, n_pairs)
    y = rng.uniform(0, hi, n_pairs)
    s = ent.scalar_rel_entropy(x, y)
    low = ent.scalar_lower_bound(x, y, c)
    rep = Report()
    bad = np.nonzero(s - low < -1e-12 * np.maximum(1.0, s))[0]
    rep.add(leq("scalar_rel_entropy_bound_count", float(bad.size), 0.0, 0.0, n_pairs=n_pairs, c=c))
    for i in bad[:20]:
        rep.add(leq("scalar_rel_entropy_bound", float(low[i]), float(s[i]), 1e-12, x=float(x[i]), y=float(y[i])))
    return rep


def operator_entropy_checks(rng, n_pairs, c1=ent.C1, c2=ent.C2, max_dim=16):
    rep = Report()
    for k in range(n_pairs):
        d = int(rng.integers(1, max_dim + 1))
        g0 = ent.random_operator(rng, d, scale=float(rng.choice([0.1, 1.0, 10.0])))
        commuting = k % 2 == 0
        g = ent.random_operator(rng, d, scale=float(rng.choice([0.1, 1.0, 10.0])), commuting=g0 if commuting else None)
        rep.extend(ent.verify_lemma_coercivity(g, g0, c1=c1, c2=c2))
    return rep


def trace_norm_checks(rng, n_cases, max_dim=8):
    rep = Report()
    for _ in range(n_cases):
        d = int(rng.integers(2, max_dim + 1))
        g0 = ent.random_operator(rng, d)
        g = ent.random_operator(rng, d)
        rank = int(rng.integers(1, d))
        frame = ent.random_unitary(rng, d)[:, :rank]
        proj = frame @ frame.T
        lam = float(rng.choice([1.0, 4.0])) * float(g0.eigenvalues.max())
        rep.extend(ent.trace_norm_bound_check(g, g0, proj, lam))
    return rep


def manybody_checks(n_tensors=4, beta=1.0):
    rep = Report()
    basis = ModeBasis((0.0, 1.0, 2.0, 3.0))
    for k in range(n_tensors):
        if k % 2 == 0:
            t = contact_tensor_1d(4, 0.1 * (k + 1))
        else:
            t = gaussian_tensor_1d(4, 0.5 * k, 0.8)
        sw = theorem_sandwich(basis, t, 3, beta)
        rep.extend(sw)
        rep.extend(entropy_inequality_check(sw.state))
    rep.extend(entropy_inequality_check(canonical_gibbs(basis, contact_tensor_1d(4, 0.0), 3, beta)))
    return rep


def default_suite(seed=0, c1=ent.C1, c2=ent.C2, scalar_pairs=10000, operator_pairs=200, trace_cases=200,
                  gp=True):
    """Run all inequality families; returns a Report whose ``ok`` decides the exit status."""
    rng = np.random.default_rng(seed)
    rep = Report()
    for bw in (0.2, 0.5, 1.0):
        sp = OscillatorSpectrum(bw, 20)
        rep.extend(verify_appendix_a(sp.energies, 1.0, range(1, 31), sp.degeneracies, pairs=False))
    rep.extend(scalar_entropy_checks(rng, scalar_pairs, c=c2))
    rep.extend(operator_entropy_checks(rng, operator_pairs, c1=c1, c2=c2))
    rep.extend(trace_norm_checks(rng, trace_cases))
    rep.extend(manybody_checks())
    if gp:
        rep.extend(gp_coercivity_check(100, 0.01, 1.0, [50, 75, 150, 200]))
    return rep
