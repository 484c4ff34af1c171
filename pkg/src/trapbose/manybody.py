"""Exact diagonalization of bosons on a few modes.

The interaction is (1/2) sum v_ijkl a_i^* a_j^* a_k a_l with
v_ijkl = int int psi_i(x) psi_j(y) w(x - y) psi_k(y) psi_l(x).
Occupation vectors of a sector are ordered lexicographically from the top,
e.g. (2,0), (1,1), (0,2).
"""

from dataclasses import dataclass
import math

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy import sparse
from scipy.special import logsumexp

from .entropy import bose_entropy
from .errors import CapacityError, InvalidInputError, PreconditionError
from .idealgas.density import hermite_functions
from .report import Report, leq

SECTOR_CAPACITY = 20000


@dataclass(frozen=True)
class ModeBasis:
    energies: tuple

    def __post_init__(self):
        e = tuple(float(x) for x in self.energies)
        if not e:
            raise InvalidInputError("at least one mode is required")
        if any(x < 0 for x in e) or any(b < a for a, b in zip(e, e[1:])):
            raise InvalidInputError("mode energies must be nonnegative and nondecreasing")
        object.__setattr__(self, "energies", e)

    @property
    def n_modes(self):
        return len(self.energies)


def sector_dimension(n_modes, n):
    return math.comb(n + n_modes - 1, n)


def sector_states(n_modes, n):
    """All occupation vectors with |n| = N, descending lexicographic order."""
    if n_modes == 1:
        return np.array([[n]], dtype=int)
    out = []
    for first in range(n, -1, -1):
        rest = sector_states(n_modes - 1, n - first)
        out.append(np.column_stack([np.full(len(rest), first), rest]))
    return np.vstack(out)


class _Sector:
    def __init__(self, n_modes, n):
        self.n = n
        self.states = sector_states(n_modes, n) if n >= 0 else np.zeros((0, n_modes), dtype=int)
        self.index = {tuple(s): i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)


def _annihilator(sec_from, sec_to, mode):
    """Sparse matrix of a_mode from the N-sector to the (N-1)-sector."""
    rows, cols, vals = [], [], []
    for c, s in enumerate(sec_from.states):
        k = s[mode]
        if k == 0:
            continue
        t = s.copy()
        t[mode] -= 1
        rows.append(sec_to.index[tuple(t)])
        cols.append(c)
        vals.append(math.sqrt(k))
    return sparse.csr_matrix((vals, (rows, cols)), shape=(len(sec_to), len(sec_from)))


@dataclass
class TwoBodyTensor:
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v)
        if v.ndim != 4 or len(set(v.shape)) != 1:
            raise InvalidInputError("tensor must be M x M x M x M")
        self.v = v

    @property
    def n_modes(self):
        return self.v.shape[0]

    def symmetrized(self):
        v = self.v
        v = 0.5 * (v + v.transpose(1, 0, 2, 3))
        v = 0.5 * (v + v.transpose(0, 1, 3, 2))
        return TwoBodyTensor(v)

    def is_hermitian(self, tol=1e-12):
        return bool(np.max(np.abs(self.v - self.v.transpose(3, 2, 1, 0).conj())) <= tol * max(1.0, np.max(np.abs(self.v))))

    def is_symmetric(self, tol=1e-12):
        v = self.v
        return bool(
            np.max(np.abs(v - v.transpose(1, 0, 2, 3))) <= tol
            and np.max(np.abs(v - v.transpose(0, 1, 3, 2))) <= tol
        )

    def is_nonnegative(self, tol=1e-10):
        """Whether the two-particle sector of the interaction is positive semidefinite."""
        basis = ModeBasis(tuple(range(self.n_modes)))
        m = interaction_matrix(basis, self, 2)
        w = np.linalg.eigvalsh(m)
        return bool(w.min() >= -tol * max(1.0, abs(w).max()))

    @classmethod
    def zeros(cls, m):
        return cls(np.zeros((m, m, m, m)))


def _oscillator_modes_1d(n_modes, omega, nodes):
    length = math.sqrt(2.0 / omega)
    return hermite_functions(n_modes - 1, nodes / length) / math.sqrt(length)


def contact_tensor_1d(n_modes, g, omega=1.0, quad_order=None):
    """g int psi_i psi_j psi_k psi_l dx over one-dimensional oscillator modes."""
    q = quad_order or 2 * n_modes + 4
    s, w = hermgauss(q)
    length = math.sqrt(2.0 / omega)
    # nodes for weight exp(-x^2 / length^2 * 2): the product of four modes carries e^{-2 s^2}
    x = s * length / math.sqrt(2.0)
    psi = _oscillator_modes_1d(n_modes, omega, x)
    weights = w * np.exp(s * s) * length / math.sqrt(2.0)
    v = g * np.einsum("q,iq,jq,kq,lq->ijkl", weights, psi, psi, psi, psi)
    return TwoBodyTensor(v)


def gaussian_tensor_1d(n_modes, amplitude, width, omega=1.0, n_quad=80):
    """Gaussian pair interaction w(x - y) = amplitude exp(-(x - y)^2 / width^2) over 1D oscillator modes."""
    s, wq = hermgauss(n_quad)
    length = math.sqrt(2.0 / omega)
    x = s * length / math.sqrt(2.0)
    weights = wq * np.exp(s * s) * length / math.sqrt(2.0)
    psi = _oscillator_modes_1d(n_modes, omega, x)
    kern = amplitude * np.exp(-((x[:, None] - x[None, :]) ** 2) / width ** 2)
    a = psi * weights[None, :]
    # v_ijkl = sum_xy psi_i(x) psi_l(x) w(x-y) psi_j(y) psi_k(y)
    px = np.einsum("ix,lx->ilx", a, psi)
    py = np.einsum("jy,ky->jky", a, psi)
    v = np.einsum("ilx,xy,jky->ijkl", px, kern, py)
    return TwoBodyTensor(v).symmetrized()


def _pair_operators(basis, n):
    m = basis.n_modes
    s_n, s_1, s_2 = _Sector(m, n), _Sector(m, n - 1), _Sector(m, n - 2)
    a1 = [_annihilator(s_n, s_1, k) for k in range(m)]
    a2 = [_annihilator(s_1, s_2, k) for k in range(m)]
    # A[k, l] = a_k a_l : N -> N - 2
    return s_n, {(k, l): a2[k] @ a1[l] for k in range(m) for l in range(m)}


def interaction_matrix(basis, tensor, n):
    if tensor.n_modes != basis.n_modes:
        raise InvalidInputError("tensor and basis have different mode counts")
    dim = sector_dimension(basis.n_modes, n)
    if dim > SECTOR_CAPACITY:
        raise CapacityError(f"sector dimension {dim} exceeds {SECTOR_CAPACITY}")
    if n < 2:
        return np.zeros((dim, dim))
    m = basis.n_modes
    _, pairs = _pair_operators(basis, n)
    v = tensor.v
    out = sparse.csr_matrix((dim, dim))
    for (k, l), akl in pairs.items():
        # sum_ij v_ijkl (a_j a_i)^T
        left = None
        for i in range(m):
            for j in range(m):
                c = v[i, j, k, l]
                if c != 0:
                    term = c * pairs[(j, i)].T
                    left = term if left is None else left + term
        if left is not None:
            out = out + left @ akl
    return 0.5 * out.toarray()


def one_body_diagonal(basis, n):
    states = sector_states(basis.n_modes, n)
    return states @ np.asarray(basis.energies)


def build_hamiltonian(basis, tensor, n):
    """Sector Hamiltonian sum_j E_j n_j + (1/2) sum v_ijkl a_i^* a_j^* a_k a_l."""
    h = interaction_matrix(basis, tensor, n)
    h[np.diag_indices_from(h)] += one_body_diagonal(basis, n)
    return h


def one_body_operators(basis, n):
    """Dense matrices of a_j^* a_i on the sector, keyed by (i, j)."""
    m = basis.n_modes
    s_n, s_1 = _Sector(m, n), _Sector(m, n - 1)
    a = [_annihilator(s_n, s_1, k) for k in range(m)]
    return {(i, j): (a[j].T @ a[i]) for i in range(m) for j in range(m)}


def one_body_density(basis, n, gamma_state):
    """gamma_ij = tr(Gamma a_j^* a_i)."""
    m = basis.n_modes
    if n == 0:
        return np.zeros((m, m))
    ops = one_body_operators(basis, n)
    g = np.empty((m, m))
    for (i, j), op in ops.items():
        g[i, j] = float(np.sum(op.multiply(gamma_state.T)))
    return 0.5 * (g + g.T)


def von_neumann_entropy(rho):
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-300]
    return float(-np.sum(w * np.log(w)))


@dataclass
class ManyBodyGibbs:
    n_particles: int
    beta: float
    hamiltonian: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    weights: np.ndarray
    free_energy: float
    entropy: float
    gamma: np.ndarray
    basis: ModeBasis

    @property
    def density_matrix(self):
        u = self.eigenvectors
        return (u * self.weights[None, :]) @ u.T


def gibbs(h, beta, basis=None, n=None):
    """Canonical Gibbs state of a sector Hamiltonian."""
    h = np.asarray(h, dtype=float)
    w, u = np.linalg.eigh(h)
    logw = -beta * w
    lz = logsumexp(logw)
    p = np.exp(logw - lz)
    free = float(-lz / beta)
    s = float(-np.sum(p[p > 0] * np.log(p[p > 0])))
    gamma = None
    if basis is not None:
        gam_state = (u * p[None, :]) @ u.T
        gamma = one_body_density(basis, n, gam_state)
    return ManyBodyGibbs(n, float(beta), h, w, u, p, free, s, gamma, basis)


def canonical_gibbs(basis, tensor, n, beta):
    return gibbs(build_hamiltonian(basis, tensor, n), beta, basis, n)


def free_energy_functional(h, state, beta, tol=1e-10):
    """tr(H Gamma) - S(Gamma) / beta."""
    state = np.asarray(state)
    tr = float(np.trace(state).real)
    if abs(tr - 1) > tol:
        raise PreconditionError(f"state has trace {tr}, expected 1")
    return float(np.sum(h * state.T).real) - von_neumann_entropy(state) / beta


def random_density_matrix(rng, dim, rank=None):
    rank = rank or dim
    x = rng.normal(size=(dim, rank))
    rho = x @ x.T
    return rho / np.trace(rho)


def gibbs_variational_check(h, beta, states, tol=1e-10):
    g = gibbs(h, beta)
    rep = Report()
    for k, rho in enumerate(states):
        rep.add(leq("gibbs_variational", g.free_energy, free_energy_functional(h, rho, beta), tol, sample=k))
    return rep


def theorem_sandwich(basis, tensor, n, beta, check_positive=True, tol=1e-10):
    """F_0 <= F <= F_0 + tr(V Gamma_0) with both sides from exact diagonalization."""
    if check_positive and not tensor.is_nonnegative():
        raise PreconditionError("interaction tensor does not define a nonnegative operator")
    v = interaction_matrix(basis, tensor, n)
    h0 = np.diag(one_body_diagonal(basis, n))
    g0 = gibbs(h0, beta)
    g = gibbs(h0 + v, beta, basis, n)
    vexp = float(np.sum(v * g0.density_matrix.T))
    rep = Report()
    rep.add(leq("interaction_lower_bound", g0.free_energy, g.free_energy, tol, N=n, beta=beta))
    rep.add(leq("interaction_upper_bound", g.free_energy, g0.free_energy + vexp, tol, N=n, beta=beta))
    rep.f0, rep.f, rep.v_expectation = g0.free_energy, g.free_energy, vexp
    rep.state = g
    return rep


def bec_diagnostics(state):
    """Largest 1-RDM eigenvalue over N and the squared overlap of its eigenvector with mode 0."""
    w, u = np.linalg.eigh(state.gamma)
    top = u[:, -1]
    return {"fraction": float(w[-1] / state.n_particles), "overlap": float(abs(top[0]) ** 2)}


def entropy_inequality_check(state, tol=1e-9):
    """S(Gamma) <= s(gamma) for the state and its one-particle density matrix."""
    rep = Report()
    rep.add(leq("entropy_inequality", state.entropy, bose_entropy(state.gamma), tol))
    return rep


@dataclass
class ProductFockState:
    """Diagonal Fock-space state: independent per-mode occupation distributions."""

    occupation_probs: list

    @property
    def entropy(self):
        return float(sum(-np.sum(p[p > 0] * np.log(p[p > 0])) for p in self.occupation_probs))

    @property
    def gamma(self):
        return np.diag([float(np.arange(p.size) @ p) for p in self.occupation_probs])

    def mode_entropy(self, modes):
        return float(sum(-np.sum(p[p > 0] * np.log(p[p > 0])) for k, p in enumerate(self.occupation_probs) if k in modes))


def grand_canonical_fock_state(energies, beta, mu, n_cut):
    """Grand canonical Gibbs state truncated at n_cut particles per mode (quasi-free up to the cut)."""
    probs = []
    for e in energies:
        x = -beta * (e - mu)
        if x >= 0:
            raise InvalidInputError("chemical potential must lie below every mode energy")
        k = np.arange(n_cut + 1)
        lp = k * x
        probs.append(np.exp(lp - logsumexp(lp)))
    return ProductFockState(probs)


def reduced_state(basis, n, rho, modes):
    """Partial trace of a sector state onto the Fock space of a subset of modes."""
    states = sector_states(basis.n_modes, n)
    modes = list(modes)
    rest = [k for k in range(basis.n_modes) if k not in modes]
    a_keys = [tuple(s[modes]) for s in states]
    b_keys = [tuple(s[rest]) for s in states]
    a_index = {k: i for i, k in enumerate(sorted(set(a_keys)))}
    out = np.zeros((len(a_index), len(a_index)))
    groups = {}
    for idx, b in enumerate(b_keys):
        groups.setdefault(b, []).append(idx)
    for rows in groups.values():
        ai = [a_index[a_keys[r]] for r in rows]
        out[np.ix_(ai, ai)] += rho[np.ix_(rows, rows)]
    return out


def subadditivity_check(state, modes, tol=1e-10):
    basis = state.basis
    rho = state.density_matrix
    part_a = list(modes)
    part_b = [k for k in range(basis.n_modes) if k not in part_a]
    sa = von_neumann_entropy(reduced_state(basis, state.n_particles, rho, part_a))
    sb = von_neumann_entropy(reduced_state(basis, state.n_particles, rho, part_b))
    rep = Report()
    rep.add(leq("entropy_subadditivity", state.entropy, sa + sb, tol, modes=part_a))
    return rep
