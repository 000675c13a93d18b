"""Brute-force exact diagonalization oracle on small lattices.

The ground state lives in the singly-occupied (hard-core) sector.  Operator
strings are evaluated by sequentially applying ladder operators to the state
vector, and the algebra switch decides what a creation operator does to an
occupied site:

* ``bosonic``  - true boson matrix elements, b+|n> = sqrt(n+1)|n+1>, so the
  string may pass through virtually doubly-occupied configurations.  This is
  the physical hard-core gas.
* ``spin``     - raising/lowering ladder, b+|1> = 0, the spin-1/2 picture.

The two differ exactly on strings containing a same-site annihilate-create
pair, which is the fingerprint of multiply occupied virtual states.

A finite-U Bose-Hubbard mode is included to demonstrate that the hard-core
values are the large-U limit of the full soft-core problem.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import CapError, DegenerateGroundError, TooLargeError
from .scenario import LatticeScenario, potential_values

MAX_ED_SITES = 12
MAX_NOISE_SITES = 8
GROUND_GAP_TOL = 1e-10
_DENSE_LIMIT = 2000


@dataclass(frozen=True)
class FockBasis:
    """Occupation-number basis with per-site cap and optional fixed total N."""

    L: int
    cap: int
    n_total: int = None
    states: tuple = field(repr=False, default=())
    index: dict = field(repr=False, default_factory=dict)

    @staticmethod
    def build(L: int, cap: int, n_total=None) -> "FockBasis":
        states = []
        for occ in itertools.product(range(cap + 1), repeat=L):
            if n_total is None or sum(occ) == n_total:
                states.append(occ)
        index = {occ: k for k, occ in enumerate(states)}
        return FockBasis(L=L, cap=cap, n_total=n_total, states=tuple(states), index=index)

    @property
    def dim(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class OracleState:
    basis: FockBasis
    ground: np.ndarray
    energy: float
    algebra: str = "bosonic"
    scenario: LatticeScenario = None

    @property
    def L(self) -> int:
        return self.basis.L


def _bonds(scenario: LatticeScenario):
    bonds = [(j, j + 1) for j in range(scenario.L - 1)]
    if scenario.bc == "periodic" and scenario.L > 2:
        bonds.append((scenario.L - 1, 0))
    return bonds


def _build_hamiltonian(basis: FockBasis, scenario: LatticeScenario, U: float = 0.0):
    """Sparse Hamiltonian in the given Fock basis (bosonic matrix elements)."""
    V = potential_values(scenario)
    dim = basis.dim
    rows, cols, vals = [], [], []
    diag = np.zeros(dim)
    for k, occ in enumerate(basis.states):
        occ_arr = np.asarray(occ)
        diag[k] = float(V @ occ_arr)
        if U:
            diag[k] += 0.5 * U * float(np.sum(occ_arr * (occ_arr - 1)))
        for (i, j) in _bonds(scenario):
            # hop j -> i and i -> j
            for src, dst in ((j, i), (i, j)):
                if occ[src] > 0 and occ[dst] < basis.cap:
                    new = list(occ)
                    new[src] -= 1
                    new[dst] += 1
                    amp = -scenario.J * np.sqrt(occ[src] * (occ[dst] + 1))
                    rows.append(basis.index[tuple(new)])
                    cols.append(k)
                    vals.append(amp)
    H = scipy.sparse.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    H = H + scipy.sparse.diags(diag)
    return H


def _lowest_eigpair(H, dim):
    if dim <= _DENSE_LIMIT:
        energies, vecs = scipy.linalg.eigh(H.toarray())
        return energies[: min(2, dim)], vecs[:, 0]
    energies, vecs = scipy.sparse.linalg.eigsh(H, k=2, which="SA", tol=0)
    order = np.argsort(energies)
    return energies[order[:2]], vecs[:, order[0]]


def _finalize_ground(basis, energies, vec, algebra, scenario):
    if len(energies) > 1 and energies[1] - energies[0] < GROUND_GAP_TOL:
        raise DegenerateGroundError(
            f"ground state degenerate within {GROUND_GAP_TOL:g} "
            f"(E0={energies[0]:.12g}, E1={energies[1]:.12g})"
        )
    vec = np.asarray(vec, dtype=float)
    # deterministic global sign: largest-magnitude amplitude positive
    k = int(np.argmax(np.abs(vec)))
    if vec[k] < 0:
        vec = -vec
    vec /= np.linalg.norm(vec)
    return OracleState(basis=basis, ground=vec, energy=float(energies[0]),
                       algebra=algebra, scenario=scenario)


def hcb_ground_state(scenario: LatticeScenario, algebra: str = "bosonic") -> OracleState:
    """Ground state of the hard-core chain in the singly-occupied N sector."""
    if scenario.L > MAX_ED_SITES:
        raise TooLargeError(f"oracle limited to L <= {MAX_ED_SITES}, got {scenario.L}")
    basis = FockBasis.build(scenario.L, cap=1, n_total=scenario.N)
    H = _build_hamiltonian(basis, scenario)
    energies, vec = _lowest_eigpair(H, basis.dim)
    return _finalize_ground(basis, energies, vec, algebra, scenario)


def bose_hubbard_ground(scenario: LatticeScenario, U: float, cap: int = 3) -> OracleState:
    """Ground state of the soft-core model with on-site repulsion U."""
    if scenario.L > MAX_NOISE_SITES:
        raise TooLargeError(f"soft-core oracle limited to L <= {MAX_NOISE_SITES}")
    if cap < 2:
        raise CapError("soft-core mode needs cap >= 2 to be distinguishable from hard-core")
    if U <= 0:
        raise ValueError("U must be positive")
    basis = FockBasis.build(scenario.L, cap=cap, n_total=scenario.N)
    H = _build_hamiltonian(basis, scenario, U=U)
    energies, vec = _lowest_eigpair(H, basis.dim)
    return _finalize_ground(basis, energies, vec, "bosonic", scenario)


# ---------------------------------------------------------------------------
# operator strings
# ---------------------------------------------------------------------------

def _apply_op(vec_dict, site, sign, algebra, cap):
    """Apply one ladder operator (sign +1 annihilate, -1 create) to a sparse ket."""
    out = {}
    for occ, amp in vec_dict.items():
        n = occ[site]
        if sign == +1:
            if n == 0:
                continue
            new_amp = amp * (np.sqrt(n) if algebra == "bosonic" else 1.0)
            new_n = n - 1
        else:
            if algebra == "bosonic":
                if n + 1 > cap:
                    continue
                new_amp = amp * np.sqrt(n + 1)
            else:
                if n >= 1:
                    continue
                new_amp = amp
            new_n = n + 1
        new = occ[:site] + (new_n,) + occ[site + 1:]
        out[new] = out.get(new, 0.0) + new_amp
    return out


def oracle_expectation(state: OracleState, ops, algebra=None, cap=2) -> float:
    """<psi| b^(s1)_{i1} ... b^(sk)_{ik} |psi> for an arbitrary operator string.

    ``ops`` is a sequence of (site, sign) in the order the string is written;
    the rightmost operator acts on the ket first.  For the bosonic algebra the
    string may pass through doubly occupied virtual configurations (cap >= 2).
    """
    algebra = algebra or state.algebra
    if algebra == "bosonic" and cap < 2:
        raise CapError("bosonic strings need cap >= 2 for virtual double occupancy")
    if algebra not in ("bosonic", "spin"):
        raise ValueError(f"unknown algebra {algebra!r}")
    if state.basis.cap > 1:
        # soft-core state: strings stay within the state's own capped space
        cap = state.basis.cap
    ket = {occ: amp for occ, amp in zip(state.basis.states, state.ground)
           if abs(amp) > 0.0}
    for site, sign in reversed(list(ops)):
        if not (0 <= site < state.L):
            raise ValueError(f"site {site} out of range")
        ket = _apply_op(ket, site, sign, algebra, cap)
        if not ket:
            return 0.0
    index = state.basis.index
    total = 0.0
    for occ, amp in ket.items():
        k = index.get(occ)
        if k is not None:
            total += state.ground[k] * amp
    return total


def oracle_four_point(state: OracleState, sites, signs=(-1, +1, -1, +1),
                      algebra=None) -> float:
    """Four-operator expectation; default signs give <b+_n b_m b+_l b_j>."""
    if len(sites) != 4 or len(signs) != 4:
        raise ValueError("need exactly four sites and four signs")
    return oracle_expectation(state, list(zip(sites, signs)), algebra=algebra)


def oracle_two_point_matrix(state: OracleState, algebra=None) -> np.ndarray:
    """B[i, j] = <b+_i b_j> from direct operator application."""
    L = state.L
    B = np.empty((L, L))
    for i in range(L):
        for j in range(L):
            B[i, j] = oracle_expectation(state, [(i, -1), (j, +1)], algebra=algebra)
    return B


def oracle_momentum_distribution(state: OracleState, normalization="per-site"):
    B = oracle_two_point_matrix(state)
    L = state.L
    n = np.arange(L)
    phase = np.exp(2j * np.pi * np.outer(np.arange(L), n) / L)
    nq = np.einsum("qn,nm,qm->q", phase, B.astype(complex), phase.conj()).real
    if normalization == "per-site":
        nq = nq / L
    return nq


def oracle_noise_map(state: OracleState, normalization="per-site"):
    """Direct L^4 summation of the momentum-space covariance map.

    Returns (delta, s4) where s4 is the raw four-point transform and delta
    subtracts the product of mean occupations (per-site normalization divides
    by L^2).
    """
    L = state.L
    if L > MAX_NOISE_SITES:
        raise TooLargeError(f"oracle noise map limited to L <= {MAX_NOISE_SITES}")
    # bucket four-point values by the index differences entering the phases
    T = np.zeros((L, L))
    for n, m, l, j in itertools.product(range(L), repeat=4):
        val = oracle_four_point(state, (n, m, l, j))
        if val:
            T[(n - m) % L, (l - j) % L] += val
    P = np.exp(2j * np.pi * np.outer(np.arange(L), np.arange(L)) / L)
    s4 = P.T @ T @ P
    nq = oracle_momentum_distribution(state, normalization="raw")
    if normalization == "per-site":
        delta = s4 / L**2 - np.outer(nq / L, nq / L)
    else:
        delta = s4 - np.outer(nq, nq)
    return delta, s4
