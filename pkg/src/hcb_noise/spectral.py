"""Single-particle problem and the free-fermion propagators g and G.

The hard-core chain maps onto spinless fermions, so every correlation
formula downstream is built from the one-body density matrix of the filled
Fermi sea,

    g[l, m] = sum_{s < N} psi_l^(s) psi_m^(s),      G = 2 g - I.

The single-particle Hamiltonian is the real symmetric tridiagonal matrix
with -J on the off-diagonals and V_l on the diagonal; periodic chains add
-J hops at the (0, L-1) corners.

Note on periodic chains: the corner sign written here matches the hard-core
problem when the particle number is odd (the string operators leave the
boundary hop untouched only in that sector).  Even fillings on a ring would
need an antiperiodic fermion chain; scenarios in that regime are flagged by
``scenario.validate`` warnings and excluded from oracle gates.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateFermiError
from .scenario import LatticeScenario, potential_values

# tolerance for grouping degenerate multiplets
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SpectralData:
    """Sorted eigenpairs plus the propagators derived from the lowest N modes."""

    energies: np.ndarray   # (L,) ascending
    modes: np.ndarray      # (L, L), column s = psi^(s)
    g: np.ndarray          # (L, L) projector on the N lowest modes
    G: np.ndarray          # 2 g - I
    N: int

    @property
    def L(self) -> int:
        return self.energies.shape[0]


def build_single_particle(scenario: LatticeScenario) -> np.ndarray:
    """Dense real symmetric hopping matrix with the scenario's potential."""
    L, J = scenario.L, scenario.J
    H = np.zeros((L, L))
    V = potential_values(scenario)
    np.fill_diagonal(H, V)
    idx = np.arange(L - 1)
    H[idx, idx + 1] = -J
    H[idx + 1, idx] = -J
    if scenario.bc == "periodic" and L > 2:
        H[0, L - 1] = -J
        H[L - 1, 0] = -J
    return H


def _fix_mode_signs(modes: np.ndarray) -> np.ndarray:
    """Flip each column so its first significant component is positive."""
    out = modes.copy()
    for s in range(out.shape[1]):
        col = out[:, s]
        sig = np.nonzero(np.abs(col) > 1e-8 * np.abs(col).max())[0]
        if sig.size and col[sig[0]] < 0:
            out[:, s] = -col
    return out


def ground_modes(H: np.ndarray, N: int) -> SpectralData:
    """Diagonalize H and build the projector onto the N lowest modes.

    g is well defined only if the multiplet straddling level N is entirely
    included or excluded; a partially filled degenerate Fermi level raises
    ``DegenerateFermiError``.
    """
    L = H.shape[0]
    if not (1 <= N <= L):
        raise ValueError(f"N={N} outside [1, {L}]")
    if np.abs(H - H.T).max() > 1e-12 * max(1.0, np.abs(H).max()):
        raise ValueError("Hamiltonian must be symmetric")
    energies, modes = scipy.linalg.eigh(H)
    modes = _fix_mode_signs(modes)
    if N < L and energies[N] - energies[N - 1] < DEGENERACY_TOL:
        raise DegenerateFermiError(
            f"levels {N - 1} and {N} are degenerate "
            f"(E={energies[N - 1]:.12g}); the {N}-particle projector is ill-defined"
        )
    occ = modes[:, :N]
    g = occ @ occ.T
    g = 0.5 * (g + g.T)
    return SpectralData(energies=energies, modes=modes, g=g, G=big_G(g), N=N)


def big_G(g: np.ndarray) -> np.ndarray:
    """G = 2 g - I."""
    return 2.0 * g - np.eye(g.shape[0])


def solve(scenario: LatticeScenario) -> SpectralData:
    """Build and diagonalize the scenario's single-particle problem."""
    return ground_modes(build_single_particle(scenario), scenario.N)


def write_spectrum_csv(spectral: SpectralData, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("s,E_s\n")
        for s, e in enumerate(spectral.energies):
            fh.write(f"{s},{e:.17g}\n")


def write_gmatrix_csv(spectral: SpectralData, path) -> None:
    """Row-major dump of g; the header line carries the lattice size."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{spectral.L}\n")
        for row in spectral.g:
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
