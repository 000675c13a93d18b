"""Two-point hard-core correlations: B matrix, density profile, momentum distribution.

The off-diagonal one-body density matrix follows the classic string-operator
prescription: for a < b,

    B[a, b] = <b+_a b_b> = (1/2) det[ G[r, c] ],  r = a..b-1,  c = a+1..b,

a (b-a) x (b-a) determinant of the signed propagator G = 2g - I.  The ground
state is real, so B is symmetric and the a > b entry mirrors a < b.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ComplexResidueError, EmptySupportError

IMAG_DISCARD_TOL = 1e-12
IMAG_ERROR_TOL = 1e-9


@dataclass(frozen=True)
class CorrelationSet:
    B: np.ndarray          # (L, L) symmetric, diag = density
    density: np.ndarray    # n_j = g[j, j]
    nq: np.ndarray         # momentum distribution on the integer grid q = 0..L-1
    normalization: str = "per-site"

    @property
    def L(self) -> int:
        return self.B.shape[0]


def two_point(G: np.ndarray, a: int, b: int) -> float:
    """Single entry <b+_a b_b>; the diagonal is the density g_aa = (G_aa + 1)/2."""
    if a == b:
        return 0.5 * (G[a, a] + 1.0)
    if a > b:
        a, b = b, a
    rows = np.arange(a, b)
    cols = np.arange(a + 1, b + 1)
    return 0.5 * np.linalg.det(G[np.ix_(rows, cols)])


def build_two_point(G: np.ndarray) -> np.ndarray:
    """Full B matrix; determinants of equal size are evaluated in one batch."""
    L = G.shape[0]
    B = np.zeros((L, L))
    np.fill_diagonal(B, 0.5 * (np.diagonal(G) + 1.0))
    for k in range(1, L):
        a = np.arange(L - k)
        # stacked (L-k, k, k) blocks G[a+r, a+1+c], r, c = 0..k-1
        r = np.arange(k)
        rows = a[:, None, None] + r[None, :, None]
        cols = a[:, None, None] + 1 + r[None, None, :]
        vals = 0.5 * np.linalg.det(G[rows, cols])
        B[a, a + k] = vals
        B[a + k, a] = vals
    return B


def density(g: np.ndarray) -> np.ndarray:
    return np.diagonal(g).copy()


def momentum_distribution(B: np.ndarray, normalization: str = "per-site") -> np.ndarray:
    """n_q = sum_{n,m} exp(i 2 pi q (n-m) / L) B[n,m], optionally divided by L."""
    L = B.shape[0]
    phase = np.exp(2j * np.pi * np.outer(np.arange(L), np.arange(L)) / L)
    amp = phase @ B.astype(complex)
    nq = np.einsum("qm,qm->q", amp, phase.conj())
    worst = np.abs(nq.imag).max()
    if worst > IMAG_ERROR_TOL:
        raise ComplexResidueError(
            f"momentum distribution has imaginary residue {worst:g}"
        )
    nq = nq.real
    if normalization == "per-site":
        nq = nq / L
    return nq


def occupied_site_count(dens: np.ndarray, threshold: float) -> int:
    """Number of sites whose density exceeds the threshold (the trap support Z)."""
    return int(np.count_nonzero(dens > threshold))


def trap_renormalize(values: np.ndarray, dens: np.ndarray, threshold: float,
                     N: int = None) -> np.ndarray:
    """Rescale reported correlations by N/Z, Z = number of occupied sites."""
    Z = occupied_site_count(dens, threshold)
    if Z == 0:
        raise EmptySupportError("no site has density above the threshold")
    if N is None:
        N = int(round(float(np.sum(dens))))
    return np.asarray(values) * (N / Z)


def compute_correlations(spectral, normalization: str = "per-site") -> CorrelationSet:
    B = build_two_point(spectral.G)
    return CorrelationSet(
        B=B,
        density=density(spectral.g),
        nq=momentum_distribution(B, normalization),
        normalization=normalization,
    )


def write_density_csv(dens: np.ndarray, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("j,n_j\n")
        for j, v in enumerate(dens):
            fh.write(f"{j},{v:.17g}\n")


def write_momentum_csv(nq: np.ndarray, path) -> None:
    """Momentum distribution with both the integer index and 2*pi*q/L."""
    L = len(nq)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("q,q_phys,n_q\n")
        for q, v in enumerate(nq):
            fh.write(f"{q},{2 * np.pi * q / L:.17g},{v:.17g}\n")
