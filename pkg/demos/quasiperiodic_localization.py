"""Bragg peaks across the localization transition of a quasiperiodic chain.

The cosine potential with a Fibonacci-approximant wave number drives the
chain through a localization transition at amplitude 1 (in hopping units).
First-order coherence (momentum distribution) loses its Bragg peaks in the
localized phase; the second-order noise correlations keep them. The peak
amplitude is largest right at the transition.
"""

import numpy as np

from hcb_noise import (LatticeScenario, Flat, Quasiperiodic,
                       compute_correlations, fibonacci_approximant, noise_map,
                       peak_contrast, solve)

L, N = 34, 10
fib = fibonacci_approximant(L)
# Bragg index F_n and its reflection L - F_n: {13, 21} at L=34
peaks = sorted({fib.numerator % L, (L - fib.numerator) % L})
window = sorted({q for p in peaks for q in range(p - 4, p + 5) if 0 < q < L})

print(f"L={L}, N={N}, gamma = {fib.numerator}/{fib.denominator}, "
      f"Bragg indices {peaks}")
print(f"{'lambda':>7} {'contrast nq':>12} {'contrast |Delta|':>17} "
      f"{'peak amp Delta':>15}")
for lam in (0.0, 0.5, 1.0, 2.0):
    pot = Flat() if lam == 0 else Quasiperiodic(lam, fib.numerator,
                                                fib.denominator, np.pi / 4)
    sc = LatticeScenario(L=L, N=N, bc="open", potential=pot)
    spectral = solve(sc)
    corr = compute_correlations(spectral)
    nm = noise_map(sc, spectral, corr, threads=2)
    cut = nm.delta[:, 0].real
    c_nq = peak_contrast(corr.nq, peaks, window)
    c_dd = peak_contrast(np.abs(cut), peaks, window)
    print(f"{lam:7.2g} {c_nq:12.3f} {c_dd:17.3f} {np.mean(cut[peaks]):15.5f}")

print()
print("Reading: past lambda = 1 the momentum contrast decays to ~1 (no peak)")
print("while the noise-correlation contrast survives; the amplitude column")
print("is maximal at the transition point lambda = 1.")
