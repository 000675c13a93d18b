"""Why hard-core bosons are not spins, four operators at a time.

Two-point functions cannot tell a hard-core boson chain from a spin-1/2
chain. Four-point strings can: whenever an annihilator meets a creator on
the same site, the boson passes through a virtually doubly-occupied state
(b b+ = 1 + b+b on the physical space) while the spin ladder kills it
(b b+ = 1 - b+b). This script shows the fingerprint on a small chain and
checks that the determinant engine reproduces the boson values exactly.
"""

import itertools

from hcb_noise import (LatticeScenario, compute_correlations, four_point,
                       hcb_ground_state, oracle_expectation,
                       oracle_four_point, solve)

# single occupied site
mott = hcb_ground_state(LatticeScenario(L=2, N=2, bc="open"))
print("single occupied site:")
print("  <1| b b+ |1>  bosonic :", oracle_expectation(mott, [(0, +1), (0, -1)]))
print("  <1| b b+ |1>  spin    :",
      oracle_expectation(mott, [(0, +1), (0, -1)], algebra="spin"))
print("  <1| b+ b |1>  both    :", oracle_expectation(mott, [(0, -1), (0, +1)]))
print()

sc = LatticeScenario(L=5, N=2, bc="open")
spectral = solve(sc)
corr = compute_correlations(spectral)
st_b = hcb_ground_state(sc)
st_s = hcb_ground_state(sc, algebra="spin")

print(f"L={sc.L}, N={sc.N} open chain: scanning all {sc.L ** 4} strings "
      "<b+_n b_m b+_l b_j>")
n_diff, n_checked, worst = 0, 0, 0.0
examples = []
for t in itertools.product(range(sc.L), repeat=4):
    v_b = oracle_four_point(st_b, t)
    v_s = oracle_four_point(st_s, t, algebra="spin")
    v_e = four_point(t, spectral.G, corr.B, spectral.g)
    worst = max(worst, abs(v_e - v_b))
    n_checked += 1
    if abs(v_b - v_s) > 1e-12:
        n_diff += 1
        if len(examples) < 4:
            examples.append((t, v_b, v_s))
print(f"  strings where the algebras differ: {n_diff}")
print(f"  worst |engine - bosonic oracle| over all strings: {worst:.2e}")
print("  sample differing strings (sites), bosonic vs spin:")
for t, v_b, v_s in examples:
    print(f"    {t}:  {v_b:+.6f}  vs  {v_s:+.6f}")
print()
print("Every differing string contains a same-site annihilate-create pair;")
print("the determinant engine follows the bosonic values on all of them.")
